//! Significance testing for arm comparisons: Welch's unequal-variance
//! two-sample t-test on per-repetition accuracies, with Bonferroni
//! correction when many rules are compared against one baseline.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::experiments::records::ResultRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    // A constant sample has mean x and variance exactly 0; computing it
    // through the rounded mean would leave ~1e-32 of noise and bypass the
    // zero-variance limiting behavior below.
    if xs.iter().all(|x| *x == xs[0]) {
        return (xs[0], 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Welch's t-test on two samples of at least 2 observations each.
///
/// Degenerate zero-variance cases are resolved by the limiting behavior:
/// identical constant samples give `p = 1` (no evidence of difference),
/// constant samples with different means give `p = 0`.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    let n = a.len().min(b.len());
    if n < 2 {
        return Err(Error::TooFewRepetitions(n));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let se2 = va / na + vb / nb;

    if se2 == 0.0 {
        return Ok(if ma == mb {
            WelchTest {
                t: 0.0,
                df: na + nb - 2.0,
                p_value: 1.0,
            }
        } else {
            WelchTest {
                t: if ma > mb {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                },
                df: na + nb - 2.0,
                p_value: 0.0,
            }
        });
    }

    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0 when variances are nonzero");
    let p_value = (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0);
    Ok(WelchTest { t, df, p_value })
}

/// The per-comparison threshold when `m` comparisons share a family-wise
/// level `alpha`.
pub fn bonferroni_threshold(alpha: f64, m: usize) -> f64 {
    alpha / m.max(1) as f64
}

/// Tests a rule arm against the baseline arm: Welch's t-test on the
/// per-repetition accuracies, significant iff `p < alpha / m`.
pub fn significance_test(
    rule_record: &ResultRecord,
    baseline_record: &ResultRecord,
    m: usize,
    alpha: f64,
) -> Result<(f64, bool)> {
    let test = welch_t_test(
        &rule_record.payload.repetition_accuracies,
        &baseline_record.payload.repetition_accuracies,
    )?;
    Ok((test.p_value, test.p_value < bonferroni_threshold(alpha, m)))
}
