//! Dynamic time warping with an optional Sakoe-Chiba band, and the
//! 1-nearest-neighbor classifier built on it. This readout compares raw
//! series directly — no encoding or reservoir stage.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Warping constraint: `window` is the Sakoe-Chiba half-width in index
/// units, `None` means unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtwSpec {
    pub window: Option<usize>,
}

impl DtwSpec {
    pub fn unconstrained() -> Self {
        DtwSpec { window: None }
    }

    pub fn windowed(w: usize) -> Self {
        DtwSpec { window: Some(w) }
    }
}

/// Whether DP cell `(i, j)` lies inside the band. For unequal lengths the
/// band is centered on the proportional diagonal: the constraint is
/// `|i·(m−1) − j·(n−1)| ≤ w·max(n−1, m−1)`, which reduces to `|i − j| ≤ w`
/// when `n == m`. Exact in integer arithmetic.
fn in_band(i: usize, j: usize, n: usize, m: usize, window: Option<usize>) -> bool {
    match window {
        None => true,
        Some(w) => {
            let lhs = (i as i64 * (m as i64 - 1) - j as i64 * (n as i64 - 1)).abs();
            lhs <= w as i64 * (n as i64 - 1).max(m as i64 - 1)
        }
    }
}

/// Alignment cost between two series: the minimum over monotone alignment
/// paths of the summed per-step costs `|x_i − y_j|`, restricted to the
/// band. Errors if the band is too narrow to connect `(0, 0)` to the
/// opposite corner (possible for small windows and unequal lengths).
pub fn dtw_distance(x: &[f64], y: &[f64], spec: DtwSpec) -> Result<f64> {
    let (n, m) = (x.len(), y.len());
    if n == 0 || m == 0 {
        return Err(Error::EmptySeries);
    }
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for i in 0..n {
        cur.fill(f64::INFINITY);
        for j in 0..m {
            if !in_band(i, j, n, m, spec.window) {
                continue;
            }
            let base = if i == 0 && j == 0 {
                0.0
            } else {
                let mut b = f64::INFINITY;
                if i > 0 {
                    b = b.min(prev[j]);
                    if j > 0 {
                        b = b.min(prev[j - 1]);
                    }
                }
                if j > 0 {
                    b = b.min(cur[j - 1]);
                }
                b
            };
            if base.is_finite() {
                cur[j] = (x[i] - y[j]).abs() + base;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let result = prev[m - 1];
    if result.is_finite() {
        Ok(result)
    } else {
        Err(Error::BandTooNarrow {
            window: spec.window.expect("unconstrained DTW is always connected"),
            len_x: n,
            len_y: m,
        })
    }
}

/// Label of the training series nearest to `query` under [`dtw_distance`];
/// distance ties go to the lower training index. Series may have varying
/// lengths. Any band-connectivity error on any pair is propagated.
pub fn dtw_1nn_predict(
    train_series: &[Vec<f64>],
    train_labels: &[i32],
    query: &[f64],
    spec: DtwSpec,
) -> Result<i32> {
    if train_series.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if train_series.len() != train_labels.len() {
        return Err(Error::LabelCountMismatch {
            rows: train_series.len(),
            labels: train_labels.len(),
        });
    }
    let distances: Vec<f64> = train_series
        .par_iter()
        .map(|s| dtw_distance(s, query, spec))
        .collect::<Result<_>>()?;
    let mut best = 0usize;
    for (i, &d) in distances.iter().enumerate().skip(1) {
        if d < distances[best] {
            best = i;
        }
    }
    Ok(train_labels[best])
}
