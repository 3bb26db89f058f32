//! Declarative experiment harness.
//!
//! An [`ExperimentConfig`] fully determines a run: dataset, split protocol,
//! encoder, reservoir, readout, and the list of repetition seeds. The
//! [`Runner`] executes it as R repeated random splits, yielding a
//! [`ResultRecord`] whose payload (everything except wall time and
//! timestamp) is a pure function of the config. On top of single runs sit
//! ablation comparisons (CA arm vs identity arm, Welch t-test on the
//! per-repetition accuracies) and sweeps over rule sets with
//! Bonferroni-corrected significance against the no-CA baseline.

mod config;
mod records;
mod report;
mod runner;
mod solvability;
mod stats;

pub use config::{
    DatasetConfig, DelimiterConfig, EncoderConfig, ExperimentConfig, ReadoutConfig,
    RepetitionsConfig, ReservoirConfig, RuleField, SplitConfig,
};
pub use records::{AblationReport, ResultPayload, ResultRecord, RunTiming};
pub use report::{
    build_report_rows, parse_report_csv, read_records_jsonl, render_plot_data, render_report_csv,
    write_records_jsonl, ReportRow,
};
pub use runner::Runner;
pub use solvability::tag_linear_solvability;
pub use stats::{bonferroni_threshold, significance_test, welch_t_test, WelchTest};

use crate::{Error, Result};

/// Default significance level for corrected tests.
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Error-rate reduction of the CA arm over the ablation arm, in absolute
/// terms and as a fraction of the ablation error: returns
/// `(improvement, improvement_pct)` with `improvement = without − with` and
/// `improvement_pct = improvement / without`. A zero baseline error is
/// degenerate: if both arms are at zero the improvement fraction is defined
/// as 0, otherwise it is an error. Negative values mean the CA hurt.
pub fn compute_improvement(with_ca: f64, without_ca: f64) -> Result<(f64, f64)> {
    for rate in [with_ca, without_ca] {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::ErrorRateOutOfRange(rate));
        }
    }
    let improvement = without_ca - with_ca;
    let improvement_pct = if without_ca == 0.0 {
        if improvement == 0.0 {
            0.0
        } else {
            return Err(Error::DegenerateImprovement);
        }
    } else {
        improvement / without_ca
    };
    Ok((improvement, improvement_pct))
}
