//! Result records. The deterministic part of a run lives in
//! [`ResultPayload`] — a pure function of the experiment config — while
//! wall time and timestamp sit in a separate [`RunTiming`] block, so
//! reproducibility checks can compare payloads byte-for-byte.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultPayload {
    /// Hash of the config this run derives from.
    pub config_hash: String,
    /// Arm label: `"rule-<n>"` or `"none"` (ablation).
    pub arm: String,
    /// CA rule number, absent for the ablation arm.
    pub rule: Option<u8>,
    /// CA steps (feature rows − 1); equals the config value even for the
    /// ablation arm, where it has no effect.
    pub steps: usize,
    pub repetition_seeds: Vec<u64>,
    pub repetition_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// `1 − mean_accuracy`.
    pub mean_error_rate: f64,
    pub train_size: usize,
    pub test_size: usize,
    pub holdout_size: usize,
    /// Per-repetition linear-solvability tags, present when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub train_solvable: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub wall_time_s: f64,
    /// Seconds since the Unix epoch at completion.
    pub timestamp_unix_s: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    #[serde(flatten)]
    pub payload: ResultPayload,
    pub timing: RunTiming,
}

impl ResultRecord {
    /// JSON of the deterministic payload only — identical across repeated
    /// invocations of the same config.
    pub fn payload_json(&self) -> Result<String> {
        serde_json::to_string(&self.payload).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// Outcome of an ablation comparison: the CA arm against the identity arm,
/// improvement metrics on the mean error rates, and a Welch t-test over the
/// per-repetition accuracies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub with_ca: ResultRecord,
    pub without_ca: ResultRecord,
    /// `error(without) − error(with)`, in error-rate units.
    pub improvement: f64,
    /// `improvement / error(without)`.
    pub improvement_pct: f64,
    pub p_value: f64,
    /// Significant at the (corrected) threshold used for the comparison.
    pub significant: bool,
}

impl AblationReport {
    /// JSON with both timing blocks stripped, for determinism checks.
    pub fn payload_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Stripped<'a> {
            with_ca: &'a ResultPayload,
            without_ca: &'a ResultPayload,
            improvement: f64,
            improvement_pct: f64,
            p_value: f64,
            significant: bool,
        }
        serde_json::to_string(&Stripped {
            with_ca: &self.with_ca.payload,
            without_ca: &self.without_ca.payload,
            improvement: self.improvement,
            improvement_pct: self.improvement_pct,
            p_value: self.p_value,
            significant: self.significant,
        })
        .map_err(|e| Error::Serialize(e.to_string()))
    }
}
