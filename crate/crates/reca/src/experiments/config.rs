//! Experiment configuration: the TOML-serializable description that fully
//! determines a run. The SHA-256 hash of the canonical (JSON) serialization
//! is embedded in every output record so results trace back to an exact
//! invocation.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use crate::datasets::Delimiter;
use crate::readout::{DtwSpec, LinearHyper};
use crate::reservoir::ReservoirSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Human-readable experiment name, echoed into reports.
    pub name: String,
    pub dataset: DatasetConfig,
    pub split: SplitConfig,
    pub encoder: EncoderConfig,
    pub reservoir: ReservoirConfig,
    pub readout: ReadoutConfig,
    #[serde(default)]
    pub repetitions: RepetitionsConfig,
    /// When set, each repetition also reports whether the training features
    /// were perfectly linearly separable within the tagging budget.
    #[serde(default)]
    pub tag_solvability: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetConfig {
    /// IDX image/label file pairs, concatenated in order (e.g. the official
    /// train and test files pooled before splitting).
    Mnist {
        images: Vec<PathBuf>,
        labels: Vec<PathBuf>,
    },
    /// Delimited series files, concatenated in order.
    Series {
        paths: Vec<PathBuf>,
        #[serde(default)]
        delimiter: Option<DelimiterConfig>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelimiterConfig {
    Tab,
    Comma,
}

impl From<DelimiterConfig> for Delimiter {
    fn from(d: DelimiterConfig) -> Delimiter {
        match d {
            DelimiterConfig::Tab => Delimiter::Tab,
            DelimiterConfig::Comma => Delimiter::Comma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    /// Fraction set aside first and never touched by experiments.
    #[serde(default)]
    pub holdout_fraction: f64,
    /// Fraction of the remainder used for testing.
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    /// Cap on training samples (seeded subsampling), applied after the split.
    #[serde(default)]
    pub max_train: Option<usize>,
    /// Cap on test samples, applied after the split.
    #[serde(default)]
    pub max_test: Option<usize>,
}

fn default_test_fraction() -> f64 {
    0.10
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            holdout_fraction: 0.0,
            test_fraction: default_test_fraction(),
            max_train: None,
            max_test: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EncoderConfig {
    /// Threshold image pixels to bits and flatten row-major (image datasets).
    Flatten,
    /// Similarity-preserving expansion (series datasets): thermometer code
    /// with `n` levels XORed with seeded random position keys.
    Simexp {
        #[serde(default = "default_simexp_n")]
        n: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn default_simexp_n() -> usize {
    16
}

/// CA rule in configs: a number `0..=255`, or the string `"none"` for the
/// identity (ablation) reservoir.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleField {
    Number(u64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    pub rule: RuleField,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    ReservoirSpec::DEFAULT_STEPS
}

impl ReservoirConfig {
    /// Parses/validates the rule field.
    pub fn rule(&self) -> Result<Option<u8>> {
        match &self.rule {
            RuleField::Number(n) => {
                if *n > 255 {
                    return Err(Error::InvalidRule(*n));
                }
                Ok(Some(*n as u8))
            }
            RuleField::Name(s) if s == "none" => Ok(None),
            RuleField::Name(s) => Err(Error::Config(format!(
                "reservoir.rule must be a number 0..=255 or \"none\", got {s:?}"
            ))),
        }
    }

    pub fn spec(&self) -> Result<ReservoirSpec> {
        Ok(ReservoirSpec::new(self.rule()?, self.steps))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReadoutConfig {
    Linear {
        #[serde(default = "default_reg")]
        reg: f64,
        #[serde(default = "default_linear_epochs")]
        epochs: usize,
    },
    Centroid,
    Knn {
        #[serde(default = "default_k")]
        k: usize,
    },
    Perceptron {
        #[serde(default = "default_linear_epochs")]
        epochs: usize,
    },
    /// DTW 1-nearest-neighbor on raw series; bypasses encoder and reservoir.
    Dtw1nn {
        #[serde(default)]
        window: Option<usize>,
    },
}

fn default_reg() -> f64 {
    LinearHyper::default().reg
}

fn default_linear_epochs() -> usize {
    LinearHyper::default().epochs
}

fn default_k() -> usize {
    5
}

impl ReadoutConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ReadoutConfig::Linear { .. } => "linear",
            ReadoutConfig::Centroid => "centroid",
            ReadoutConfig::Knn { .. } => "knn",
            ReadoutConfig::Perceptron { .. } => "perceptron",
            ReadoutConfig::Dtw1nn { .. } => "dtw1nn",
        }
    }

    pub fn dtw_spec(&self) -> Option<DtwSpec> {
        match self {
            ReadoutConfig::Dtw1nn { window } => Some(DtwSpec { window: *window }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepetitionsConfig {
    /// Number of repeated random splits; ignored if `seeds` is given.
    #[serde(default)]
    pub count: Option<usize>,
    /// First seed when deriving `count` consecutive seeds.
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
    /// Explicit per-repetition seeds; overrides `count`/`base_seed`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
}

fn default_base_seed() -> u64 {
    42
}

pub const DEFAULT_REPETITIONS: usize = 10;

impl Default for RepetitionsConfig {
    fn default() -> Self {
        RepetitionsConfig {
            count: None,
            base_seed: default_base_seed(),
            seeds: None,
        }
    }
}

impl RepetitionsConfig {
    /// The effective seed list: explicit seeds if given, otherwise
    /// `base_seed, base_seed+1, …` for `count` (default 10) repetitions.
    pub fn seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => {
                let count = self.count.unwrap_or(DEFAULT_REPETITIONS);
                (0..count as u64).map(|i| self.base_seed + i).collect()
            }
        }
    }
}

impl ExperimentConfig {
    /// Structural validation beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("split.holdout_fraction", self.split.holdout_fraction),
            ("split.test_fraction", self.split.test_fraction),
        ] {
            if !(0.0..1.0).contains(&value) {
                return Err(Error::InvalidFraction { field, value });
            }
        }
        let rule = self.reservoir.rule()?;

        let is_series = matches!(self.dataset, DatasetConfig::Series { .. });
        match &self.encoder {
            EncoderConfig::Flatten if is_series => {
                return Err(Error::Config(
                    "encoder \"flatten\" requires an image dataset; use \"simexp\" for series"
                        .into(),
                ));
            }
            EncoderConfig::Simexp { n, .. } => {
                if !is_series {
                    return Err(Error::Config(
                        "encoder \"simexp\" requires a series dataset; use \"flatten\" for images"
                            .into(),
                    ));
                }
                if *n == 0 {
                    return Err(Error::Config("encoder.n must be >= 1".into()));
                }
            }
            _ => {}
        }

        match &self.readout {
            ReadoutConfig::Linear { reg, epochs: _ } => {
                if *reg <= 0.0 || !reg.is_finite() {
                    return Err(Error::Config(format!(
                        "readout.reg must be positive, got {reg}"
                    )));
                }
            }
            ReadoutConfig::Knn { k } => {
                if *k == 0 {
                    return Err(Error::KZero);
                }
            }
            ReadoutConfig::Dtw1nn { .. } => {
                if !is_series {
                    return Err(Error::Config(
                        "readout \"dtw1nn\" requires a series dataset".into(),
                    ));
                }
                if rule.is_some() {
                    return Err(Error::Config(
                        "readout \"dtw1nn\" compares raw series; set reservoir.rule = \"none\""
                            .into(),
                    ));
                }
            }
            _ => {}
        }

        if self.repetitions.seeds().is_empty() {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        match &self.dataset {
            DatasetConfig::Mnist { images, labels } => {
                if images.is_empty() || images.len() != labels.len() {
                    return Err(Error::Config(
                        "dataset.images and dataset.labels must be nonempty parallel lists".into(),
                    ));
                }
            }
            DatasetConfig::Series { paths, .. } => {
                if paths.is_empty() {
                    return Err(Error::Config("dataset.paths must be nonempty".into()));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical serialization — the identity of this exact
    /// experiment, embedded in all outputs.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file, resolving relative dataset paths against the
    /// config file's directory. A missing or unreadable file is a config
    /// error (the config names the experiment; data errors are reserved for
    /// dataset files).
    pub fn from_toml_path(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let Some(dir) = path.parent() {
            cfg.rebase_paths(dir);
        }
        Ok(cfg)
    }

    /// Points every dataset path at `dir`, keeping the configured file
    /// names — for running one config against a relocated copy of its data.
    pub fn retarget_dataset_dir(&mut self, dir: &Path) {
        let retarget = |p: &mut PathBuf| {
            if let Some(name) = p.file_name() {
                *p = dir.join(name);
            }
        };
        match &mut self.dataset {
            DatasetConfig::Mnist { images, labels } => {
                images.iter_mut().for_each(retarget);
                labels.iter_mut().for_each(retarget);
            }
            DatasetConfig::Series { paths, .. } => paths.iter_mut().for_each(retarget),
        }
    }

    /// Resolves relative dataset paths against `base`.
    pub fn rebase_paths(&mut self, base: &Path) {
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.dataset {
            DatasetConfig::Mnist { images, labels } => {
                images.iter_mut().for_each(rebase);
                labels.iter_mut().for_each(rebase);
            }
            DatasetConfig::Series { paths, .. } => paths.iter_mut().for_each(rebase),
        }
    }
}

/// Derives independent sub-seeds for the different consumers of one
/// repetition seed (split shuffle, SGD shuffles, …) so they never share a
/// generator stream. SplitMix64 over (seed, purpose).
pub(crate) fn derive_seed(seed: u64, purpose: u64) -> u64 {
    let mut z = seed
        .wrapping_add(purpose.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
