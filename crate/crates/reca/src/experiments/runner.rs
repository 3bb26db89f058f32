//! Experiment execution: from a validated config to result records.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::datasets::{
    load_mnist_idx, load_series_dataset, split_dataset, split_indices, DatasetKind,
    DatasetSplit, LabeledDataset, SampleData, SplitSpec,
};
use crate::encoding::{binarize_image, flatten, EncodedSample, SimExpEncoder};
use crate::experiments::config::{derive_seed, DatasetConfig, EncoderConfig, ReadoutConfig};
use crate::experiments::records::{AblationReport, ResultPayload, ResultRecord, RunTiming};
use crate::experiments::{
    compute_improvement, significance_test, tag_linear_solvability, ExperimentConfig,
};
use crate::readout::{
    accuracy, dtw_1nn_predict, knn_predict_batch, train_centroid, train_linear,
    train_perceptron, DtwSpec, LinearHyper, PerceptronHyper,
};
use crate::reservoir::{build_feature_matrix, FeatureMatrix, ReservoirSpec};
use crate::{Error, Result};

// Sub-seed purposes derived from each repetition seed.
const SEED_SPLIT: u64 = 0;
const SEED_TRAIN: u64 = 1;

/// Loads a config's dataset once and runs experiments against it.
pub struct Runner {
    cfg: ExperimentConfig,
    hash: String,
    dataset: LabeledDataset,
}

fn load_dataset(cfg: &ExperimentConfig) -> Result<LabeledDataset> {
    let mut ds = match &cfg.dataset {
        DatasetConfig::Mnist { images, labels } => {
            let mut parts = images.iter().zip(labels);
            let (img0, lab0) = parts.next().expect("validated nonempty");
            let mut ds = load_mnist_idx(img0, lab0)?;
            for (img, lab) in parts {
                ds = ds.concat(load_mnist_idx(img, lab)?)?;
            }
            ds
        }
        DatasetConfig::Series { paths, delimiter } => {
            let delim = delimiter.map(Into::into);
            let mut parts = paths.iter();
            let first = parts.next().expect("validated nonempty");
            let mut ds = load_series_dataset(first, delim)?;
            for path in parts {
                ds = ds.concat(load_series_dataset(path, delim)?)?;
            }
            ds
        }
    };
    ds.set_name(cfg.name.clone());
    Ok(ds)
}

fn series_view(ds: &LabeledDataset) -> (Vec<&[f64]>, Vec<i32>) {
    let mut series = Vec::with_capacity(ds.len());
    let mut labels = Vec::with_capacity(ds.len());
    for (data, label) in ds.iter() {
        match data {
            SampleData::Series(v) => series.push(v.as_slice()),
            SampleData::Image(_) => unreachable!("validated as a series dataset"),
        }
        labels.push(*label);
    }
    (series, labels)
}

impl Runner {
    pub fn new(cfg: ExperimentConfig) -> Result<Runner> {
        cfg.validate()?;
        let dataset = load_dataset(&cfg)?;
        if dataset.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let hash = cfg.hash();
        Ok(Runner { cfg, hash, dataset })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    pub fn dataset(&self) -> &LabeledDataset {
        &self.dataset
    }

    /// The holdout indices each repetition seed produces — for persisting
    /// to a sidecar file. Experiments never read these.
    pub fn holdout_sets(&self) -> Result<Vec<(u64, Vec<usize>)>> {
        self.cfg
            .repetitions
            .seeds()
            .into_iter()
            .map(|seed| {
                let spec = self.split_spec(seed);
                Ok((seed, split_indices(self.dataset.len(), &spec)?.holdout))
            })
            .collect()
    }

    fn split_spec(&self, seed: u64) -> SplitSpec {
        SplitSpec {
            holdout_fraction: self.cfg.split.holdout_fraction,
            test_fraction: self.cfg.split.test_fraction,
            seed: derive_seed(seed, SEED_SPLIT),
            max_train: self.cfg.split.max_train,
            max_test: self.cfg.split.max_test,
        }
    }

    /// Runs the configured arm.
    pub fn run(&self) -> Result<ResultRecord> {
        self.run_arm(self.cfg.reservoir.rule()?)
    }

    /// Runs the experiment with the reservoir rule overridden (`None` for
    /// the ablation arm). All other config stays fixed, so records from
    /// different arms are directly comparable.
    pub fn run_arm(&self, rule: Option<u8>) -> Result<ResultRecord> {
        let started = Instant::now();
        let seeds = self.cfg.repetitions.seeds();
        let mut accuracies = Vec::with_capacity(seeds.len());
        let mut solvable = Vec::new();
        let mut sizes = (0usize, 0usize, 0usize);
        for &seed in &seeds {
            let once = self.run_once(rule, seed)?;
            accuracies.push(once.accuracy);
            if let Some(tag) = once.train_solvable {
                solvable.push(tag);
            }
            sizes = (once.train_size, once.test_size, once.holdout_size);
        }
        let mean_accuracy = accuracies.iter().sum::<f64>() / accuracies.len() as f64;
        let payload = ResultPayload {
            config_hash: self.hash.clone(),
            arm: match rule {
                Some(r) => format!("rule-{r}"),
                None => "none".to_string(),
            },
            rule,
            steps: self.cfg.reservoir.steps,
            repetition_seeds: seeds,
            repetition_accuracies: accuracies,
            mean_accuracy,
            mean_error_rate: 1.0 - mean_accuracy,
            train_size: sizes.0,
            test_size: sizes.1,
            holdout_size: sizes.2,
            train_solvable: if solvable.is_empty() {
                None
            } else {
                Some(solvable)
            },
        };
        Ok(ResultRecord {
            payload,
            timing: RunTiming {
                wall_time_s: started.elapsed().as_secs_f64(),
                timestamp_unix_s: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            },
        })
    }

    /// Compares the configured CA arm against the ablation arm and tests
    /// the difference (Welch, threshold `alpha`; single comparison, so no
    /// correction). Requires `reservoir.rule` to be a number and at least
    /// 2 repetitions.
    pub fn ablate(&self, alpha: f64) -> Result<AblationReport> {
        let rule = self.cfg.reservoir.rule()?.ok_or_else(|| {
            Error::Config(
                "ablate compares reservoir.rule against \"none\"; set a rule number".into(),
            )
        })?;
        let with_ca = self.run_arm(Some(rule))?;
        let without_ca = self.run_arm(None)?;
        let (improvement, improvement_pct) = compute_improvement(
            with_ca.payload.mean_error_rate,
            without_ca.payload.mean_error_rate,
        )?;
        let (p_value, significant) = significance_test(&with_ca, &without_ca, 1, alpha)?;
        Ok(AblationReport {
            with_ca,
            without_ca,
            improvement,
            improvement_pct,
            p_value,
            significant,
        })
    }

    /// Runs the ablation baseline plus every rule in `rules` (deduplicated,
    /// ascending). The baseline record comes first; rule records follow in
    /// rule order regardless of scheduling.
    pub fn sweep(&self, rules: &[u8]) -> Result<Vec<ResultRecord>> {
        let mut rules: Vec<u8> = rules.to_vec();
        rules.sort_unstable();
        rules.dedup();
        let baseline = self.run_arm(None)?;
        let mut records = vec![baseline];
        let rule_records: Vec<ResultRecord> = rules
            .par_iter()
            .map(|&r| self.run_arm(Some(r)))
            .collect::<Result<_>>()?;
        records.extend(rule_records);
        Ok(records)
    }

    fn run_once(&self, rule: Option<u8>, seed: u64) -> Result<RepetitionOutcome> {
        let split = split_dataset(&self.dataset, &self.split_spec(seed))?;
        if split.train.is_empty() || split.test.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let sizes = (split.train.len(), split.test.len(), split.holdout.len());

        if let ReadoutConfig::Dtw1nn { window } = &self.cfg.readout {
            let spec = DtwSpec { window: *window };
            let (train_series, train_labels) = series_view(&split.train);
            let train_owned: Vec<Vec<f64>> =
                train_series.iter().map(|s| s.to_vec()).collect();
            let (test_series, test_labels) = series_view(&split.test);
            let predictions: Vec<i32> = test_series
                .iter()
                .map(|q| dtw_1nn_predict(&train_owned, &train_labels, q, spec))
                .collect::<Result<_>>()?;
            let acc = accuracy(&predictions, &test_labels)?;
            return Ok(RepetitionOutcome {
                accuracy: acc,
                train_solvable: None,
                train_size: sizes.0,
                test_size: sizes.1,
                holdout_size: sizes.2,
            });
        }

        let (train_feats, test_feats) = self.build_features(rule, &split)?;
        let train_seed = derive_seed(seed, SEED_TRAIN);
        let predictions = match &self.cfg.readout {
            ReadoutConfig::Linear { reg, epochs } => {
                let model = train_linear(
                    &train_feats,
                    LinearHyper {
                        reg: *reg,
                        epochs: *epochs,
                        seed: train_seed,
                    },
                )?;
                model.predict_batch(&test_feats)?
            }
            ReadoutConfig::Centroid => {
                train_centroid(&train_feats)?.predict_batch(&test_feats)?
            }
            ReadoutConfig::Knn { k } => knn_predict_batch(&train_feats, &test_feats, *k)?,
            ReadoutConfig::Perceptron { epochs } => {
                let model = train_perceptron(
                    &train_feats,
                    PerceptronHyper {
                        epochs: *epochs,
                        seed: train_seed,
                    },
                )?;
                model.predict_batch(&test_feats)?
            }
            ReadoutConfig::Dtw1nn { .. } => unreachable!("handled above"),
        };
        let acc = accuracy(&predictions, test_feats.labels())?;
        let train_solvable = self
            .cfg
            .tag_solvability
            .then(|| tag_linear_solvability(&train_feats));
        Ok(RepetitionOutcome {
            accuracy: acc,
            train_solvable,
            train_size: sizes.0,
            test_size: sizes.1,
            holdout_size: sizes.2,
        })
    }

    fn build_features(
        &self,
        rule: Option<u8>,
        split: &DatasetSplit,
    ) -> Result<(FeatureMatrix, FeatureMatrix)> {
        let rspec = ReservoirSpec::new(rule, self.cfg.reservoir.steps);
        let encode_split = |ds: &LabeledDataset| -> Result<Vec<EncodedSample>> {
            match (self.dataset.kind(), &self.cfg.encoder) {
                (DatasetKind::Image { .. }, EncoderConfig::Flatten) => Ok((0..ds.len())
                    .into_par_iter()
                    .map(|i| match ds.sample(i) {
                        SampleData::Image(img) => flatten(&binarize_image(img), i),
                        SampleData::Series(_) => unreachable!("validated as images"),
                    })
                    .collect()),
                (DatasetKind::Series, EncoderConfig::Simexp { n, seed }) => {
                    // Normalization comes from the training split only, but
                    // the padded length covers the whole dataset so held-out
                    // and test series always fit.
                    let max_len = self
                        .dataset
                        .max_series_len()
                        .expect("series dataset has a max length");
                    let (train_series, _) = series_view(&split.train);
                    let encoder = SimExpEncoder::fit(&train_series, *n, max_len, *seed)?;
                    (0..ds.len())
                        .into_par_iter()
                        .map(|i| match ds.sample(i) {
                            SampleData::Series(v) => encoder.encode(v, i),
                            SampleData::Image(_) => unreachable!("validated as series"),
                        })
                        .collect()
                }
                _ => Err(Error::Config(
                    "encoder kind does not match dataset kind".into(),
                )),
            }
        };
        let train_samples = encode_split(&split.train)?;
        let test_samples = encode_split(&split.test)?;
        let train = build_feature_matrix(&rspec, &train_samples, &split.train.labels())?;
        let test = build_feature_matrix(&rspec, &test_samples, &split.test.labels())?;
        Ok((train, test))
    }
}

struct RepetitionOutcome {
    accuracy: f64,
    train_solvable: Option<bool>,
    train_size: usize,
    test_size: usize,
    holdout_size: usize,
}
