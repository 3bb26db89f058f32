//! Dataset ingestion and splitting.
//!
//! Two input formats are supported: IDX image/label containers (the MNIST
//! distribution format, optionally gzip-compressed) and delimited text files
//! of labeled time series (one series per line, label first — the layout
//! used by the common time-series classification archives).
//!
//! Splitting follows a two-stage protocol: an optional holdout fraction is
//! carved off first (persisted by callers but never consumed by
//! experiments), and the remainder is divided into train/test. All stages
//! are driven by a seeded shuffle, so a split is a pure function of
//! `(dataset, spec)`.

mod idx;
mod series;

pub use idx::load_mnist_idx;
pub use series::{load_series_dataset, Delimiter};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Row-major grayscale image with 8-bit pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub height: usize,
    pub width: usize,
    /// `height * width` bytes, row-major.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleData {
    Image(GrayImage),
    Series(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Image { height: usize, width: usize },
    Series,
}

/// An ordered collection of labeled samples of one kind. Sample `i`
/// corresponds to record `i` of the source file(s); loaders never reorder.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    name: String,
    kind: DatasetKind,
    samples: Vec<(SampleData, i32)>,
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, kind: DatasetKind, samples: Vec<(SampleData, i32)>) -> Self {
        LabeledDataset {
            name: name.into(),
            kind,
            samples,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample(&self, i: usize) -> &SampleData {
        &self.samples[i].0
    }

    pub fn label(&self, i: usize) -> i32 {
        self.samples[i].1
    }

    pub fn labels(&self) -> Vec<i32> {
        self.samples.iter().map(|(_, l)| *l).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(SampleData, i32)> {
        self.samples.iter()
    }

    /// Distinct labels, sorted ascending.
    pub fn classes(&self) -> Vec<i32> {
        let mut c: Vec<i32> = self.samples.iter().map(|(_, l)| *l).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Longest series in the dataset; `None` for image datasets.
    pub fn max_series_len(&self) -> Option<usize> {
        match self.kind {
            DatasetKind::Image { .. } => None,
            DatasetKind::Series => Some(
                self.samples
                    .iter()
                    .map(|(s, _)| match s {
                        SampleData::Series(v) => v.len(),
                        SampleData::Image(_) => 0,
                    })
                    .max()
                    .unwrap_or(0),
            ),
        }
    }

    /// Appends `other`'s samples after this dataset's, preserving order.
    /// Both datasets must have the same kind (and image shape).
    pub fn concat(mut self, other: LabeledDataset) -> Result<LabeledDataset> {
        if self.kind != other.kind {
            return Err(Error::DatasetShapeMismatch);
        }
        self.samples.extend(other.samples);
        Ok(self)
    }

    /// The sub-dataset at the given sample indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            name: self.name.clone(),
            kind: self.kind,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }
}

/// Parameters of the two-stage split. Fractions must lie in `[0, 1)`.
/// `max_train`/`max_test` optionally cap the split sizes (taking the first
/// samples in shuffled order), which gives seeded subsampling for
/// desk-scale runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub holdout_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
    pub max_train: Option<usize>,
    pub max_test: Option<usize>,
}

impl SplitSpec {
    pub fn new(holdout_fraction: f64, test_fraction: f64, seed: u64) -> Self {
        SplitSpec {
            holdout_fraction,
            test_fraction,
            seed,
            max_train: None,
            max_test: None,
        }
    }
}

/// Index-level result of a split: disjoint, exhaustive (before capping),
/// and a pure function of `(n, spec)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub holdout: Vec<usize>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Materialized split produced by [`split_dataset`].
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub holdout: LabeledDataset,
    pub train: LabeledDataset,
    pub test: LabeledDataset,
    /// Indices (into the source dataset) that went to the holdout set,
    /// for persisting to a sidecar file.
    pub holdout_indices: Vec<usize>,
}

/// Computes the split at the index level: shuffle `0..n` with a seeded
/// generator, take `round(holdout_fraction * n)` indices as holdout, then
/// `round(test_fraction * remaining)` as test, leaving the rest as train.
/// Caps are applied last.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<SplitIndices> {
    for (field, value) in [
        ("holdout_fraction", spec.holdout_fraction),
        ("test_fraction", spec.test_fraction),
    ] {
        if !(0.0..1.0).contains(&value) {
            return Err(Error::InvalidFraction { field, value });
        }
    }

    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    perm.shuffle(&mut rng);

    let n_holdout = (spec.holdout_fraction * n as f64).round() as usize;
    let holdout = perm[..n_holdout].to_vec();
    let remaining = &perm[n_holdout..];
    let n_test = (spec.test_fraction * remaining.len() as f64).round() as usize;
    let mut test = remaining[..n_test].to_vec();
    let mut train = remaining[n_test..].to_vec();

    if let Some(cap) = spec.max_train {
        train.truncate(cap);
    }
    if let Some(cap) = spec.max_test {
        test.truncate(cap);
    }
    Ok(SplitIndices {
        holdout,
        train,
        test,
    })
}

/// Splits a dataset into holdout/train/test per `spec`. The holdout portion
/// is returned (and its indices recorded) so callers can persist it, but
/// nothing in the experiment pipeline reads it.
pub fn split_dataset(ds: &LabeledDataset, spec: &SplitSpec) -> Result<DatasetSplit> {
    let idx = split_indices(ds.len(), spec)?;
    Ok(DatasetSplit {
        holdout: ds.subset(&idx.holdout),
        train: ds.subset(&idx.train),
        test: ds.subset(&idx.test),
        holdout_indices: idx.holdout,
    })
}
