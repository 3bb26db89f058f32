//! The fixed (untrained) reservoir stage: run a CA on each encoded sample
//! and hand the trajectory to the readout as a flat feature vector.
//!
//! With a rule present, the features are the concatenated trajectory rows
//! `0..=steps` — the initial condition plus every CA state — so the feature
//! dimension is `(steps + 1) * L`. With no rule the stage is the identity
//! map (features = encoding), which is the ablation arm used to measure
//! what the CA actually contributes. The first `L` feature columns of a CA
//! arm therefore always equal the ablation features.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ca::{evolve, BinaryState, RuleTable};
use crate::encoding::EncodedSample;
use crate::{Error, Result};

/// What the reservoir stage does: evolve `rule` for `steps` updates, or
/// pass encodings through unchanged when `rule` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservoirSpec {
    pub rule: Option<u8>,
    pub steps: usize,
}

impl ReservoirSpec {
    pub const DEFAULT_STEPS: usize = 3;

    pub fn new(rule: Option<u8>, steps: usize) -> Self {
        ReservoirSpec { rule, steps }
    }

    /// The identity reservoir (no CA).
    pub fn ablation() -> Self {
        ReservoirSpec {
            rule: None,
            steps: Self::DEFAULT_STEPS,
        }
    }

    pub fn rule_table(&self) -> Option<RuleTable> {
        self.rule
            .map(|n| RuleTable::from_number(n as u64).expect("u8 is always a valid rule"))
    }

    /// Feature dimension produced for encodings of length `len`.
    pub fn feature_dim(&self, len: usize) -> usize {
        match self.rule {
            Some(_) => (self.steps + 1) * len,
            None => len,
        }
    }
}

/// Features for one sample: the concatenated CA trajectory rows, or the
/// sample itself for the ablation arm.
pub fn reca_features(spec: &ReservoirSpec, sample: &EncodedSample) -> Result<BinaryState> {
    match spec.rule_table() {
        None => Ok(sample.bits.clone()),
        Some(rule) => Ok(evolve(rule, &sample.bits, spec.steps)?.concat_rows()),
    }
}

/// Labeled binary feature rows, bit-packed contiguously: row `i` occupies
/// `words_per_row` words starting at `i * words_per_row`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: Vec<u64>,
    words_per_row: usize,
    dim: usize,
    labels: Vec<i32>,
}

impl FeatureMatrix {
    /// Packs pre-built rows. All rows must share one length, and there must
    /// be exactly one label per row.
    pub fn from_rows(rows: Vec<BinaryState>, labels: Vec<i32>) -> Result<FeatureMatrix> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != labels.len() {
            return Err(Error::LabelCountMismatch {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        let dim = rows[0].len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::RaggedSamples {
                index: i,
                expected: dim,
                found: row.len(),
            });
        }
        let words_per_row = rows[0].words().len();
        let mut data = Vec::with_capacity(rows.len() * words_per_row);
        for row in &rows {
            data.extend_from_slice(row.words());
        }
        Ok(FeatureMatrix {
            data,
            words_per_row,
            dim,
            labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Packed words of row `i`.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        debug_assert!(col < self.dim);
        ((self.row(row)[col / 64] >> (col % 64)) & 1) as u8
    }

    /// Distinct labels, sorted ascending.
    pub fn classes(&self) -> Vec<i32> {
        let mut c = self.labels.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Rows as `'0'`/`'1'` text plus the label, one sample per line —
    /// a debugging/inspection dump.
    pub fn to_text_dump(&self) -> String {
        let mut out = String::with_capacity(self.n_rows() * (self.dim + 8));
        for i in 0..self.n_rows() {
            for col in 0..self.dim {
                out.push(if self.get(i, col) == 1 { '1' } else { '0' });
            }
            out.push(' ');
            out.push_str(&self.labels[i].to_string());
            out.push('\n');
        }
        out
    }
}

/// Runs the reservoir over a whole sample set (in parallel; row order is
/// the sample order regardless of scheduling) and packs the results.
pub fn build_feature_matrix(
    spec: &ReservoirSpec,
    samples: &[EncodedSample],
    labels: &[i32],
) -> Result<FeatureMatrix> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if samples.len() != labels.len() {
        return Err(Error::LabelCountMismatch {
            rows: samples.len(),
            labels: labels.len(),
        });
    }
    let expected = samples[0].bits.len();
    if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.bits.len() != expected) {
        return Err(Error::RaggedSamples {
            index: i,
            expected,
            found: s.bits.len(),
        });
    }
    let rows: Vec<BinaryState> = samples
        .par_iter()
        .map(|s| reca_features(spec, s))
        .collect::<Result<_>>()?;
    FeatureMatrix::from_rows(rows, labels.to_vec())
}
