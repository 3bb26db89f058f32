//! Nearest-centroid baseline: one mean vector per class, prediction by
//! smallest Euclidean distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::readout::for_each_set_bit;
use crate::reservoir::FeatureMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentroidModel {
    /// Class ids, sorted ascending.
    pub classes: Vec<i32>,
    pub dim: usize,
    /// Class-major per-class means: `centroids[c * dim + j]`.
    centroids: Vec<f64>,
    /// Cached `‖centroid_c‖²` for the distance shortcut.
    sumsq: Vec<f64>,
}

/// Computes per-class mean feature vectors.
pub fn train_centroid(features: &FeatureMatrix) -> Result<CentroidModel> {
    if features.n_rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let classes = features.classes();
    let dim = features.dim();
    let mut centroids = vec![0.0f64; classes.len() * dim];
    let mut counts = vec![0usize; classes.len()];

    for i in 0..features.n_rows() {
        let c = classes
            .binary_search(&features.labels()[i])
            .expect("label drawn from classes");
        counts[c] += 1;
        let base = c * dim;
        for_each_set_bit(features.row(i), |j| centroids[base + j] += 1.0);
    }
    for (c, &count) in counts.iter().enumerate() {
        debug_assert!(count > 0, "classes() only reports present labels");
        for j in 0..dim {
            centroids[c * dim + j] /= count as f64;
        }
    }
    let sumsq = centroids
        .chunks(dim)
        .map(|mu| mu.iter().map(|x| x * x).sum())
        .collect();
    Ok(CentroidModel {
        classes,
        dim,
        centroids,
        sumsq,
    })
}

impl CentroidModel {
    pub fn centroid(&self, class_index: usize) -> &[f64] {
        &self.centroids[class_index * self.dim..(class_index + 1) * self.dim]
    }

    /// Nearest centroid by Euclidean distance; ties go to the smallest
    /// class id. For a binary row x, `‖x − μ‖² = ‖x‖₁ − 2·Σ_{j∈x} μ_j + ‖μ‖²`
    /// and `‖x‖₁` is class-independent, so only the last two terms are
    /// compared.
    pub fn predict(&self, row: &[u64], dim: usize) -> Result<i32> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        let mut best = 0usize;
        let mut best_score = f64::INFINITY;
        for c in 0..self.classes.len() {
            let mu = self.centroid(c);
            let mut dot = 0.0;
            for_each_set_bit(row, |j| dot += mu[j]);
            let score = self.sumsq[c] - 2.0 * dot;
            if score < best_score {
                best_score = score;
                best = c;
            }
        }
        Ok(self.classes[best])
    }

    pub fn predict_batch(&self, features: &FeatureMatrix) -> Result<Vec<i32>> {
        if features.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: features.dim(),
            });
        }
        (0..features.n_rows())
            .into_par_iter()
            .map(|i| self.predict(features.row(i), features.dim()))
            .collect()
    }
}
