//! Trainable output layers and baselines for the reservoir features.
//!
//! The main readout is a one-vs-rest linear classifier trained by averaged
//! stochastic subgradient descent on the hinge loss with L2 regularization
//! ([`train_linear`]). Baselines: nearest-centroid, k-nearest-neighbors, a
//! multiclass perceptron, and DTW nearest-neighbor operating on raw series
//! (no encoding or reservoir). All tie-breaking is deterministic — smallest
//! class id for score/vote ties, lowest sample index for distance ties — so
//! every readout is bitwise reproducible given data, hyperparameters, and
//! seed.

mod centroid;
mod dtw;
mod knn;
mod linear;
mod metrics;
mod perceptron;

pub use centroid::{train_centroid, CentroidModel};
pub use dtw::{dtw_1nn_predict, dtw_distance, DtwSpec};
pub use knn::{knn_predict, knn_predict_batch};
pub use linear::{train_linear, LinearHyper, LinearModel};
pub(crate) use linear::train_linear_impl;
pub use metrics::{accuracy, error_rate};
pub use perceptron::{train_perceptron, PerceptronHyper};

/// Calls `f` with the index of every set bit in a packed row, ascending.
pub(crate) fn for_each_set_bit(row: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in row.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            f(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

/// Index of the maximum score, first occurrence on ties. With class lists
/// sorted ascending this implements the "smallest class id wins" rule.
pub(crate) fn argmax_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
