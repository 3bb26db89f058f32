//! Multiclass perceptron: a single linear layer trained by the classic
//! mistake-driven update. For each (shuffled) training sample the current
//! model predicts; on a mistake the sample is added to the true class's
//! weights and subtracted from the predicted class's. No bias term, no
//! learning rate, a fixed number of epochs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::readout::linear::{class_indices, LinearModel};
use crate::readout::{argmax_first, for_each_set_bit, LinearHyper};
use crate::reservoir::FeatureMatrix;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptronHyper {
    pub epochs: usize,
    /// Seed for the per-epoch shuffles.
    pub seed: u64,
}

impl Default for PerceptronHyper {
    fn default() -> Self {
        PerceptronHyper { epochs: 20, seed: 0 }
    }
}

/// Trains the multiclass perceptron. Returns a [`LinearModel`] with zero
/// bias and `reg = 0`; its `train_loss` records the fraction of mistakes
/// made during each epoch's pass (not a retained-best curve — the final
/// weights are simply those after the last epoch). With zero epochs the
/// model is all-zero and predicts the smallest class everywhere.
pub fn train_perceptron(features: &FeatureMatrix, hyper: PerceptronHyper) -> Result<LinearModel> {
    let (classes, y_idx) = class_indices(features)?;
    let n_classes = classes.len();
    let dim = features.dim();
    let n = features.n_rows();

    // Feature-major for cache-friendly score accumulation.
    let mut w = vec![0.0f64; dim * n_classes];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut scores = vec![0.0f64; n_classes];
    let mut mistake_rate = Vec::with_capacity(hyper.epochs);

    for _epoch in 0..hyper.epochs {
        order.shuffle(&mut rng);
        let mut mistakes = 0usize;
        for &i in &order {
            let row = features.row(i);
            scores.fill(0.0);
            for_each_set_bit(row, |j| {
                let base = j * n_classes;
                for (c, score) in scores.iter_mut().enumerate() {
                    *score += w[base + c];
                }
            });
            let predicted = argmax_first(&scores);
            let truth = y_idx[i];
            if predicted != truth {
                mistakes += 1;
                for_each_set_bit(row, |j| {
                    w[j * n_classes + truth] += 1.0;
                    w[j * n_classes + predicted] -= 1.0;
                });
            }
        }
        mistake_rate.push(mistakes as f64 / n as f64);
    }

    let mut weights = vec![0.0f64; dim * n_classes];
    for j in 0..dim {
        for c in 0..n_classes {
            weights[c * dim + j] = w[j * n_classes + c];
        }
    }
    let best_epoch = hyper.epochs.saturating_sub(1);
    Ok(LinearModel::from_parts(
        classes,
        dim,
        weights,
        vec![0.0; n_classes],
        LinearHyper {
            reg: 0.0,
            epochs: hyper.epochs,
            seed: hyper.seed,
        },
        mistake_rate,
        best_epoch,
    ))
}
