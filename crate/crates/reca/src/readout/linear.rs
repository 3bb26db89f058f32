//! One-vs-rest linear classifier trained with averaged stochastic
//! subgradient descent on hinge loss + L2.
//!
//! Per class, the update at step `t` with learning rate
//! `eta_t = 1 / (reg * (t0 + t))` first applies the L2 decay
//! `w ← (1 − eta_t·reg)·w`, then, if the margin is violated, adds
//! `eta_t·y·x` (the bias is updated without decay). `t0` is set from the
//! standard heuristic `t0 = 1/(eta0·reg)` with `eta0 = (1/√reg)^½`, so no
//! learning-rate tuning is exposed. The returned model is an *averaged*
//! iterate: after each epoch the mean of all weight vectors visited so far
//! is materialized, its regularized training objective is evaluated, and
//! the best-so-far average is retained. The recorded `train_loss` curve is
//! the objective of the retained model after each epoch, which is
//! non-increasing by construction.
//!
//! Internally the weights are kept as `scale * v` so the multiplicative
//! decay is O(1), and the running average is maintained with sparse
//! bookkeeping: with `P_t = Σ_{τ≤t} s_τ` (scale prefix sum) and
//! `A_t = Σ_u P_{u-1}·δ_u` (updates weighted by the prefix at update time),
//! the average of all iterates is `(P_T·v_T − A_T) / T`. Both `v` and `A`
//! receive only sparse updates, so a training step costs O(set bits), not
//! O(dim).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::readout::{argmax_first, for_each_set_bit};
use crate::reservoir::FeatureMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearHyper {
    /// L2 regularization strength.
    pub reg: f64,
    /// Number of passes over the training set.
    pub epochs: usize,
    /// Seed for the per-epoch shuffles.
    pub seed: u64,
}

impl Default for LinearHyper {
    fn default() -> Self {
        LinearHyper {
            reg: 1e-4,
            epochs: 20,
            seed: 0,
        }
    }
}

/// A trained linear scorer: `predict(x) = argmax_c (w_c · x + b_c)`, ties
/// going to the smallest class id. Produced by [`train_linear`] and
/// [`crate::readout::train_perceptron`] (the latter with zero bias and
/// `reg = 0`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    /// Class ids, sorted ascending; score `c` belongs to `classes[c]`.
    pub classes: Vec<i32>,
    /// Feature dimension.
    pub dim: usize,
    /// Class-major weights: `weights[c * dim + j]`.
    weights: Vec<f64>,
    bias: Vec<f64>,
    pub hyper: LinearHyper,
    /// Objective (or, for the perceptron, mistake rate) of the model
    /// retained after each epoch; non-increasing for [`train_linear`].
    pub train_loss: Vec<f64>,
    /// 0-based epoch whose iterate the model carries.
    pub best_epoch: usize,
}

impl LinearModel {
    pub(crate) fn from_parts(
        classes: Vec<i32>,
        dim: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
        hyper: LinearHyper,
        train_loss: Vec<f64>,
        best_epoch: usize,
    ) -> Self {
        debug_assert_eq!(weights.len(), classes.len() * dim);
        debug_assert_eq!(bias.len(), classes.len());
        LinearModel {
            classes,
            dim,
            weights,
            bias,
            hyper,
            train_loss,
            best_epoch,
        }
    }

    pub fn weights(&self, class_index: usize) -> &[f64] {
        &self.weights[class_index * self.dim..(class_index + 1) * self.dim]
    }

    pub fn bias(&self, class_index: usize) -> f64 {
        self.bias[class_index]
    }

    /// Per-class scores for a packed binary feature row.
    pub fn scores(&self, row: &[u64], dim: usize) -> Result<Vec<f64>> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        let mut scores = self.bias.clone();
        for (c, score) in scores.iter_mut().enumerate() {
            let w = self.weights(c);
            let mut acc = 0.0;
            for_each_set_bit(row, |j| acc += w[j]);
            *score += acc;
        }
        Ok(scores)
    }

    pub fn predict(&self, row: &[u64], dim: usize) -> Result<i32> {
        let scores = self.scores(row, dim)?;
        Ok(self.classes[argmax_first(&scores)])
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

    /// Fraction of `features` rows predicted correctly.
    pub fn train_accuracy(&self, features: &FeatureMatrix) -> Result<f64> {
        let preds = self.predict_batch(features)?;
        crate::readout::accuracy(&preds, features.labels())
    }

    pub fn to_json_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Serialize(e.to_string()))?;
        std::fs::write(path.as_ref(), text).map_err(|e| Error::io(path.as_ref(), e))
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<LinearModel> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
        let model: LinearModel =
            serde_json::from_str(&text).map_err(|e| Error::Serialize(e.to_string()))?;
        if model.weights.len() != model.classes.len() * model.dim
            || model.bias.len() != model.classes.len()
            || !model.classes.windows(2).all(|w| w[0] < w[1])
        {
            return Err(Error::Serialize(
                "inconsistent model: weight/bias shapes or unsorted classes".into(),
            ));
        }
        Ok(model)
    }
}

/// Validates a training matrix and maps labels to class indices.
pub(crate) fn class_indices(features: &FeatureMatrix) -> Result<(Vec<i32>, Vec<usize>)> {
    if features.n_rows() < 2 {
        return Err(Error::TooFewSamples(features.n_rows()));
    }
    let classes = features.classes();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let y_idx = features
        .labels()
        .iter()
        .map(|l| classes.binary_search(l).expect("label drawn from classes"))
        .collect();
    Ok((classes, y_idx))
}

/// Feature-major scores plus objective/accuracy evaluation used during
/// training. `w` is feature-major: `w[j * n_classes + c]`.
fn evaluate_epoch(
    features: &FeatureMatrix,
    y_idx: &[usize],
    w: &[f64],
    b: &[f64],
    n_classes: usize,
    reg: f64,
) -> (f64, f64) {
    let n = features.n_rows();
    let mut hinge_sum = 0.0;
    let mut correct = 0usize;
    let mut scores = vec![0.0f64; n_classes];
    for i in 0..n {
        scores.copy_from_slice(b);
        for_each_set_bit(features.row(i), |j| {
            let base = j * n_classes;
            for (c, score) in scores.iter_mut().enumerate() {
                *score += w[base + c];
            }
        });
        for (c, &score) in scores.iter().enumerate() {
            let y = if y_idx[i] == c { 1.0 } else { -1.0 };
            hinge_sum += (1.0 - y * score).max(0.0);
        }
        if argmax_first(&scores) == y_idx[i] {
            correct += 1;
        }
    }
    let l2: f64 = w.iter().map(|x| x * x).sum();
    let objective = hinge_sum / n as f64 + 0.5 * reg * l2;
    (objective, correct as f64 / n as f64)
}

/// Core trainer shared by [`train_linear`] and the linear-solvability tag.
/// When `early_stop_on_perfect` is set, training stops at the first epoch
/// whose averaged iterate classifies the whole training set correctly, and
/// that iterate is retained.
pub(crate) fn train_linear_impl(
    features: &FeatureMatrix,
    hyper: LinearHyper,
    early_stop_on_perfect: bool,
) -> Result<(LinearModel, bool)> {
    if hyper.reg <= 0.0 || !hyper.reg.is_finite() {
        return Err(Error::Config(format!(
            "linear readout regularization must be positive, got {}",
            hyper.reg
        )));
    }
    let (classes, y_idx) = class_indices(features)?;
    let n_classes = classes.len();
    let dim = features.dim();
    let n = features.n_rows();

    let alpha = hyper.reg;
    let eta0 = (1.0 / alpha.sqrt()).sqrt();
    let t0 = 1.0 / (eta0 * alpha);

    let mut v = vec![0.0f64; dim * n_classes];
    let mut a_acc = vec![0.0f64; dim * n_classes];
    let mut bias = vec![0.0f64; n_classes];
    let mut bias_sum = vec![0.0f64; n_classes];
    let mut scale = 1.0f64;
    let mut p_prefix = 0.0f64;
    let mut t: u64 = 0;

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut vx = vec![0.0f64; n_classes];

    let mut best: Option<(f64, usize, Vec<f64>, Vec<f64>)> = None;
    let mut train_loss = Vec::with_capacity(hyper.epochs);
    let mut reached_perfect = false;

    for epoch in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (alpha * (t0 + t as f64));
            scale *= 1.0 - eta * alpha;
            let row = features.row(i);

            vx.fill(0.0);
            for_each_set_bit(row, |j| {
                let base = j * n_classes;
                for (c, acc) in vx.iter_mut().enumerate() {
                    *acc += v[base + c];
                }
            });
            for c in 0..n_classes {
                let y = if y_idx[i] == c { 1.0 } else { -1.0 };
                if y * (scale * vx[c] + bias[c]) < 1.0 {
                    let g = eta * y / scale;
                    let pa = p_prefix * g;
                    for_each_set_bit(row, |j| {
                        v[j * n_classes + c] += g;
                        a_acc[j * n_classes + c] += pa;
                    });
                    bias[c] += eta * y;
                }
            }
            p_prefix += scale;
            for (c, acc) in bias_sum.iter_mut().enumerate() {
                *acc += bias[c];
            }
        }

        // Materialize the average of every iterate seen so far.
        let t_f = t as f64;
        let mut wbar = vec![0.0f64; dim * n_classes];
        for (idx, w) in wbar.iter_mut().enumerate() {
            *w = (p_prefix * v[idx] - a_acc[idx]) / t_f;
        }
        let bbar: Vec<f64> = bias_sum.iter().map(|b| b / t_f).collect();

        let (objective, train_acc) =
            evaluate_epoch(features, &y_idx, &wbar, &bbar, n_classes, alpha);
        let perfect = train_acc == 1.0;
        let improves = best.as_ref().map_or(true, |(b_obj, ..)| objective < *b_obj);
        // On the early-stop path the first perfect epoch wins outright; the
        // tag cares about feasibility, not the objective.
        if improves || (early_stop_on_perfect && perfect) {
            best = Some((objective, epoch, wbar, bbar));
        }
        train_loss.push(best.as_ref().expect("set this epoch").0);
        if early_stop_on_perfect && perfect {
            reached_perfect = true;
            break;
        }
    }

    let (weights, bias, best_epoch) = match best {
        Some((_, epoch, wbar, bbar)) => {
            // feature-major -> class-major
            let mut weights = vec![0.0f64; dim * n_classes];
            for j in 0..dim {
                for c in 0..n_classes {
                    weights[c * dim + j] = wbar[j * n_classes + c];
                }
            }
            (weights, bbar, epoch)
        }
        // epochs == 0: the zero model, predicting the smallest class.
        None => (vec![0.0; dim * n_classes], vec![0.0; n_classes], 0),
    };

    Ok((
        LinearModel::from_parts(classes, dim, weights, bias, hyper, train_loss, best_epoch),
        reached_perfect,
    ))
}

/// Trains the one-vs-rest averaged hinge/L2 linear readout. Deterministic
/// given `(features, hyper)`; see the module docs for the exact procedure.
pub fn train_linear(features: &FeatureMatrix, hyper: LinearHyper) -> Result<LinearModel> {
    Ok(train_linear_impl(features, hyper, false)?.0)
}
