//! Linear-separability tagging for training sets.

use crate::readout::{train_linear_impl, LinearHyper};
use crate::reservoir::FeatureMatrix;

/// Epoch budget for deciding separability. Generous enough that separable
/// sets of the sizes used here reliably reach zero training error, while
/// keeping the tag affordable to compute per repetition.
pub const SOLVABILITY_EPOCHS: usize = 200;

/// Tags whether the training features look linearly separable: trains the
/// standard linear readout with an extended epoch budget and reports whether
/// any epoch classified the training set perfectly (stopping early when one
/// does). Degenerate sets (a single row or a single class) are trivially
/// separable, so they tag `true`. This is a practical one-sided test: `true`
/// is a certificate, `false` only means the budget was not enough.
pub fn tag_linear_solvability(features: &FeatureMatrix) -> bool {
    if features.n_rows() < 2 || features.classes().len() < 2 {
        return true;
    }
    let hyper = LinearHyper {
        reg: 1e-4,
        epochs: SOLVABILITY_EPOCHS,
        seed: 0,
    };
    match train_linear_impl(features, hyper, true) {
        Ok((_, reached_perfect)) => reached_perfect,
        Err(_) => false,
    }
}
