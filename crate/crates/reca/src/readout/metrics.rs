//! Classification metrics.

use crate::{Error, Result};

/// Fraction of predictions matching the labels, in `[0, 1]`.
pub fn accuracy(predictions: &[i32], labels: &[i32]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::PredictionCountMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let correct = predictions
        .iter()
        .zip(labels)
        .filter(|(p, l)| p == l)
        .count();
    Ok(correct as f64 / predictions.len() as f64)
}

/// `1 − accuracy`.
pub fn error_rate(predictions: &[i32], labels: &[i32]) -> Result<f64> {
    Ok(1.0 - accuracy(predictions, labels)?)
}
