//! Workbench for studying elementary cellular automata as fixed reservoirs
//! in a reservoir-computing classification pipeline.
//!
//! The pipeline has four stages, each owned by a module:
//!
//! 1. [`datasets`] loads labeled data — MNIST-style IDX image files and
//!    delimited time-series files — and produces seeded holdout/train/test
//!    splits.
//! 2. [`encoding`] turns raw samples into binary vectors: images are
//!    thresholded and flattened; real-valued series go through a
//!    similarity-preserving expansion (thermometer code XORed with fixed
//!    random position keys).
//! 3. [`reservoir`] runs an elementary cellular automaton (from [`ca`]) for a
//!    fixed number of steps on each encoded sample and concatenates the
//!    trajectory rows into a feature vector. A `None` rule is the identity
//!    map, which serves as the ablation arm when measuring what the CA
//!    contributes.
//! 4. [`readout`] trains a simple classifier on the features: a one-vs-rest
//!    averaged hinge-loss linear model, a nearest-centroid baseline, k-NN, a
//!    multiclass perceptron, or DTW nearest-neighbor directly on raw series.
//!
//! [`experiments`] binds the stages into declarative, reproducible runs:
//! repeated random splits, rule sweeps over the 88 minimum-equivalent rules,
//! ablation comparisons with Welch t-tests and Bonferroni correction, and
//! CSV/JSONL report emission. Every run is fully determined by its config,
//! whose hash is recorded in all outputs.

pub mod ca;
pub mod datasets;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod readout;
pub mod reservoir;

pub use error::{Error, ErrorCategory, Result};
