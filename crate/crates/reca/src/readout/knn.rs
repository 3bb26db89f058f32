//! k-nearest-neighbor classification on binary feature rows.
//!
//! On {0,1} vectors the squared Euclidean distance equals the Hamming
//! distance, so neighbors are found with XOR + popcount on the packed
//! words. Deterministic tie rules: equal distances are ordered by lower
//! training index; vote ties go to the smallest class id.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::reservoir::FeatureMatrix;
use crate::{Error, Result};

fn hamming(a: &[u64], b: &[u64]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Majority label among the `k` training rows nearest to `query`.
pub fn knn_predict(train: &FeatureMatrix, query: &[u64], dim: usize, k: usize) -> Result<i32> {
    if k == 0 {
        return Err(Error::KZero);
    }
    if k > train.n_rows() {
        return Err(Error::KTooLarge {
            k,
            n: train.n_rows(),
        });
    }
    if dim != train.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            found: dim,
        });
    }
    let mut dist: Vec<(u32, u32)> = (0..train.n_rows())
        .map(|i| (hamming(train.row(i), query), i as u32))
        .collect();
    // The (distance, index) key makes the k-smallest set unique even with
    // duplicate distances.
    if k < dist.len() {
        dist.select_nth_unstable(k - 1);
    }
    let mut votes: BTreeMap<i32, usize> = BTreeMap::new();
    for &(_, i) in &dist[..k] {
        *votes.entry(train.labels()[i as usize]).or_insert(0) += 1;
    }
    // BTreeMap iterates keys ascending, so ">" keeps the smallest class id
    // among equally voted classes.
    let mut best_class = 0;
    let mut best_votes = 0;
    for (&class, &count) in &votes {
        if count > best_votes {
            best_votes = count;
            best_class = class;
        }
    }
    Ok(best_class)
}

/// [`knn_predict`] for every row of `queries`, in parallel.
pub fn knn_predict_batch(
    train: &FeatureMatrix,
    queries: &FeatureMatrix,
    k: usize,
) -> Result<Vec<i32>> {
    if queries.dim() != train.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            found: queries.dim(),
        });
    }
    (0..queries.n_rows())
        .into_par_iter()
        .map(|i| knn_predict(train, queries.row(i), queries.dim(), k))
        .collect()
}
