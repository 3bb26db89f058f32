//! Binary encodings that turn raw samples into CA initial conditions.
//!
//! Images are thresholded to one bit per pixel and flattened row-major.
//! Real-valued series go through a similarity-preserving expansion: each
//! value is min-max normalized (parameters fitted on training data only),
//! thermometer-coded into `n` bits, XORed with a fixed random key for its
//! position, and the per-position blocks are concatenated. XOR with a fixed
//! key is a Hamming isometry, so the Hamming distance between two encoded
//! series equals the sum of per-position thermometer-level differences.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ca::BinaryState;
use crate::datasets::GrayImage;
use crate::{Error, Result};

/// One-bit-per-pixel image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarizedImage {
    height: usize,
    width: usize,
    bits: Vec<u8>,
}

impl BinarizedImage {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.width + col]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// A binary vector ready to seed a CA, tagged with the index of the sample
/// it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSample {
    pub bits: BinaryState,
    pub source_id: usize,
}

/// Rounds each 8-bit pixel to one bit: `round(value / 255)`, i.e. 1 iff
/// the value is at least 128.
pub fn binarize_image(img: &GrayImage) -> BinarizedImage {
    BinarizedImage {
        height: img.height,
        width: img.width,
        bits: img.pixels.iter().map(|&p| u8::from(p >= 128)).collect(),
    }
}

/// Concatenates image rows into one bit vector: pixel `(r, c)` lands at
/// index `r * width + c`. Note this keeps only x-axis adjacency; vertically
/// adjacent pixels end up `width` cells apart.
pub fn flatten(img: &BinarizedImage, source_id: usize) -> EncodedSample {
    EncodedSample {
        bits: BinaryState::from_bits(&img.bits).expect("image has at least one pixel"),
        source_id,
    }
}

/// Min-max range of the training data, used to map values into `[0, 1]`.
/// Values outside the fitted range (possible on test data) are clipped; a
/// constant training set maps everything to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub min: f64,
    pub max: f64,
}

impl NormalizationParams {
    pub fn apply(&self, v: f64) -> f64 {
        if self.max > self.min {
            ((v - self.min) / (self.max - self.min)).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Fits min/max over every value of every training series. Non-finite
/// values are ignored; if nothing finite remains, this is an error.
pub fn fit_normalization<S: AsRef<[f64]>>(train: &[S]) -> Result<NormalizationParams> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for series in train {
        for &v in series.as_ref() {
            if v.is_finite() {
                min = min.min(v);
                max = max.max(v);
            }
        }
    }
    if min > max {
        return Err(Error::NoFiniteValues);
    }
    Ok(NormalizationParams { min, max })
}

/// Number of leading ones in the thermometer code of `v`: `round(v * n)`,
/// rounding half up.
fn thermometer_level(v: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::ValueOutOfRange(v));
    }
    Ok((v * n as f64 + 0.5).floor() as usize)
}

/// Unary code of `v ∈ [0, 1]` in `n` bits: `round(v * n)` ones followed by
/// zeros, e.g. `thermometer(0.75, 4)` = `1110`.
pub fn thermometer(v: f64, n: usize) -> Result<Vec<u8>> {
    let k = thermometer_level(v, n)?;
    Ok((0..n).map(|j| u8::from(j < k)).collect())
}

/// The similarity-preserving expansion encoder. Construction fixes the
/// per-position random index keys (from `seed`) and the normalization
/// range (from training data); encoding is then deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SimExpEncoder {
    n: usize,
    max_len: usize,
    seed: u64,
    norm: NormalizationParams,
    /// `max_len * n` key bits, position-major.
    keys: Vec<u8>,
}

impl SimExpEncoder {
    /// Fits an encoder: normalization from `train` (training split only, to
    /// keep test statistics out), keys from `seed`, output geometry from
    /// `n` and `max_len`. `max_len` must cover the whole dataset — not just
    /// the training split — or encoding the longer test series will fail.
    pub fn fit<S: AsRef<[f64]>>(
        train: &[S],
        n: usize,
        max_len: usize,
        seed: u64,
    ) -> Result<SimExpEncoder> {
        if n == 0 {
            return Err(Error::Config("simexp expansion factor n must be >= 1".into()));
        }
        if max_len == 0 {
            return Err(Error::Config("simexp max_len must be >= 1".into()));
        }
        let norm = fit_normalization(train)?;
        Ok(Self::with_params(n, max_len, seed, norm))
    }

    /// Builds an encoder from explicit parameters (e.g. restored from a
    /// result record).
    pub fn with_params(n: usize, max_len: usize, seed: u64, norm: NormalizationParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys = (0..max_len * n).map(|_| (rng.next_u32() & 1) as u8).collect();
        SimExpEncoder {
            n,
            max_len,
            seed,
            norm,
            keys,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn norm(&self) -> NormalizationParams {
        self.norm
    }

    /// The fixed random key for one position.
    pub fn key(&self, position: usize) -> &[u8] {
        &self.keys[position * self.n..(position + 1) * self.n]
    }

    /// Encoded length: `n * max_len`, independent of the series length.
    pub fn encoded_len(&self) -> usize {
        self.n * self.max_len
    }

    /// Encodes one series: per position, thermometer-code the normalized
    /// value and XOR with that position's key. Positions past the series
    /// end encode the neutral value `0.0` through the same path, so padding
    /// is consistent across samples.
    pub fn encode(&self, series: &[f64], source_id: usize) -> Result<EncodedSample> {
        if series.len() > self.max_len {
            return Err(Error::SeriesTooLong {
                len: series.len(),
                max_len: self.max_len,
            });
        }
        let mut bits = BinaryState::zeros(self.encoded_len())?;
        for p in 0..self.max_len {
            let v = if p < series.len() {
                self.norm.apply(series[p])
            } else {
                0.0
            };
            let k = thermometer_level(v, self.n)?;
            for j in 0..self.n {
                let bit = u8::from(j < k) ^ self.keys[p * self.n + j];
                if bit == 1 {
                    bits.set(p * self.n + j, 1);
                }
            }
        }
        Ok(EncodedSample { bits, source_id })
    }
}
