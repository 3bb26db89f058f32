use rand::RngCore;

use crate::{Error, Result};

/// A row of binary cells, bit-packed 64 per word: cell `i` lives in word
/// `i / 64` at bit `i % 64`. Unused high bits of the last word are always
/// zero, so derived `PartialEq`/`Hash` compare cell contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryState {
    words: Vec<u64>,
    len: usize,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// Mask selecting the used bits of the last word.
pub(crate) fn last_word_mask(len: usize) -> u64 {
    match len % 64 {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

impl BinaryState {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyState);
        }
        Ok(BinaryState {
            words: vec![0; words_for(len)],
            len,
        })
    }

    /// A state with a single live cell at index `len / 2`.
    pub fn single_centered(len: usize) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        s.set(len / 2, 1);
        Ok(s)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::InvalidCell { index: i, value: b });
            }
            s.set(i, b);
        }
        Ok(s)
    }

    /// Parses a row of `'0'`/`'1'` characters.
    pub fn from_text(text: &str) -> Result<Self> {
        let bits: Vec<u8> = text
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidCell {
                    index: i,
                    value: other as u8,
                }),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    /// Uniformly random cells from the given generator; consumes one `u64`
    /// per 64 cells, so the result is reproducible for a seeded generator.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        for w in s.words.iter_mut() {
            *w = rng.next_u64();
        }
        *s.words.last_mut().expect("len > 0") &= last_word_mask(len);
        Ok(s)
    }

    /// Wraps pre-packed words. Caller guarantees the unused-bit invariant;
    /// checked in debug builds.
    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        debug_assert_eq!(words.last().unwrap() & !last_word_mask(len), 0);
        BinaryState { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects zero-length states
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(i < self.len);
        debug_assert!(value <= 1);
        let (w, b) = (i / 64, i % 64);
        if value == 1 {
            self.words[w] |= 1u64 << b;
        } else {
            self.words[w] &= !(1u64 << b);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Cells rendered as `'0'`/`'1'` characters, lowest index first.
    pub fn to_text(&self) -> String {
        self.to_bits().iter().map(|b| (b'0' + b) as char).collect()
    }

    /// Circular shift moving every cell up one index: result cell `i` is
    /// cell `(i - 1) mod len`, i.e. the vector of left neighbors.
    pub fn rotate_toward_high(&self) -> BinaryState {
        let wrap = self.get(self.len - 1) as u64;
        let mut words = Vec::with_capacity(self.words.len());
        let mut carry = wrap;
        for &w in &self.words {
            words.push((w << 1) | carry);
            carry = w >> 63;
        }
        *words.last_mut().expect("nonempty") &= last_word_mask(self.len);
        BinaryState::from_words(words, self.len)
    }

    /// Circular shift moving every cell down one index: result cell `i` is
    /// cell `(i + 1) mod len`, i.e. the vector of right neighbors.
    pub fn rotate_toward_low(&self) -> BinaryState {
        let n = self.words.len();
        let mut words = Vec::with_capacity(n);
        for k in 0..n {
            let mut w = self.words[k] >> 1;
            if k + 1 < n {
                w |= self.words[k + 1] << 63;
            }
            words.push(w);
        }
        let wrap = (self.words[0] & 1) << ((self.len - 1) % 64);
        words[n - 1] |= wrap;
        BinaryState::from_words(words, self.len)
    }

    /// General circular shift: result cell `i` is cell `(i - k) mod len`.
    /// `rotated_toward_high(1)` equals [`Self::rotate_toward_high`].
    pub fn rotated_toward_high(&self, k: usize) -> BinaryState {
        let k = k % self.len;
        let mut s = Self::zeros(self.len).expect("nonempty");
        for i in 0..self.len {
            s.set((i + k) % self.len, self.get(i));
        }
        s
    }

    /// Cell order reversed: result cell `i` is cell `len - 1 - i`.
    pub fn reversed(&self) -> BinaryState {
        let mut s = Self::zeros(self.len).expect("nonempty");
        for i in 0..self.len {
            s.set(self.len - 1 - i, self.get(i));
        }
        s
    }

    /// Every cell inverted.
    pub fn complemented(&self) -> BinaryState {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        *words.last_mut().expect("nonempty") &= last_word_mask(self.len);
        BinaryState::from_words(words, self.len)
    }

    /// Concatenates states into one packed vector, first state at the lowest
    /// bits. Word-stitches with shifts rather than copying bit by bit.
    pub fn concat<'a>(states: impl IntoIterator<Item = &'a BinaryState>) -> BinaryState {
        let mut words: Vec<u64> = Vec::new();
        let mut total_bits = 0usize;
        for s in states {
            let off = total_bits % 64;
            if off == 0 {
                words.extend_from_slice(&s.words);
            } else {
                for &w in &s.words {
                    *words.last_mut().expect("off > 0 implies nonempty") |= w << off;
                    words.push(w >> (64 - off));
                }
            }
            total_bits += s.len;
            // The last spill word may hold no used bits; drop it so the
            // word count matches the bit count.
            words.truncate(words_for(total_bits));
        }
        assert!(total_bits > 0, "cannot concatenate zero states");
        BinaryState::from_words(words, total_bits)
    }
}
