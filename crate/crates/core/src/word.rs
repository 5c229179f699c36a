use std::fmt;

use serde::{Deserialize, Serialize};

/// A binary `n`-tuple: received word, error pattern, or decoder estimate.
///
/// Bits are stored one per byte as `0`/`1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

/// Under all-zero transmission an error pattern and the received word coincide.
pub type ErrorPattern = Word;

impl Word {
    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    /// Word with ones exactly at `support`.
    ///
    /// # Panics
    ///
    /// Panics if an index is `>= n`.
    pub fn from_support(n: usize, support: &[usize]) -> Self {
        let mut bits = vec![0; n];
        for &i in support {
            assert!(i < n, "support index {i} out of range for length {n}");
            bits[i] = 1;
        }
        Word(bits)
    }

    /// Takes ownership of raw bits; any nonzero byte is read as 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        Word(bits.into_iter().map(|b| (b != 0) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i] != 0
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit as u8;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (b != 0).then_some(i))
            .collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(n={}, support={:?})", self.len(), self.support())
    }
}
