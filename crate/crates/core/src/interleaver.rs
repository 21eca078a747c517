//! Seeded pseudo-random interleavers.
//!
//! Scatter convention: permuting `x` places `x[i]` at output position
//! `forward[i]`. The same convention is used by the encoder and by the
//! decoder's inverse mapping.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
    seed: Option<u64>,
}

impl Permutation {
    /// Uniformly random permutation of `[0, len)` drawn by Fisher–Yates from
    /// a ChaCha8 stream keyed by `seed`.
    pub fn random(len: usize, seed: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut forward: Vec<usize> = (0..len).collect();
        forward.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut p = Self::from_forward(forward)?;
        p.seed = Some(seed);
        Ok(p)
    }

    pub fn identity(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyPermutation);
        }
        Self::from_forward((0..len).collect())
    }

    /// Builds a permutation from its forward map, checking bijectivity.
    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &f) in forward.iter().enumerate() {
            if f >= n || inverse[f] != usize::MAX {
                return Err(Error::Params(format!(
                    "forward map is not a bijection at {i}"
                )));
            }
            inverse[f] = i;
        }
        Ok(Permutation {
            forward,
            inverse,
            seed: None,
        })
    }

    /// `self` applied first, then `outer`.
    pub fn then(&self, outer: &Permutation) -> Result<Permutation> {
        if outer.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: outer.len(),
            });
        }
        Self::from_forward(self.forward.iter().map(|&f| outer.forward[f]).collect())
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn permute<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check(x.len())?;
        Ok(self.inverse.iter().map(|&i| x[i]).collect())
    }

    pub fn depermute<T: Copy>(&self, y: &[T]) -> Result<Vec<T>> {
        self.check(y.len())?;
        Ok(self.forward.iter().map(|&f| y[f]).collect())
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: len,
            });
        }
        Ok(())
    }
}
