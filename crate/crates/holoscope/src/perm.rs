//! Permutations of {0..r-1} in image-array form.

use crate::group::{GroupElement, PointAction};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images are not a bijection on 0..{0}")]
    NotBijection(usize),
}

/// images[i] is the image of point i.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn new(images: Vec<u16>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if (x as usize) >= n || seen[x as usize] {
                return Err(PermError::NotBijection(n));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    /// Build from disjoint cycles, e.g. `from_cycles(4, &[&[0,1,2,3]])`.
    pub fn from_cycles(n: usize, cycles: &[&[u16]]) -> Self {
        let mut images: Vec<u16> = (0..n as u16).collect();
        for c in cycles {
            for i in 0..c.len() {
                images[c[i] as usize] = c[(i + 1) % c.len()];
            }
        }
        Permutation { images }
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// Set of points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i)
            .collect()
    }
}

impl GroupElement for Permutation {
    fn identity_like(&self) -> Self {
        Permutation::identity(self.images.len())
    }

    /// (self * other)(x) = self(other(x)): apply `other` first.
    fn op(&self, other: &Self) -> Self {
        debug_assert_eq!(self.images.len(), other.images.len());
        let images = other
            .images
            .iter()
            .map(|&x| self.images[x as usize])
            .collect();
        Permutation { images }
    }

    fn inverse(&self) -> Self {
        let mut images = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Permutation { images }
    }
}

impl PointAction for Permutation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    fn image_of(&self, point: usize) -> usize {
        self.images[point] as usize
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm{:?}", self.images)
    }
}
