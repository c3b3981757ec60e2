use std::fmt;

use crate::error::{Error, Result};

/// An element of the symmetric group on `dim` letters.
///
/// Stored as an image table with 0-based values: `images[i]` is where `i` is sent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(dim: usize) -> Self {
        Self {
            images: (0..dim).collect(),
        }
    }

    /// The transposition swapping `i` and `j` (0-based). `i == j` gives the identity.
    pub fn transposition(dim: usize, i: usize, j: usize) -> Result<Self> {
        for x in [i, j] {
            if x >= dim {
                return Err(Error::RowOutOfRange { row: x + 1, dim });
            }
        }
        let mut images: Vec<usize> = (0..dim).collect();
        images.swap(i, j);
        Ok(Self { images })
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let dim = images.len();
        let mut seen = vec![false; dim];
        for &x in &images {
            if x >= dim || seen[x] {
                return Err(Error::InvalidPermutation { dim });
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let dim = images.len();
        let shifted = images
            .iter()
            .map(|&x| x.checked_sub(1).ok_or(Error::InvalidPermutation { dim }))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(shifted)
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points, e.g. `(1 2)(3 4)`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.dim()];
        let mut wrote = false;
        for start in 0..self.dim() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.images[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn compose_applies_right_first() {
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let t = Permutation::transposition(3, 0, 1).unwrap();
        // (s ∘ t)(1) = s(2) = 3
        assert_eq!(s.compose(&t).unwrap().apply(0), 2);
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
    }

    #[test]
    fn cycle_notation() {
        let s = Permutation::from_one_based(&[2, 1, 4, 3]).unwrap();
        assert_eq!(s.to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}
