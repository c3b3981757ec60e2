use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{DenseBinaryMatrix, IntMatrix};
use crate::perm::Permutation;

/// A permutation-like matrix: a square 0/1 matrix with exactly one 1 in every column.
///
/// Stored as its column map. `colmap[j]` is the (0-based) row holding the 1 of
/// column `j`, so the dense form and the column map determine each other.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Plm {
    colmap: Vec<usize>,
}

impl Plm {
    /// Builds a PLM from a 0-based column map.
    pub fn from_colmap(colmap: Vec<usize>) -> Result<Self> {
        let dim = colmap.len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if let Some(&row) = colmap.iter().find(|&&r| r >= dim) {
            return Err(Error::RowOutOfRange { row: row + 1, dim });
        }
        Ok(Self { colmap })
    }

    /// Builds a PLM from a 1-based column map, the form used in every external surface.
    pub fn from_one_based(colmap: &[usize]) -> Result<Self> {
        let dim = colmap.len();
        let shifted = colmap
            .iter()
            .map(|&r| r.checked_sub(1).ok_or(Error::RowOutOfRange { row: r, dim }))
            .collect::<Result<Vec<_>>>()?;
        Self::from_colmap(shifted)
    }

    pub(crate) fn from_colmap_unchecked(colmap: Vec<usize>) -> Self {
        debug_assert!(colmap.iter().all(|&r| r < colmap.len()));
        Self { colmap }
    }

    pub fn from_dense(m: &DenseBinaryMatrix) -> Result<Self> {
        let dim = m.dim();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut colmap = Vec::with_capacity(dim);
        for j in 0..dim {
            let ones: Vec<usize> = (0..dim).filter(|&i| m.get(i, j) == 1).collect();
            if ones.len() != 1 {
                return Err(Error::NotPlm {
                    column: j + 1,
                    count: ones.len(),
                });
            }
            colmap.push(ones[0]);
        }
        Ok(Self { colmap })
    }

    pub fn to_dense(&self) -> DenseBinaryMatrix {
        let mut m = DenseBinaryMatrix::zeros(self.dim());
        for (j, &i) in self.colmap.iter().enumerate() {
            m.set(i, j, true);
        }
        m
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from(&self.to_dense())
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            colmap: (0..dim).collect(),
        }
    }

    /// The row PLM `R_m`: every column has its 1 in row `m` (0-based).
    pub fn row(dim: usize, m: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if m >= dim {
            return Err(Error::RowOutOfRange { row: m + 1, dim });
        }
        Ok(Self {
            colmap: vec![m; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.colmap.len()
    }

    pub fn colmap(&self) -> &[usize] {
        &self.colmap
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.colmap.iter().map(|r| r + 1).collect()
    }

    #[inline]
    pub fn row_of(&self, column: usize) -> usize {
        self.colmap[column]
    }

    /// Matrix product by composing column maps: column `j` of `self · rhs` has its 1 in
    /// row `self[rhs[j]]`.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self {
            colmap: rhs.colmap.iter().map(|&p| self.colmap[p]).collect(),
        })
    }

    /// `σ ∗ A`: permutes rows, sending row `i` to row `σ(i)`.
    pub fn row_act(&self, sigma: &Permutation) -> Result<Self> {
        self.check_perm(sigma)?;
        Ok(Self {
            colmap: self.colmap.iter().map(|&i| sigma.apply(i)).collect(),
        })
    }

    /// `τ ⋆ A`: permutes columns by `τ⁻¹`, so column `j` of the result is column `τ⁻¹(j)` of `A`.
    /// This is a left action: `(στ) ⋆ A = σ ⋆ (τ ⋆ A)`.
    pub fn col_act(&self, tau: &Permutation) -> Result<Self> {
        self.check_perm(tau)?;
        let inv = tau.inverse();
        Ok(Self {
            colmap: (0..self.dim()).map(|j| self.colmap[inv.apply(j)]).collect(),
        })
    }

    /// Number of ones in the first row.
    pub fn zeta(&self) -> usize {
        self.colmap.iter().filter(|&&i| i == 0).count()
    }

    /// `Some(m)` when this is the row PLM `R_m`.
    pub fn row_index(&self) -> Option<usize> {
        let first = self.colmap[0];
        self.colmap.iter().all(|&i| i == first).then_some(first)
    }

    pub fn is_row(&self) -> bool {
        self.row_index().is_some()
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.dim()];
        for &i in &self.colmap {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// Rows that contain no 1 at all.
    pub fn zero_rows(&self) -> Vec<usize> {
        let mut hit = vec![false; self.dim()];
        for &i in &self.colmap {
            hit[i] = true;
        }
        (0..self.dim()).filter(|&i| !hit[i]).collect()
    }

    /// The "plm d: i1 … id" column-map line.
    pub fn colmap_line(&self) -> String {
        let cols: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        format!("plm {}: {}", self.dim(), cols.join(" "))
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(())
    }

    fn check_perm(&self, p: &Permutation) -> Result<()> {
        if self.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                left: p.dim(),
                right: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Plm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dense())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plm(c: &[usize]) -> Plm {
        Plm::from_one_based(c).unwrap()
    }

    fn dense(rows: &[&[u8]]) -> DenseBinaryMatrix {
        DenseBinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn from_dense_examples() {
        assert_eq!(
            Plm::from_dense(&dense(&[&[0, 1], &[1, 0]])).unwrap(),
            plm(&[2, 1])
        );
        assert_eq!(
            Plm::from_dense(&dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(),
            Plm::identity(3)
        );
        assert_eq!(
            Plm::from_dense(&dense(&[&[1, 0], &[1, 0]])),
            Err(Error::NotPlm {
                column: 1,
                count: 2
            })
        );
        assert_eq!(
            Plm::from_dense(&dense(&[&[1, 0], &[0, 0]])),
            Err(Error::NotPlm {
                column: 2,
                count: 0
            })
        );
    }

    #[test]
    fn to_dense_examples() {
        assert_eq!(plm(&[1, 1]).to_dense().rows(), vec![vec![1, 1], vec![0, 0]]);
        assert_eq!(plm(&[2, 2]).to_dense().rows(), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(
            plm(&[1, 2, 3]).to_dense(),
            dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn identity_and_rows() {
        assert_eq!(Plm::identity(1).one_based(), vec![1]);
        assert_eq!(Plm::identity(2).one_based(), vec![1, 2]);
        assert_eq!(
            Plm::row(2, 0).unwrap().to_dense().rows(),
            vec![vec![1, 1], vec![0, 0]]
        );
        assert_eq!(
            Plm::row(3, 2).unwrap().to_dense().rows(),
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 1, 1]]
        );
        assert_eq!(Plm::row(1, 0).unwrap(), Plm::identity(1));
        assert!(Plm::row(3, 3).is_err());
    }

    #[test]
    fn multiply_examples() {
        let p2 = plm(&[2, 1]);
        assert_eq!(p2.multiply(&p2).unwrap(), Plm::identity(2));
        assert_eq!(p2.multiply(&plm(&[1, 1])).unwrap(), plm(&[2, 2]));
        let a = plm(&[2, 3, 3]);
        assert_eq!(a.multiply(&a).unwrap(), plm(&[3, 3, 3]));
        assert!(matches!(
            p2.multiply(&Plm::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn row_action_examples() {
        let s12 = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(
            Plm::row(3, 0).unwrap().row_act(&s12).unwrap(),
            Plm::row(3, 1).unwrap()
        );
        let a = plm(&[2, 3, 3]);
        assert_eq!(a.row_act(&Permutation::identity(3)).unwrap(), a);
        let s13 = Permutation::transposition(3, 0, 2).unwrap();
        assert_eq!(a.row_act(&s13).unwrap(), plm(&[2, 1, 1]));
    }

    #[test]
    fn col_action_examples() {
        let a = plm(&[2, 3, 3]);
        assert_eq!(a.col_act(&Permutation::identity(3)).unwrap(), a);
        let t = Permutation::transposition(2, 0, 1).unwrap();
        assert_eq!(plm(&[2, 1]).col_act(&t).unwrap(), Plm::identity(2));
    }

    #[test]
    fn col_action_is_left_action() {
        let a = plm(&[1, 3, 3, 2]);
        let s = Permutation::from_one_based(&[2, 3, 4, 1]).unwrap();
        let t = Permutation::from_one_based(&[3, 1, 2, 4]).unwrap();
        let st = s.compose(&t).unwrap();
        assert_eq!(
            a.col_act(&st).unwrap(),
            a.col_act(&t).unwrap().col_act(&s).unwrap()
        );
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(Plm::row(3, 0).unwrap().zeta(), 3);
        assert_eq!(plm(&[2, 3, 3]).zeta(), 0);
        assert_eq!(plm(&[1, 1, 2]).zeta(), 2);
    }

    #[test]
    fn permutation_examples() {
        assert!(plm(&[2, 1]).is_permutation());
        assert!(!plm(&[1, 1]).is_permutation());
        assert!(!plm(&[2, 3, 3]).is_permutation());
        assert_eq!(plm(&[2, 3, 3]).zero_rows(), vec![0]);
    }

    #[test]
    fn colmap_line_format() {
        assert_eq!(plm(&[2, 3, 3]).colmap_line(), "plm 3: 2 3 3");
    }
}
