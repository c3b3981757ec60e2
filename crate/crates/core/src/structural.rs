//! Multiplication through the block formulas rather than column-map composition.
//!
//! The left factor is brought to canonical form by a row swap, the right factor is
//! classified, and each class has its own product formula. Canonical-by-canonical
//! products recurse into the `(d−1)`-dimensional components.

use crate::class::{
    canonicalize, classify, cplm_parts, first_row_gather, x_matrix, CplmParts, PlmClass,
};
use crate::error::{Error, Result};
use crate::matrix::{DenseBinaryMatrix, IntMatrix};
use crate::plm::Plm;

pub fn structural_multiply(a: &Plm, b: &Plm) -> Result<Plm> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(product(a, b))
}

fn product(a: &Plm, b: &Plm) -> Plm {
    let d = a.dim();
    if d == 1 {
        return Plm::identity(1);
    }
    // Row PLMs absorb anything on their right.
    if let Some(m) = a.row_index() {
        return Plm::row(d, m).expect("row in range");
    }
    if let Some(m) = b.row_index() {
        return right_row(a, m);
    }
    let (sigma, canon) = canonicalize(a);
    let c = canonical_left(&canon, b);
    c.row_act(&sigma.inverse()).expect("dimensions agree")
}

/// `A · R_m`: every column equals column `m` of `A`.
fn right_row(a: &Plm, m: usize) -> Plm {
    Plm::row(a.dim(), a.row_of(m)).expect("row in range")
}

/// Product with a canonical left factor.
fn canonical_left(a: &Plm, b: &Plm) -> Plm {
    let pa = cplm_parts(a).expect("left factor is canonical");
    match classify(b) {
        PlmClass::RowPlm { m } => right_row(a, m),
        PlmClass::Cplm { leading: false } => {
            let pb = cplm_parts(b).expect("classified canonical");
            // b has its first-column 1 in row x > 1; the new first column is
            // column x−1 of A₁.
            let x = b.row_of(0);
            let col = pa.plc.row_of(x - 1);
            let mut v = vec![0u8; a.dim() - 1];
            v[col] = 1;
            CplmParts {
                leading: false,
                v,
                plc: product(&pa.plc, &pb.plc),
            }
            .assemble()
            .expect("block form is a PLM")
        }
        PlmClass::Cplm { leading: true } => {
            let pb = cplm_parts(b).expect("classified canonical");
            CplmParts {
                leading: pa.leading,
                v: pa.v.clone(),
                plc: product(&pa.plc, &pb.plc),
            }
            .assemble()
            .expect("block form is a PLM")
        }
        PlmClass::Pcplm { tau } => {
            let moved = b.col_act(&tau).expect("dimensions agree");
            canonical_left(a, &moved)
                .col_act(&tau.inverse())
                .expect("dimensions agree")
        }
        PlmClass::Iplm => irregular(a, &pa, b),
    }
}

/// Product with an irregular right factor: gather its first-row ones to the front,
/// apply the `X(A, ζ−1) + A₁·B₂` block formula, then undo the column permutation.
fn irregular(a: &Plm, pa: &CplmParts, b: &Plm) -> Plm {
    let d = a.dim();
    let k = d - 1;
    let tau = first_row_gather(b);
    let gathered = b.col_act(&tau).expect("dimensions agree");
    let zeta = gathered.zeta();

    // B₂: B₁ (rows 2..d, columns ζ+1..d of the gathered matrix) padded on the left
    // with ζ−1 zero columns.
    let mut b2 = IntMatrix::zeros(k, k);
    for j in zeta..d {
        let row = gathered.row_of(j);
        debug_assert!(row >= 1);
        b2.set(row - 1, j - 1, 1);
    }
    let lower = x_matrix(a, zeta - 1)
        .expect("canonical left factor")
        .add(&pa.plc.to_int().mul(&b2).expect("square blocks"))
        .expect("same shape");

    let mut c = DenseBinaryMatrix::zeros(d);
    for j in 0..zeta {
        c.set(0, j, pa.leading);
    }
    for (i, &vi) in pa.v.iter().enumerate() {
        c.set(i + 1, 0, vi != 0);
    }
    for i in 0..k {
        for j in 0..k {
            let x = lower.get(i, j);
            assert!(x == 0 || x == 1, "block entry {x} is not binary");
            c.set(i + 1, j + 1, x == 1);
        }
    }
    Plm::from_dense(&c)
        .expect("block formula yields a PLM")
        .col_act(&tau.inverse())
        .expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plm(c: &[usize]) -> Plm {
        Plm::from_one_based(c).unwrap()
    }

    fn all(d: usize) -> Vec<Plm> {
        let n = d.pow(d as u32);
        (0..n)
            .map(|mut idx| {
                let mut c = vec![0; d];
                for slot in c.iter_mut().rev() {
                    *slot = idx % d;
                    idx /= d;
                }
                Plm::from_colmap(c).unwrap()
            })
            .collect()
    }

    #[test]
    fn row_left_absorbs() {
        let r = Plm::row(3, 1).unwrap();
        for b in all(3) {
            assert_eq!(structural_multiply(&r, &b).unwrap(), r);
        }
    }

    #[test]
    fn canonical_with_row_component_times_non_leading() {
        // leading 0 with PLC R_1^(2)
        let a = plm(&[3, 2, 2]);
        assert_eq!(cplm_parts(&a).unwrap().plc, Plm::row(2, 0).unwrap());
        let b = plm(&[2, 3, 2]);
        assert_eq!(classify(&b), PlmClass::Cplm { leading: false });
        assert_eq!(
            structural_multiply(&a, &b).unwrap(),
            Plm::row(3, 1).unwrap()
        );
    }

    #[test]
    fn irregular_cases_in_dimension_three() {
        // A generic canonical left factor against the three irregular shapes.
        let a = plm(&[1, 3, 2]);
        for b in [plm(&[1, 1, 2]), plm(&[1, 3, 1]), plm(&[2, 1, 1])] {
            assert_eq!(classify(&b), PlmClass::Iplm);
            assert_eq!(
                structural_multiply(&a, &b).unwrap(),
                a.multiply(&b).unwrap()
            );
        }
    }

    #[test]
    fn matches_composition_exhaustively_small() {
        for d in 1..=3 {
            let xs = all(d);
            for a in &xs {
                for b in &xs {
                    assert_eq!(
                        structural_multiply(a, b).unwrap(),
                        a.multiply(b).unwrap(),
                        "{a:?} * {b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(structural_multiply(&Plm::identity(2), &Plm::identity(3)).is_err());
    }
}
