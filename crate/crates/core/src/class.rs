//! Classification of PLMs into row / canonical / pre-canonical / irregular, the
//! row-swap canonical form, and the block decomposition of canonical PLMs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::perm::Permutation;
use crate::plm::Plm;

/// The most specific class a PLM belongs to, in the order
/// row PLM > CPLM > PCPLM > IPLM.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PlmClass {
    /// Every column has its 1 in row `m` (0-based).
    RowPlm { m: usize },
    /// First row is zero outside column 1. `leading` when `a₁₁ = 1`.
    Cplm { leading: bool },
    /// Not canonical, but `tau ⋆ A` is.
    Pcplm { tau: Permutation },
    /// More than one but fewer than `d` ones in the first row.
    Iplm,
}

impl PlmClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RowPlm { .. } => "rowplm",
            Self::Cplm { .. } => "cplm",
            Self::Pcplm { .. } => "pcplm",
            Self::Iplm => "iplm",
        }
    }

    /// JSON form with 1-based indices, e.g. `{"class":"rowplm","m":1}`.
    pub fn to_json(&self) -> Value {
        match self {
            Self::RowPlm { m } => json!({"class": "rowplm", "m": m + 1}),
            Self::Cplm { leading } => json!({"class": "cplm", "leading": leading}),
            Self::Pcplm { tau } => json!({"class": "pcplm", "tau": tau.one_based()}),
            Self::Iplm => json!({"class": "iplm"}),
        }
    }
}

pub fn classify(a: &Plm) -> PlmClass {
    let d = a.dim();
    if let Some(m) = a.row_index() {
        return PlmClass::RowPlm { m };
    }
    let ones: Vec<usize> = (0..d).filter(|&j| a.row_of(j) == 0).collect();
    match ones.as_slice() {
        [] => PlmClass::Cplm { leading: false },
        [0] => PlmClass::Cplm { leading: true },
        [c] => PlmClass::Pcplm {
            tau: Permutation::transposition(d, 0, *c).expect("column in range"),
        },
        _ => PlmClass::Iplm,
    }
}

/// True when the first row is zero in columns 2..d. Row PLMs `R_m` with `m > 1` qualify.
pub fn is_cplm(a: &Plm) -> bool {
    a.colmap()[1..].iter().all(|&i| i != 0)
}

/// Swaps rows so the result is canonical: returns `(σ, σ ∗ a)`.
///
/// `σ` is the identity when `a` is already canonical, otherwise the transposition
/// `(1 r')` where `r'` is the smallest row with no 1 in columns 2..d.
pub fn canonicalize(a: &Plm) -> (Permutation, Plm) {
    let d = a.dim();
    if is_cplm(a) {
        return (Permutation::identity(d), a.clone());
    }
    let mut used = vec![false; d];
    for &i in &a.colmap()[1..] {
        used[i] = true;
    }
    // d-1 columns cannot cover all d rows.
    let r = used.iter().position(|&u| !u).expect("some row is free");
    let sigma = Permutation::transposition(d, 0, r).expect("row in range");
    let b = a.row_act(&sigma).expect("dimensions agree");
    (sigma, b)
}

/// Block form `[[leading, 0…0], [v, plc]]` of a canonical PLM.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CplmParts {
    pub leading: bool,
    /// Entries `a₂₁ … a_d1`.
    pub v: Vec<u8>,
    /// The permutation-like component, of dimension `d − 1`.
    pub plc: Plm,
}

impl CplmParts {
    pub fn assemble(&self) -> Result<Plm> {
        let d = self.plc.dim() + 1;
        if self.v.len() != d - 1 {
            return Err(Error::DimensionMismatch {
                left: self.v.len(),
                right: d - 1,
            });
        }
        let first = if self.leading {
            if self.v.iter().any(|&x| x != 0) {
                return Err(Error::NotPlm {
                    column: 1,
                    count: 1 + self.v.iter().filter(|&&x| x != 0).count(),
                });
            }
            0
        } else {
            let ones: Vec<usize> = (0..d - 1).filter(|&i| self.v[i] != 0).collect();
            if ones.len() != 1 {
                return Err(Error::NotPlm {
                    column: 1,
                    count: ones.len(),
                });
            }
            ones[0] + 1
        };
        let mut colmap = Vec::with_capacity(d);
        colmap.push(first);
        colmap.extend(self.plc.colmap().iter().map(|r| r + 1));
        Ok(Plm::from_colmap_unchecked(colmap))
    }
}

pub fn cplm_parts(a: &Plm) -> Result<CplmParts> {
    let d = a.dim();
    if d < 2 || !is_cplm(a) {
        return Err(Error::NotCplm);
    }
    let first = a.row_of(0);
    let v = (1..d).map(|i| (first == i) as u8).collect();
    let plc = Plm::from_colmap_unchecked(a.colmap()[1..].iter().map(|r| r - 1).collect());
    Ok(CplmParts {
        leading: first == 0,
        v,
        plc,
    })
}

/// `X(A, n)`: the `(d−1)×(d−1)` matrix whose first `n` columns equal the first-column
/// tail `v` of the canonical PLM `a`, zero elsewhere.
pub fn x_matrix(a: &Plm, n: usize) -> Result<IntMatrix> {
    let parts = cplm_parts(a)?;
    let k = a.dim() - 1;
    if n > k {
        return Err(Error::CountOutOfRange { n, max: k });
    }
    let mut x = IntMatrix::zeros(k, k);
    for (i, &vi) in parts.v.iter().enumerate() {
        for j in 0..n {
            x.set(i, j, vi as i64);
        }
    }
    Ok(x)
}

/// The column permutation `τ` that moves the first-row ones of `b` to the leading columns,
/// keeping relative order within both groups. `τ ⋆ b` then starts with a run of `ζ(b)` ones.
pub fn first_row_gather(b: &Plm) -> Permutation {
    let d = b.dim();
    // order[j] = τ⁻¹(j): the source column that lands at position j.
    let order: Vec<usize> = (0..d)
        .filter(|&j| b.row_of(j) == 0)
        .chain((0..d).filter(|&j| b.row_of(j) != 0))
        .collect();
    Permutation::from_images(order)
        .expect("order is a bijection")
        .inverse()
}
