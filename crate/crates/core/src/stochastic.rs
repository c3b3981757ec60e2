//! Exact left stochastic matrices and their decomposition into convex combinations
//! of permutation-like matrices.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::plm::Plm;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A square matrix of exact rationals. Left stochasticity is a checked property,
/// not a construction invariant, so invalid inputs can be reported precisely.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StochasticMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl StochasticMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    row: i + 1,
                    len: row.len(),
                    dim,
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_plm(p: &Plm) -> Self {
        let mut m = Self::zeros(p.dim());
        for (j, &i) in p.colmap().iter().enumerate() {
            *m.get_mut(i, j) = Rational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.dim + j]
    }

    pub fn column_sum(&self, j: usize) -> Rational {
        (0..self.dim).fold(Rational::zero(), |acc, i| acc + self.get(i, j))
    }

    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|x| x.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.entries.iter().any(Signed::is_negative)
    }

    /// Checks nonnegativity and unit column sums, reporting the first violation.
    pub fn validate_left_stochastic(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = self.get(i, j);
                if x.is_negative() {
                    return Err(Error::NegativeEntry {
                        row: i + 1,
                        column: j + 1,
                        value: x.to_string(),
                    });
                }
            }
        }
        for j in 0..self.dim {
            let s = self.column_sum(j);
            if !s.is_one() {
                return Err(Error::NotLeftStochastic {
                    column: j + 1,
                    sum: s.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn is_left_stochastic(&self) -> bool {
        self.validate_left_stochastic().is_ok()
    }

    /// Returns the PLM when every entry is 0 or 1 and each column has exactly one 1.
    pub fn as_plm(&self) -> Option<Plm> {
        let mut colmap = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut row = None;
            for i in 0..self.dim {
                let x = self.get(i, j);
                if x.is_one() {
                    if row.is_some() {
                        return None;
                    }
                    row = Some(i);
                } else if !x.is_zero() {
                    return None;
                }
            }
            colmap.push(row?);
        }
        Plm::from_colmap(colmap).ok()
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.dim)
            .map(<[Rational]>::to_vec)
            .collect()
    }
}

impl fmt::Display for StochasticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `r(B)`: for each column, the smallest row holding a strictly positive entry (0-based).
pub fn first_positive_rows(b: &StochasticMatrix) -> Result<Vec<usize>> {
    (0..b.dim())
        .map(|j| {
            (0..b.dim())
                .find(|&i| b.get(i, j).is_positive())
                .ok_or(Error::ZeroColumn { column: j + 1 })
        })
        .collect()
}

/// `P(B)`: the PLM with a 1 at `(r(B)_j, j)` for every column `j`.
pub fn p_of(b: &StochasticMatrix) -> Result<Plm> {
    Plm::from_colmap(first_positive_rows(b)?)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub lambda: Rational,
    pub plm: Plm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub terms: Vec<Term>,
}

impl Decomposition {
    pub fn weight_sum(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, t| acc + &t.lambda)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "terms": self
                .terms
                .iter()
                .map(|t| json!({"lambda": t.lambda.to_string(), "colmap": t.plm.one_based()}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |message: &str| Error::Parse {
            line: 1,
            message: message.to_string(),
        };
        let dim = v["dim"].as_u64().ok_or_else(|| bad("missing \"dim\""))? as usize;
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| bad("missing \"terms\""))?
            .iter()
            .map(|t| {
                let lambda = t["lambda"]
                    .as_str()
                    .ok_or_else(|| bad("term without string \"lambda\""))
                    .and_then(|s| crate::io::parse_rational(s).map_err(|m| bad(&m)))?;
                let colmap = t["colmap"]
                    .as_array()
                    .ok_or_else(|| bad("term without \"colmap\""))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| bad("bad colmap entry"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let plm = Plm::from_one_based(&colmap)?;
                if plm.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        left: dim,
                        right: plm.dim(),
                    });
                }
                Ok(Term { lambda, plm })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, terms })
    }
}

/// One step of the greedy decomposition: the term taken and the remainder it left.
#[derive(Clone, Debug)]
pub struct Step {
    pub term: Term,
    pub remainder: StochasticMatrix,
}

/// Runs the decomposition and keeps every intermediate remainder `A_n`.
///
/// Each step takes `P = P(A_n)` and `λ = min_j (A_n)[r_j, j]`, then subtracts `λ·P`.
/// The minimum is attained somewhere, so each step zeroes at least one more entry and
/// the loop ends within `d²` steps.
pub fn decompose_traced(m: &StochasticMatrix) -> Result<Vec<Step>> {
    m.validate_left_stochastic()?;
    let d = m.dim();
    let mut current = m.clone();
    let mut steps = Vec::new();
    while !current.is_zero() {
        let rows = first_positive_rows(&current)?;
        let lambda = rows
            .iter()
            .enumerate()
            .map(|(j, &i)| current.get(i, j))
            .min()
            .expect("nonempty")
            .clone();
        for (j, &i) in rows.iter().enumerate() {
            let x = current.get_mut(i, j);
            *x = &*x - &lambda;
        }
        steps.push(Step {
            term: Term {
                lambda,
                plm: Plm::from_colmap_unchecked(rows),
            },
            remainder: current.clone(),
        });
        assert!(steps.len() <= d * d, "decomposition exceeded d² steps");
    }
    Ok(steps)
}

pub fn decompose(m: &StochasticMatrix) -> Result<Decomposition> {
    let steps = decompose_traced(m)?;
    Ok(Decomposition {
        dim: m.dim(),
        terms: steps.into_iter().map(|s| s.term).collect(),
    })
}

/// `Σ λᵢ Pᵢ` for weights in `[0, 1]` summing to exactly 1.
pub fn convex_combine(terms: &[Term]) -> Result<StochasticMatrix> {
    let first = terms.first().ok_or(Error::WeightSumNotOne {
        sum: "0".to_string(),
    })?;
    let d = first.plm.dim();
    let mut out = StochasticMatrix::zeros(d);
    let mut sum = Rational::zero();
    for t in terms {
        if t.plm.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: t.plm.dim(),
            });
        }
        if t.lambda.is_negative() || t.lambda > Rational::one() {
            return Err(Error::WeightOutOfRange {
                value: t.lambda.to_string(),
            });
        }
        sum += &t.lambda;
        for (j, &i) in t.plm.colmap().iter().enumerate() {
            let x = out.get_mut(i, j);
            *x = &*x + &t.lambda;
        }
    }
    if !sum.is_one() {
        return Err(Error::WeightSumNotOne {
            sum: sum.to_string(),
        });
    }
    Ok(out)
}

/// Convex combination of arbitrary left stochastic matrices.
pub fn convex_combine_matrices(terms: &[(Rational, StochasticMatrix)]) -> Result<StochasticMatrix> {
    let d = terms.first().map_or(0, |(_, m)| m.dim());
    let mut out = StochasticMatrix::zeros(d);
    let mut sum = Rational::zero();
    for (w, m) in terms {
        if m.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: m.dim(),
            });
        }
        if w.is_negative() || *w > Rational::one() {
            return Err(Error::WeightOutOfRange {
                value: w.to_string(),
            });
        }
        sum += w;
        for (o, x) in out.entries.iter_mut().zip(&m.entries) {
            *o = &*o + w * x;
        }
    }
    if !sum.is_one() {
        return Err(Error::WeightSumNotOne {
            sum: sum.to_string(),
        });
    }
    Ok(out)
}

pub fn recompose(dec: &Decomposition) -> Result<StochasticMatrix> {
    convex_combine(&dec.terms)
}

/// Deterministic random left stochastic matrix. Each column draws a denominator
/// `q ≤ max_denominator` and splits `q` into `d` nonnegative parts.
pub fn random_left_stochastic(d: usize, seed: u64, max_denominator: u64) -> StochasticMatrix {
    assert!(d >= 1 && max_denominator >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_left_stochastic_with(&mut rng, d, max_denominator)
}

pub fn random_left_stochastic_with<R: Rng>(
    rng: &mut R,
    d: usize,
    max_denominator: u64,
) -> StochasticMatrix {
    let mut m = StochasticMatrix::zeros(d);
    for j in 0..d {
        let q = rng.gen_range(1..=max_denominator);
        // d−1 cut points in 0..=q, sorted, give a uniform composition of q.
        let mut cuts: Vec<u64> = (0..d - 1).map(|_| rng.gen_range(0..=q)).collect();
        cuts.sort_unstable();
        let mut prev = 0;
        for (i, c) in cuts.into_iter().chain(std::iter::once(q)).enumerate() {
            *m.get_mut(i, j) = Rational::new(BigInt::from(c - prev), BigInt::from(q));
            prev = c;
        }
    }
    m
}

/// Approximate decomposition over `f64`. Entries at or below `zero_tol` count as zero.
/// Results are not exact; use the rational path when exactness matters.
pub fn decompose_f64(entries: &[Vec<f64>], zero_tol: f64) -> Result<Vec<(f64, Plm)>> {
    let d = entries.len();
    let mut a: Vec<Vec<f64>> = entries.to_vec();
    let mut out = Vec::new();
    for _ in 0..d * d {
        if a.iter().flatten().all(|&x| x.abs() <= zero_tol) {
            break;
        }
        let rows = (0..d)
            .map(|j| {
                (0..d)
                    .find(|&i| a[i][j] > zero_tol)
                    .ok_or(Error::ZeroColumn { column: j + 1 })
            })
            .collect::<Result<Vec<_>>>()?;
        let lambda = rows
            .iter()
            .enumerate()
            .map(|(j, &i)| a[i][j])
            .fold(f64::INFINITY, f64::min);
        for (j, &i) in rows.iter().enumerate() {
            a[i][j] -= lambda;
            if a[i][j].abs() <= zero_tol {
                a[i][j] = 0.0;
            }
        }
        out.push((lambda, Plm::from_colmap(rows)?));
    }
    Ok(out)
}
