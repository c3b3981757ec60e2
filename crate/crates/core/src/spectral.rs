//! Powers, eventual periodicity, characteristic polynomials and eigenvalue verdicts.

use std::collections::HashMap;

use num::complex::Complex64;
use serde_json::{json, Value};

use crate::error::Result;
use crate::matrix::IntMatrix;
use crate::plm::Plm;
use crate::poly;

pub const DEFAULT_TOL: f64 = 1e-9;

pub fn power(a: &Plm, mut k: u64) -> Plm {
    let mut result = Plm::identity(a.dim());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = result.multiply(&base).expect("same dimension");
        }
        base = base.multiply(&base).expect("same dimension");
        k >>= 1;
    }
    result
}

/// Minimal `(tail, period)` with `A^(tail+period) = A^tail`, `tail ≥ 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PowerCycle {
    pub tail: u64,
    pub period: u64,
}

pub fn power_cycle(a: &Plm) -> PowerCycle {
    let mut seen: HashMap<Plm, u64> = HashMap::new();
    let mut cur = a.clone();
    let mut i = 1u64;
    loop {
        if let Some(&s) = seen.get(&cur) {
            return PowerCycle {
                tail: s,
                period: i - s,
            };
        }
        let next = cur.multiply(a).expect("same dimension");
        seen.insert(cur, i);
        cur = next;
        i += 1;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PeriodicityVerdict {
    /// `A^(k+1) = A` with `k` minimal.
    Periodic {
        k: u64,
    },
    /// `A^e` is the row PLM `R_m` (0-based `m`), `e` minimal.
    PreRow {
        e: u64,
        m: usize,
    },
    EventuallyPeriodic {
        s: u64,
        t: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Periodicity {
    pub verdict: PeriodicityVerdict,
    /// Some positive power is a row PLM. True for row PLMs themselves.
    pub is_prerow: bool,
    pub cycle: PowerCycle,
}

impl Periodicity {
    pub fn to_json(&self) -> Value {
        let mut v = match self.verdict {
            PeriodicityVerdict::Periodic { k } => json!({"periodicity": "periodic", "k": k}),
            PeriodicityVerdict::PreRow { e, m } => {
                json!({"periodicity": "prerow", "e": e, "m": m + 1})
            }
            PeriodicityVerdict::EventuallyPeriodic { s, t } => {
                json!({"periodicity": "eventuallyperiodic", "s": s, "t": t})
            }
        };
        v["is_prerow"] = json!(self.is_prerow);
        v
    }
}

pub fn periodicity(a: &Plm) -> Periodicity {
    let cycle = power_cycle(a);
    // Past tail + period the powers repeat, so a row power appears by then or never.
    let mut first_row = None;
    let mut cur = a.clone();
    for e in 1..=cycle.tail + cycle.period {
        if let Some(m) = cur.row_index() {
            first_row = Some((e, m));
            break;
        }
        cur = cur.multiply(a).expect("same dimension");
    }
    let verdict = if cycle.tail == 1 {
        PeriodicityVerdict::Periodic { k: cycle.period }
    } else if let Some((e, m)) = first_row {
        PeriodicityVerdict::PreRow { e, m }
    } else {
        PeriodicityVerdict::EventuallyPeriodic {
            s: cycle.tail,
            t: cycle.period,
        }
    };
    Periodicity {
        verdict,
        is_prerow: first_row.is_some(),
        cycle,
    }
}

/// Monic characteristic polynomial `det(xI − A)` with exact integer coefficients,
/// ascending (`coefficients[i]` multiplies `xⁱ`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharPoly {
    pub coefficients: Vec<i64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn constant(&self) -> i64 {
        self.coefficients[0]
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let n = m.nrows();
        let mut acc = IntMatrix::zeros(n, n);
        for &c in self.coefficients.iter().rev() {
            acc = acc.mul(m).expect("square");
            acc.scale_add_identity(c);
        }
        acc
    }

    /// Human-readable form, e.g. `x^3 - x^2`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (i, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = c.unsigned_abs();
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if mag != 1 || i == 0 {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

/// Faddeev–LeVerrier: `M₀ = 0`, `M_k = A·M_{k−1} + c_{n−k+1} I`, `c_{n−k} = −tr(A·M_k)/k`.
/// Every division is exact over the integers.
pub fn char_poly(a: &Plm) -> CharPoly {
    let n = a.dim();
    let am = a.to_int();
    let mut c = vec![0i64; n + 1];
    c[n] = 1;
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        m = am.mul(&m).expect("square");
        m.scale_add_identity(c[n - k + 1]);
        let t = am.mul(&m).expect("square").trace();
        assert_eq!(t % k as i64, 0, "Faddeev–LeVerrier division must be exact");
        c[n - k] = -t / k as i64;
    }
    CharPoly { coefficients: c }
}

/// Maximum column sum of the dense form.
pub fn norm1(a: &Plm) -> u64 {
    let m = a.to_dense();
    (0..m.dim())
        .map(|j| (0..m.dim()).map(|i| m.get(i, j) as u64).sum::<u64>())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, PartialEq, Debug)]
pub struct EigenReport {
    /// Exact: `x` divides the characteristic polynomial.
    pub has_zero: bool,
    /// Exact: `A^(s+t) = A^s` holds, so every nonzero eigenvalue is a `t`-th root of unity.
    pub roots_of_unity_ok: bool,
    pub period: u64,
    pub char_poly: CharPoly,
    pub numeric_eigenvalues: Vec<Complex64>,
    pub spectral_radius_numeric: f64,
    /// Every numeric root is within `tol` of 0 or of a `period`-th root of unity.
    pub numeric_check: bool,
}

impl EigenReport {
    pub fn to_json(&self) -> Value {
        json!({
            "has_zero": self.has_zero,
            "roots_of_unity_ok": self.roots_of_unity_ok,
            "period": self.period,
            "char_poly": self.char_poly.coefficients,
            "numeric_eigenvalues": self
                .numeric_eigenvalues
                .iter()
                .map(|z| [clean(z.re), clean(z.im)])
                .collect::<Vec<_>>(),
            "spectral_radius_numeric": clean(self.spectral_radius_numeric),
            "numeric_check": self.numeric_check,
        })
    }
}

// Negative zero prints as "-0.0"; fold it into 0.0.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Whether a numeric root is within `tol` of zero or of a `t`-th root of unity.
pub fn near_zero_or_root_of_unity(z: Complex64, t: u64, tol: f64) -> bool {
    if z.norm() <= tol {
        return true;
    }
    let t = u32::try_from(t).unwrap_or(u32::MAX);
    (z.norm() - 1.0).abs() <= tol && (z.powu(t) - 1.0).norm() <= tol
}

pub fn eigen_check(a: &Plm, tol: f64) -> Result<EigenReport> {
    assert!(tol > 0.0, "tolerance must be positive");
    let cp = char_poly(a);
    let cycle = power_cycle(a);
    let roots_of_unity_ok = power(a, cycle.tail + cycle.period) == power(a, cycle.tail);
    let eigenvalues = poly::roots(&cp.coefficients)?;
    let radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let numeric_check = eigenvalues
        .iter()
        .all(|&z| near_zero_or_root_of_unity(z, cycle.period, tol));
    Ok(EigenReport {
        has_zero: cp.constant() == 0,
        roots_of_unity_ok,
        period: cycle.period,
        char_poly: cp,
        numeric_eigenvalues: eigenvalues,
        spectral_radius_numeric: radius,
        numeric_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plm(c: &[usize]) -> Plm {
        Plm::from_one_based(c).unwrap()
    }

    #[test]
    fn power_examples() {
        let p2 = plm(&[2, 1]);
        assert_eq!(power(&p2, 2), Plm::identity(2));
        assert_eq!(power(&p2, 0), Plm::identity(2));
        assert_eq!(power(&plm(&[1, 1]), 5), plm(&[1, 1]));
        assert_eq!(power(&plm(&[2, 3, 3]), 3), Plm::row(3, 2).unwrap());
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(
            power_cycle(&Plm::identity(3)),
            PowerCycle { tail: 1, period: 1 }
        );
        assert_eq!(
            power_cycle(&plm(&[2, 1])),
            PowerCycle { tail: 1, period: 2 }
        );
        assert_eq!(
            power_cycle(&plm(&[2, 3, 3])),
            PowerCycle { tail: 2, period: 1 }
        );
    }

    #[test]
    fn periodicity_examples() {
        let p = periodicity(&plm(&[2, 1]));
        assert_eq!(p.verdict, PeriodicityVerdict::Periodic { k: 2 });
        assert!(!p.is_prerow);

        let p = periodicity(&plm(&[2, 3, 3]));
        assert_eq!(p.verdict, PeriodicityVerdict::PreRow { e: 2, m: 2 });
        assert!(p.is_prerow);

        let p = periodicity(&Plm::row(3, 1).unwrap());
        assert_eq!(p.verdict, PeriodicityVerdict::Periodic { k: 1 });
        assert!(p.is_prerow);
    }

    #[test]
    fn eventually_periodic_exists_in_dimension_four() {
        // Column map 1 ↔ 2 with the tail 3 → 4 → 1.
        let a = plm(&[2, 1, 4, 1]);
        let p = periodicity(&a);
        assert_eq!(
            p.verdict,
            PeriodicityVerdict::EventuallyPeriodic { s: 2, t: 2 }
        );
        assert!(!p.is_prerow);
    }

    #[test]
    fn periodicity_json() {
        assert_eq!(
            periodicity(&plm(&[2, 3, 3])).to_json().to_string(),
            r#"{"e":2,"is_prerow":true,"m":3,"periodicity":"prerow"}"#
        );
        assert_eq!(
            periodicity(&plm(&[2, 1])).to_json().to_string(),
            r#"{"is_prerow":false,"k":2,"periodicity":"periodic"}"#
        );
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&plm(&[2, 1])).coefficients, vec![-1, 0, 1]);
        assert_eq!(char_poly(&plm(&[1, 1])).coefficients, vec![0, -1, 1]);
        assert_eq!(char_poly(&plm(&[2, 3, 3])).coefficients, vec![0, 0, -1, 1]);
        assert_eq!(char_poly(&plm(&[2, 3, 3])).pretty(), "x^3 - x^2");
        assert_eq!(char_poly(&plm(&[2, 1])).pretty(), "x^2 - 1");
    }

    #[test]
    fn cayley_hamilton_examples() {
        for a in [plm(&[2, 1]), plm(&[2, 3, 3]), plm(&[2, 3, 1, 1])] {
            assert!(char_poly(&a).eval_matrix(&a.to_int()).is_zero());
        }
    }

    #[test]
    fn eigen_examples() {
        let r = eigen_check(&plm(&[2, 1]), DEFAULT_TOL).unwrap();
        assert!(!r.has_zero);
        assert!(r.roots_of_unity_ok && r.numeric_check);
        assert!((r.spectral_radius_numeric - 1.0).abs() < 1e-12);
        let mut re: Vec<f64> = r.numeric_eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);

        let r = eigen_check(&plm(&[1, 1]), DEFAULT_TOL).unwrap();
        assert!(r.has_zero);
        assert_eq!(r.period, 1);
        let nonzero: Vec<_> = r
            .numeric_eigenvalues
            .iter()
            .filter(|z| z.norm() > 0.5)
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert!((nonzero[0] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn norm1_examples() {
        assert_eq!(norm1(&plm(&[2, 1])), 1);
        assert_eq!(norm1(&Plm::row(3, 2).unwrap()), 1);
        assert_eq!(norm1(&Plm::identity(5)), 1);
    }
}
