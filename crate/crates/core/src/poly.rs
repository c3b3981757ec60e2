//! Univariate polynomial helpers: exact square-free factorization over ℚ and a
//! simultaneous-iteration root finder for the (simple-rooted) factors.
//!
//! Coefficient vectors are ascending: `p[i]` multiplies `xⁱ`.

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn degree(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

fn is_constant(p: &QPoly) -> bool {
    p.len() <= 1
}

fn monic(mut p: QPoly) -> QPoly {
    trim(&mut p);
    if let Some(lead) = p.last().cloned() {
        if !lead.is_zero() {
            for c in &mut p {
                *c = &*c / &lead;
            }
        }
    }
    p
}

fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

/// Polynomial long division; returns `(quotient, remainder)`.
fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = degree(b);
    let lead = b[db].clone();
    assert!(!lead.is_zero(), "division by zero polynomial");
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let coef = r.last().expect("nonempty") / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &coef * bc;
        }
        q[shift] = coef;
        r.pop();
        trim(&mut r);
        if r.len() < b.len() {
            break;
        }
    }
    if r.is_empty() {
        r.push(BigRational::zero());
    }
    trim(&mut q);
    (q, r)
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = monic(a.clone());
    let mut y = monic(b.clone());
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

fn exact_div(a: &QPoly, b: &QPoly) -> QPoly {
    let (q, r) = div_rem(a, b);
    debug_assert!(r.iter().all(Zero::is_zero), "inexact polynomial division");
    q
}

/// Yun's square-free factorization of an integer polynomial: monic factors with
/// pairwise-coprime simple roots, each paired with its multiplicity.
pub fn square_free(p: &[i64]) -> Vec<(Vec<BigRational>, usize)> {
    let mut a: QPoly = p
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    trim(&mut a);
    if is_constant(&a) {
        return Vec::new();
    }
    let a = monic(a);
    let da = derivative(&a);
    let mut c = gcd(&a, &da);
    let mut w = exact_div(&a, &c);
    let mut out = Vec::new();
    let mut mult = 1;
    while !is_constant(&c) {
        let y = gcd(&w, &c);
        let z = exact_div(&w, &y);
        if !is_constant(&z) {
            out.push((monic(z), mult));
        }
        mult += 1;
        c = exact_div(&c, &y);
        w = y;
    }
    if !is_constant(&w) {
        out.push((monic(w), mult));
    }
    out
}

fn eval(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // Horner for p and p'.
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a polynomial with simple roots, by Aberth–Ehrlich iteration followed by
/// Newton polishing. The starting points are deterministic.
pub fn simple_roots(p: &[BigRational]) -> Result<Vec<Complex64>> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<Complex64> = p
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    let lead = coeffs[n];
    let coeffs: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-coeffs[0]]);
    }

    // Cauchy bound on root moduli.
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = bound.min(2.0);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius * 0.9, theta)
        })
        .collect();

    let mut converged = false;
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (v, dv) = eval(&coeffs, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 * bound {
            converged = true;
            break;
        }
    }
    if !converged || z.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootFindingFailure { degree: n });
    }
    for r in &mut z {
        for _ in 0..3 {
            let (v, dv) = eval(&coeffs, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    Ok(z)
}

/// All roots of an integer polynomial with multiplicity. Zero roots are split off
/// exactly; the rest come from the square-free factors.
pub fn roots(p: &[i64]) -> Result<Vec<Complex64>> {
    let zeros = p.iter().take_while(|&&c| c == 0).count();
    let rest = &p[zeros.min(p.len())..];
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    for (factor, mult) in square_free(rest) {
        let rs = simple_roots(&factor)?;
        for r in rs {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    out.sort_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// Exact product of integer polynomials.
pub fn int_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn square_free_of_repeated_roots() {
        // (x - 1)^3 (x + 1) = x^4 - 2x^3 + 2x - 1
        let f = square_free(&[-1, 2, 0, -2, 1]);
        assert_eq!(f.len(), 2);
        let one = BigRational::one();
        assert_eq!(f[0], (vec![one.clone(), one.clone()], 1));
        assert_eq!(f[1], (vec![-one.clone(), one], 3));
    }

    #[test]
    fn roots_of_unity_with_multiplicity() {
        // (x^2 - 1)(x^3 - 1) x^2
        let p = int_mul(&int_mul(&[-1, 0, 1], &[-1, 0, 0, 1]), &[0, 0, 1]);
        let rs = roots(&p).unwrap();
        assert_eq!(rs.len(), 7);
        assert_eq!(rs.iter().filter(|r| r.norm() == 0.0).count(), 2);
        let ones = rs
            .iter()
            .filter(|r| close(**r, Complex64::new(1.0, 0.0)))
            .count();
        assert_eq!(ones, 2);
        for r in rs.iter().filter(|r| r.norm() > 0.0) {
            assert!((r.norm() - 1.0).abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn identity_char_poly_roots_are_exact() {
        // (x - 1)^5
        let rs = roots(&[-1, 5, -10, 10, -5, 1]).unwrap();
        assert!(rs.iter().all(|r| close(*r, Complex64::new(1.0, 0.0))));
    }

    #[test]
    fn cyclotomic_roots() {
        // x^5 - 1
        let rs = roots(&[-1, 0, 0, 0, 0, 1]).unwrap();
        for r in rs {
            assert!((r.powu(5) - 1.0).norm() < 1e-13);
        }
    }
}
