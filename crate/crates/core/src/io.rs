//! Text formats.
//!
//! PLM files are either the dense form (a line with `d`, then `d` lines of `d`
//! space-separated 0/1 values) or a single column-map line `plm d: i1 … id`.
//! Stochastic matrix files use the dense layout with rational entries written
//! as `p/q`, integers, or decimals (read exactly as `p/10^k`).
//! Blank lines and lines starting with `#` are ignored.

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::matrix::DenseBinaryMatrix;
use crate::plm::Plm;
use crate::stochastic::{Rational, StochasticMatrix};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_dim(line: usize, s: &str) -> Result<usize> {
    let d: usize = s
        .parse()
        .map_err(|_| parse_err(line, format!("expected a dimension, found `{s}`")))?;
    if d == 0 {
        return Err(parse_err(line, "dimension must be at least 1"));
    }
    Ok(d)
}

/// Reads the dense header and rows, returning each row as its raw tokens with line numbers.
fn dense_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header: (usize, &'a str),
) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let d = parse_dim(header.0, header.1)?;
    let mut rows = Vec::with_capacity(d);
    for k in 0..d {
        let (n, l) = lines
            .next()
            .ok_or_else(|| parse_err(header.0, format!("expected {d} rows, found {k}")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != d {
            return Err(parse_err(
                n,
                format!("expected {d} entries, found {}", toks.len()),
            ));
        }
        rows.push((n, toks));
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n, "unexpected trailing content"));
    }
    Ok(rows)
}

pub fn parse_plm(text: &str) -> Result<Plm> {
    let mut lines = content_lines(text);
    let (n, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    if let Some(rest) = first.strip_prefix("plm") {
        if let Some((n2, _)) = lines.next() {
            return Err(parse_err(n2, "unexpected trailing content"));
        }
        return parse_colmap_line(n, rest);
    }
    let rows = dense_rows(&mut lines, (n, first))?;
    let mut bits = Vec::with_capacity(rows.len());
    for (line, toks) in &rows {
        let row = toks
            .iter()
            .map(|t| match *t {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(parse_err(*line, format!("entry `{other}` is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        bits.push(row);
    }
    let m = DenseBinaryMatrix::from_rows(&bits)?;
    Plm::from_dense(&m).map_err(|e| match e {
        Error::NotPlm { column, count } => parse_err(
            rows[0].0,
            format!("column {column} has {count} ones, expected exactly 1"),
        ),
        other => other,
    })
}

fn parse_colmap_line(line: usize, rest: &str) -> Result<Plm> {
    let (dim, cols) = rest
        .split_once(':')
        .ok_or_else(|| parse_err(line, "expected `plm d: i1 … id`"))?;
    let d = parse_dim(line, dim.trim())?;
    let cols = cols
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad row index `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if cols.len() != d {
        return Err(parse_err(
            line,
            format!("expected {d} row indices, found {}", cols.len()),
        ));
    }
    if let Some(&bad) = cols.iter().find(|&&r| r == 0 || r > d) {
        return Err(parse_err(line, format!("row index {bad} outside 1..={d}")));
    }
    Plm::from_one_based(&cols)
}

/// Parses `p/q`, an integer, or a decimal such as `-0.25`, exactly.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("`{s}` is not a rational number");
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("`{s}` has a zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let (neg, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int.strip_prefix('+').unwrap_or(int)),
        };
        let digits_ok = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int) || !digits_ok(frac) || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let joined = format!("{int}{frac}");
        let num: BigInt = if joined.is_empty() {
            BigInt::zero()
        } else {
            joined.parse().map_err(|_| bad())?
        };
        let den = num::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn parse_stochastic(text: &str) -> Result<StochasticMatrix> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let rows = dense_rows(&mut lines, header)?;
    let parsed = rows
        .iter()
        .map(|(line, toks)| {
            toks.iter()
                .map(|t| parse_rational(t).map_err(|m| parse_err(*line, m)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    StochasticMatrix::from_rows(parsed)
}
