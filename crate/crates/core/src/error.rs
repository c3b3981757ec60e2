use thiserror::Error;

/// Errors produced by the PLM library.
///
/// Row and column indices carried by variants are 1-based, matching the
/// notation used in every file format and report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation-like matrix: column {column} has {count} ones")]
    NotPlm { column: usize, count: usize },

    #[error("entry ({row}, {column}) is not 0 or 1")]
    NotBinary { row: usize, column: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension {d} is below the minimum {min}")]
    DimensionTooSmall { d: usize, min: usize },

    #[error("row index {row} out of range for dimension {dim}")]
    RowOutOfRange { row: usize, dim: usize },

    #[error("not a bijection on 1..={dim}")]
    InvalidPermutation { dim: usize },

    #[error("matrix is not a canonical permutation-like matrix")]
    NotCplm,

    #[error("count {n} out of range 0..={max}")]
    CountOutOfRange { n: usize, max: usize },

    #[error("entry ({row}, {column}) is negative: {value}")]
    NegativeEntry {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("column {column} sums to {sum}, expected 1")]
    NotLeftStochastic { column: usize, sum: String },

    #[error("column {column} has no strictly positive entry")]
    ZeroColumn { column: usize },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumNotOne { sum: String },

    #[error("weight {value} outside [0, 1]")]
    WeightOutOfRange { value: String },

    #[error("root finding did not converge for polynomial of degree {degree}")]
    RootFindingFailure { degree: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
