//! Permutation-like matrices: binary square matrices with exactly one 1 per column.
//!
//! A PLM is stored as its column map. The crate covers the multiplicative structure
//! (classification, canonical forms, a structural product), powers and spectra, greedy
//! decomposition of exact left stochastic matrices, and exhaustive verification sweeps.
//!
//! Internally indices are 0-based; every text format, JSON report and error message
//! is 1-based.

pub mod class;
pub mod error;
pub mod io;
pub mod matrix;
pub mod perm;
pub mod plm;
pub mod poly;
pub mod spectral;
pub mod stochastic;
pub mod strategy;
pub mod structural;
pub mod verify;

pub use class::{canonicalize, classify, cplm_parts, is_cplm, x_matrix, CplmParts, PlmClass};
pub use error::{Error, Result};
pub use matrix::{DenseBinaryMatrix, IntMatrix};
pub use perm::Permutation;
pub use plm::Plm;
pub use spectral::{
    char_poly, eigen_check, periodicity, power, power_cycle, CharPoly, EigenReport, Periodicity,
    PeriodicityVerdict, PowerCycle, DEFAULT_TOL,
};
pub use stochastic::{
    convex_combine, decompose, random_left_stochastic, Decomposition, Rational, StochasticMatrix,
    Term,
};
pub use strategy::{MulRegistry, MulStrategy};
pub use structural::structural_multiply;
pub use verify::{Sweep, SweepConfig, SweepRegistry, SweepReport};
