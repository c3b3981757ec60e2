//! Exhaustive enumeration of `PL_d` and the verification sweeps built on it.
//!
//! Every sweep is a [`Sweep`] registered by name in a [`SweepRegistry`]. Sweeps
//! split their index range across a rayon pool and merge results in index order,
//! so reports do not depend on the worker count.

mod sweeps;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::DenseBinaryMatrix;
use crate::plm::Plm;
use crate::spectral::DEFAULT_TOL;

pub use sweeps::{DecomposeSweep, EigenSweep, MultiplicationSweep, PeriodSweep, PrerowSweep};

/// Failures beyond this many are counted but not listed.
pub const MAX_LISTED_FAILURES: usize = 100;

/// Lexicographic iterator over all `d^d` column maps of dimension `d`.
#[derive(Clone, Debug)]
pub struct Enumerate {
    d: usize,
    next: Option<Vec<usize>>,
}

pub fn enumerate(d: usize) -> Enumerate {
    assert!(d >= 1, "dimension must be at least 1");
    Enumerate {
        d,
        next: Some(vec![0; d]),
    }
}

impl Iterator for Enumerate {
    type Item = Plm;

    fn next(&mut self) -> Option<Plm> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        // Odometer increment, last column fastest.
        let mut pos = self.d;
        while pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.d {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(Plm::from_colmap_unchecked(cur))
    }
}

/// Number of PLMs of dimension `d`, i.e. `d^d`.
pub fn count(d: usize) -> u64 {
    (d as u64).pow(d as u32)
}

/// The PLM at position `index` of the lexicographic enumeration.
pub fn plm_at(d: usize, mut index: u64) -> Plm {
    let mut colmap = vec![0; d];
    for slot in colmap.iter_mut().rev() {
        *slot = (index % d as u64) as usize;
        index /= d as u64;
    }
    Plm::from_colmap_unchecked(colmap)
}

/// Textbook integer product of two dense binary matrices.
pub fn oracle_multiply(a: &DenseBinaryMatrix, b: &DenseBinaryMatrix) -> Result<DenseBinaryMatrix> {
    crate::strategy::dense_multiply(a, b)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub d: usize,
    pub tol: f64,
    pub seed: u64,
    pub cases: usize,
    /// Rayon worker count; 0 uses the global pool.
    pub workers: usize,
    pub max_denominator: u64,
    /// Draw `cases` random PLMs (or pairs) from the seed instead of enumerating all of them.
    pub sampled: bool,
}

impl SweepConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            tol: DEFAULT_TOL,
            seed: 0,
            cases: 100,
            workers: 0,
            max_denominator: 100,
            sampled: false,
        }
    }

    /// Seeded generator for the `i`-th independent stream.
    pub(crate) fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Random PLMs of dimension `d` drawn uniformly from stream `stream`.
    pub(crate) fn sample(&self, stream: u64, n: usize) -> Vec<Plm> {
        let mut rng = self.rng(stream);
        (0..n)
            .map(|_| {
                Plm::from_colmap_unchecked((0..self.d).map(|_| rng.gen_range(0..self.d)).collect())
            })
            .collect()
    }

    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.workers == 0 {
            return f();
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .expect("thread pool")
            .install(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub sweep: String,
    pub d: usize,
    pub cases: u64,
    pub pass: bool,
    pub failures: Vec<Value>,
    pub findings: Map<String, Value>,
    pub elapsed_ms: u64,
}

impl SweepReport {
    pub(crate) fn build(
        sweep: &str,
        cfg: &SweepConfig,
        cases: u64,
        failures: Vec<Value>,
        mut findings: Map<String, Value>,
        started: Instant,
    ) -> Self {
        if cfg.sampled {
            findings.insert("sampled".into(), json!(true));
        }
        let total = failures.len();
        let mut failures = failures;
        if total > MAX_LISTED_FAILURES {
            failures.truncate(MAX_LISTED_FAILURES);
            findings.insert("failures_total".into(), json!(total));
        }
        Self {
            sweep: sweep.to_string(),
            d: cfg.d,
            cases,
            pass: total == 0,
            failures,
            findings,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// JSON with sorted keys.
    pub fn to_json(&self) -> Value {
        json!({
            "sweep": self.sweep,
            "d": self.d,
            "cases": self.cases,
            "pass": self.pass,
            "failures": self.failures,
            "findings": self.findings,
            "elapsed_ms": self.elapsed_ms,
        })
    }

    /// The same report with the timing zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

pub trait Sweep: Send + Sync {
    fn name(&self) -> &'static str;

    /// Report-only sweeps record findings on open questions and never fail.
    fn asserting(&self, d: usize) -> bool;

    fn min_dim(&self) -> usize {
        2
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport;
}

#[derive(Clone, Default)]
pub struct SweepRegistry {
    sweeps: BTreeMap<&'static str, Arc<dyn Sweep>>,
}

impl SweepRegistry {
    pub fn builtin() -> Self {
        let mut r = Self::default();
        r.register(Arc::new(MultiplicationSweep::default()));
        r.register(Arc::new(PeriodSweep));
        r.register(Arc::new(EigenSweep));
        r.register(Arc::new(PrerowSweep));
        r.register(Arc::new(DecomposeSweep));
        r
    }

    pub fn register(&mut self, sweep: Arc<dyn Sweep>) {
        self.sweeps.insert(sweep.name(), sweep);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Sweep>> {
        self.sweeps
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.sweeps.keys().copied().collect()
    }

    pub fn run(&self, name: &str, cfg: &SweepConfig) -> Result<SweepReport> {
        let sweep = self.get(name)?;
        if cfg.d < sweep.min_dim() {
            return Err(Error::DimensionTooSmall {
                d: cfg.d,
                min: sweep.min_dim(),
            });
        }
        Ok(sweep.run(cfg))
    }
}

pub fn sweep_multiplication(cfg: &SweepConfig) -> SweepReport {
    MultiplicationSweep::default().run(cfg)
}

pub fn sweep_period(cfg: &SweepConfig) -> SweepReport {
    PeriodSweep.run(cfg)
}

pub fn sweep_eigen(cfg: &SweepConfig) -> SweepReport {
    EigenSweep.run(cfg)
}

pub fn sweep_prerow(cfg: &SweepConfig) -> SweepReport {
    PrerowSweep.run(cfg)
}

pub fn sweep_decompose(cfg: &SweepConfig) -> SweepReport {
    DecomposeSweep.run(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate(1).count(), 1);
        assert_eq!(enumerate(2).count(), 4);
        assert_eq!(enumerate(3).count(), 27);
        assert_eq!(enumerate(4).count(), 256);
        let all: Vec<Plm> = enumerate(3).collect();
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in all.iter().enumerate() {
            assert_eq!(&plm_at(3, i as u64), p);
        }
        let two: Vec<Vec<usize>> = enumerate(2).map(|p| p.one_based()).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn registry_names() {
        assert_eq!(
            SweepRegistry::builtin().names(),
            vec!["decompose", "eigen", "mul", "period", "prerow"]
        );
        assert!(SweepRegistry::builtin().get("nope").is_err());
    }

    #[test]
    fn report_json_keys() {
        let r = sweep_period(&SweepConfig::new(2));
        let v = r.to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            vec![
                "cases",
                "d",
                "elapsed_ms",
                "failures",
                "findings",
                "pass",
                "sweep"
            ]
        );
    }
}
