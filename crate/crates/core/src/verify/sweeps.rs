use std::collections::BTreeMap;
use std::time::Instant;

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{count, plm_at, Sweep, SweepConfig, SweepReport};
use crate::plm::Plm;
use crate::spectral::{
    eigen_check, near_zero_or_root_of_unity, periodicity, power, PeriodicityVerdict,
};
use crate::stochastic::{
    decompose_traced, random_left_stochastic_with, recompose, Decomposition, Rational,
};
use crate::strategy::MulRegistry;

/// Runs `f` on every PLM of dimension `d` (or on a seeded sample) in parallel,
/// results in enumeration or draw order.
fn over_all<T: Send>(cfg: &SweepConfig, f: impl Fn(Plm) -> T + Sync + Send) -> Vec<T> {
    let d = cfg.d;
    if cfg.sampled {
        let plms = cfg.sample(0, cfg.cases);
        return cfg.install(|| plms.into_par_iter().map(&f).collect());
    }
    cfg.install(|| {
        (0..count(d))
            .into_par_iter()
            .map(|i| f(plm_at(d, i)))
            .collect()
    })
}

fn tally(map: &mut BTreeMap<String, u64>, key: impl Into<String>) {
    *map.entry(key.into()).or_default() += 1;
}

/// Compares every registered multiplication strategy on all ordered pairs.
pub struct MultiplicationSweep {
    strategies: MulRegistry,
}

impl Default for MultiplicationSweep {
    fn default() -> Self {
        Self {
            strategies: MulRegistry::builtin(),
        }
    }
}

impl MultiplicationSweep {
    pub fn with_strategies(strategies: MulRegistry) -> Self {
        Self { strategies }
    }
}

impl Sweep for MultiplicationSweep {
    fn name(&self) -> &'static str {
        "mul"
    }

    fn asserting(&self, _d: usize) -> bool {
        true
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport {
        let started = Instant::now();
        let reference = self
            .strategies
            .get("compose")
            .expect("compose is registered");
        let others: Vec<_> = self
            .strategies
            .iter()
            .filter(|s| s.name() != reference.name())
            .cloned()
            .collect();
        let (lefts, rights): (Vec<Plm>, Vec<Plm>) = if cfg.sampled {
            (cfg.sample(0, cfg.cases), cfg.sample(1, cfg.cases))
        } else {
            let all: Vec<Plm> = super::enumerate(cfg.d).collect();
            (all.clone(), all)
        };
        // Sampled runs pair the i-th draws; exhaustive runs take every ordered pair.
        let pairs_for = |i: usize| -> Vec<&Plm> {
            if cfg.sampled {
                vec![&rights[i]]
            } else {
                rights.iter().collect()
            }
        };
        let cases: u64 = if cfg.sampled {
            lefts.len() as u64
        } else {
            (lefts.len() * rights.len()) as u64
        };
        let failures: Vec<Value> = cfg
            .install(|| {
                (0..lefts.len())
                    .into_par_iter()
                    .map(|i| {
                        let a = &lefts[i];
                        let mut bad = Vec::new();
                        for b in pairs_for(i) {
                            let want = reference.multiply(a, b).expect("same dimension");
                            let mut observed = Map::new();
                            for s in &others {
                                match s.multiply(a, b) {
                                    Ok(c) if c == want => {}
                                    Ok(c) => {
                                        observed.insert(s.name().into(), json!(c.one_based()));
                                    }
                                    Err(e) => {
                                        observed.insert(s.name().into(), json!(e.to_string()));
                                    }
                                }
                            }
                            if !observed.is_empty() {
                                bad.push(json!({
                                    "a": a.one_based(),
                                    "b": b.one_based(),
                                    "expected": want.one_based(),
                                    "observed": observed,
                                }));
                            }
                        }
                        bad
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect();
        let mut findings = Map::new();
        findings.insert("reference".into(), json!(reference.name()));
        findings.insert(
            "strategies".into(),
            json!(others.iter().map(|s| s.name()).collect::<Vec<_>>()),
        );
        SweepReport::build(self.name(), cfg, cases, failures, findings, started)
    }
}

/// Periodic-or-square-is-row check. Asserted for `d ≤ 3`; a distribution report above.
pub struct PeriodSweep;

impl Sweep for PeriodSweep {
    fn name(&self) -> &'static str {
        "period"
    }

    fn asserting(&self, d: usize) -> bool {
        d <= 3
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport {
        let started = Instant::now();
        let asserting = self.asserting(cfg.d);
        let results = over_all(cfg, |a| {
            let p = periodicity(&a);
            let square_is_row = power(&a, 2).is_row();
            (a, p, square_is_row)
        });
        let mut dist = BTreeMap::new();
        let mut failures = Vec::new();
        let mut eventually = Vec::new();
        let mut max_index = 0;
        let mut square_row = 0u64;
        for (a, p, square_is_row) in &results {
            match p.verdict {
                PeriodicityVerdict::Periodic { k } => {
                    tally(&mut dist, "periodic");
                    max_index = max_index.max(k);
                }
                PeriodicityVerdict::PreRow { .. } => tally(&mut dist, "prerow"),
                PeriodicityVerdict::EventuallyPeriodic { .. } => {
                    tally(&mut dist, "eventuallyperiodic");
                    eventually.push(json!({"a": a.one_based(), "verdict": p.to_json()}));
                }
            }
            if *square_is_row {
                square_row += 1;
            }
            let ok = matches!(p.verdict, PeriodicityVerdict::Periodic { .. }) || *square_is_row;
            if asserting && !ok {
                failures.push(json!({
                    "a": a.one_based(),
                    "observed": p.to_json(),
                    "expected": "periodic, or A^2 a row PLM",
                }));
            }
        }
        let mut findings = Map::new();
        findings.insert("asserted".into(), json!(asserting));
        findings.insert("distribution".into(), json!(dist));
        findings.insert("max_periodic_index".into(), json!(max_index));
        findings.insert("square_is_row".into(), json!(square_row));
        if !asserting {
            findings.insert(
                "neither_periodic_nor_square_row".into(),
                json!(results
                    .iter()
                    .filter(|(_, p, sq)| {
                        !matches!(p.verdict, PeriodicityVerdict::Periodic { .. }) && !sq
                    })
                    .count()),
            );
        }
        findings.insert("eventually_periodic".into(), json!(eventually));
        SweepReport::build(
            self.name(),
            cfg,
            results.len() as u64,
            failures,
            findings,
            started,
        )
    }
}

/// Spectral checks. The cycle identity, the zero-eigenvalue criterion and the
/// spectral-radius bound are asserted for every `d`; the root-of-unity cross-check is
/// asserted for `d ≤ 3` and reported above.
pub struct EigenSweep;

impl Sweep for EigenSweep {
    fn name(&self) -> &'static str {
        "eigen"
    }

    fn asserting(&self, _d: usize) -> bool {
        true
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport {
        let started = Instant::now();
        let tol = cfg.tol;
        let conjecture_asserted = cfg.d <= 3;
        let results = over_all(cfg, |a| {
            let r = eigen_check(&a, tol);
            (a, r)
        });
        let mut failures = Vec::new();
        let mut counterexamples = Vec::new();
        let mut periods = BTreeMap::new();
        let mut with_zero = 0u64;
        let mut max_radius = 0.0f64;
        for (a, r) in &results {
            let r = match r {
                Ok(r) => r,
                Err(e) => {
                    failures.push(json!({"a": a.one_based(), "error": e.to_string()}));
                    continue;
                }
            };
            tally(&mut periods, r.period.to_string());
            if r.has_zero {
                with_zero += 1;
            }
            max_radius = max_radius.max(r.spectral_radius_numeric);
            let mut problems = Vec::new();
            if !r.roots_of_unity_ok {
                problems.push("power cycle identity does not hold");
            }
            if r.has_zero == a.is_permutation() {
                problems.push("zero eigenvalue does not match non-permutation");
            }
            if r.spectral_radius_numeric > 1.0 + tol {
                problems.push("spectral radius exceeds 1");
            }
            let off: Vec<_> = r
                .numeric_eigenvalues
                .iter()
                .filter(|z| !near_zero_or_root_of_unity(**z, r.period, tol))
                .map(|z| [z.re, z.im])
                .collect();
            if !off.is_empty() {
                let entry = json!({"a": a.one_based(), "period": r.period, "eigenvalues": off});
                if conjecture_asserted {
                    problems.push("eigenvalue not within tolerance of 0 or a root of unity");
                } else {
                    counterexamples.push(entry);
                }
            }
            if !problems.is_empty() {
                failures
                    .push(json!({"a": a.one_based(), "problems": problems, "report": r.to_json()}));
            }
        }
        let mut findings = Map::new();
        findings.insert("tol".into(), json!(tol));
        findings.insert("conjecture_asserted".into(), json!(conjecture_asserted));
        findings.insert("conjecture_counterexamples".into(), json!(counterexamples));
        findings.insert("period_distribution".into(), json!(periods));
        findings.insert("has_zero".into(), json!(with_zero));
        findings.insert("max_spectral_radius".into(), json!(max_radius));
        SweepReport::build(
            self.name(),
            cfg,
            results.len() as u64,
            failures,
            findings,
            started,
        )
    }
}

/// Lists pre-row PLMs and checks each against the form "CPLM with leading 0 and a row
/// PLM as its PLC" under three readings: literally, after some row permutation `σ∗A`,
/// and after a simultaneous relabeling `σAσ⁻¹`. Only the proven direction (the form
/// implies pre-row, literally and hence after relabeling) is asserted.
pub struct PrerowSweep;

/// Literal form: row 1 is empty and columns 2..d share one row.
pub fn has_prerow_form(a: &Plm) -> bool {
    let c = a.colmap();
    !c.contains(&0) && c[1..].windows(2).all(|w| w[0] == w[1])
}

/// Some row permutation moves `a` into the form: an unused row exists and
/// columns 2..d share one row.
pub fn has_prerow_form_up_to_rows(a: &Plm) -> bool {
    let c = a.colmap();
    !a.is_permutation() && c[1..].windows(2).all(|w| w[0] == w[1])
}

/// Some relabeling `σAσ⁻¹` is in the form: there is a point `p` outside the image with
/// every other point sent to one common row.
pub fn has_prerow_form_up_to_relabeling(a: &Plm) -> bool {
    let c = a.colmap();
    let d = c.len();
    let mut hit = vec![false; d];
    for &i in c {
        hit[i] = true;
    }
    (0..d).filter(|&p| !hit[p]).any(|p| {
        let mut others = (0..d).filter(|&x| x != p).map(|x| c[x]);
        others.next().is_none_or(|first| others.all(|r| r == first))
    })
}

impl Sweep for PrerowSweep {
    fn name(&self) -> &'static str {
        "prerow"
    }

    fn asserting(&self, _d: usize) -> bool {
        false
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport {
        let started = Instant::now();
        let results = over_all(cfg, |a| {
            let p = periodicity(&a);
            let forms = [
                has_prerow_form(&a),
                has_prerow_form_up_to_rows(&a),
                has_prerow_form_up_to_relabeling(&a),
            ];
            (a, p, forms)
        });
        let mut rows = Vec::new();
        let mut listed = Vec::new();
        let mut exceptions: [Vec<Value>; 3] = Default::default();
        let mut form_not_prerow_rows = Vec::new();
        let mut failures = Vec::new();
        for (a, p, forms) in &results {
            let [literal, up_to_rows, up_to_relabeling] = *forms;
            if (literal || up_to_relabeling) && !p.is_prerow {
                failures.push(json!({
                    "a": a.one_based(),
                    "expected": "pre-row",
                    "observed": p.to_json(),
                }));
            }
            if up_to_rows && !p.is_prerow {
                form_not_prerow_rows.push(json!(a.one_based()));
            }
            if !p.is_prerow {
                continue;
            }
            if a.is_row() {
                rows.push(json!(a.one_based()));
                continue;
            }
            for (k, holds) in forms.iter().enumerate() {
                if !holds {
                    exceptions[k].push(json!(a.one_based()));
                }
            }
            listed.push(json!({
                "a": a.one_based(),
                "verdict": p.to_json(),
                "literal_form": literal,
                "form_up_to_row_permutation": up_to_rows,
                "form_up_to_relabeling": up_to_relabeling,
            }));
        }
        let [literal_ex, rows_ex, relabel_ex] = exceptions;
        let mut findings = Map::new();
        findings.insert("row_plms".into(), json!(rows));
        findings.insert("prerow_count".into(), json!(listed.len()));
        findings.insert("prerow".into(), json!(listed));
        findings.insert("literal_form_exceptions".into(), json!(literal_ex));
        findings.insert("up_to_row_permutation_exceptions".into(), json!(rows_ex));
        findings.insert("up_to_relabeling_exceptions".into(), json!(relabel_ex));
        findings.insert(
            "row_permutation_form_but_not_prerow".into(),
            json!(form_not_prerow_rows.len()),
        );
        SweepReport::build(
            self.name(),
            cfg,
            results.len() as u64,
            failures,
            findings,
            started,
        )
    }
}

/// Random exact left stochastic matrices through the greedy decomposition.
pub struct DecomposeSweep;

fn check_decomposition(m: &crate::stochastic::StochasticMatrix) -> (usize, Vec<String>) {
    let d = m.dim();
    let mut problems = Vec::new();
    let steps = match decompose_traced(m) {
        Ok(s) => s,
        Err(e) => return (0, vec![e.to_string()]),
    };
    let mut prev_zeros = m.zero_count();
    let mut taken = Rational::zero();
    for (n, step) in steps.iter().enumerate() {
        let lambda = &step.term.lambda;
        if !lambda.is_positive() || *lambda > Rational::one() {
            problems.push(format!("step {}: weight {lambda} outside (0, 1]", n + 1));
        }
        taken += lambda;
        let rem = &step.remainder;
        if !rem.is_nonnegative() {
            problems.push(format!("step {}: negative remainder entry", n + 1));
        }
        let zeros = rem.zero_count();
        if zeros <= prev_zeros {
            problems.push(format!("step {}: zero count did not increase", n + 1));
        }
        prev_zeros = zeros;
        let expected = Rational::one() - &taken;
        if (0..d).any(|j| rem.column_sum(j) != expected) {
            problems.push(format!("step {}: column sums are not 1 - Σλ", n + 1));
        }
    }
    if steps.len() > d * d {
        problems.push(format!("{} terms exceeds d² = {}", steps.len(), d * d));
    }
    let dec = Decomposition {
        dim: d,
        terms: steps.into_iter().map(|s| s.term).collect(),
    };
    if !dec.weight_sum().is_one() {
        problems.push(format!("weights sum to {}", dec.weight_sum()));
    }
    match recompose(&dec) {
        Ok(r) if &r == m => {}
        Ok(_) => problems.push("recomposition differs from input".into()),
        Err(e) => problems.push(format!("recomposition failed: {e}")),
    }
    (dec.terms.len(), problems)
}

impl Sweep for DecomposeSweep {
    fn name(&self) -> &'static str {
        "decompose"
    }

    fn asserting(&self, _d: usize) -> bool {
        true
    }

    fn min_dim(&self) -> usize {
        1
    }

    fn run(&self, cfg: &SweepConfig) -> SweepReport {
        let started = Instant::now();
        let d = cfg.d;
        let results: Vec<(usize, Vec<String>)> = cfg.install(|| {
            (0..cfg.cases as u64)
                .into_par_iter()
                .map(|i| {
                    // One independent stream per case keeps results worker-count independent.
                    let mut rng = cfg.rng(i);
                    let m = random_left_stochastic_with(&mut rng, d, cfg.max_denominator);
                    check_decomposition(&m)
                })
                .collect()
        });
        let mut failures = Vec::new();
        let mut terms_hist = BTreeMap::new();
        let mut max_terms = 0;
        for (i, (terms, problems)) in results.iter().enumerate() {
            max_terms = max_terms.max(*terms);
            tally(&mut terms_hist, terms.to_string());
            if !problems.is_empty() {
                failures.push(json!({"case": i, "problems": problems}));
            }
        }
        let mut findings = Map::new();
        findings.insert("seed".into(), json!(cfg.seed));
        findings.insert("max_denominator".into(), json!(cfg.max_denominator));
        findings.insert("max_terms".into(), json!(max_terms));
        findings.insert("term_bound".into(), json!(d * d));
        findings.insert("terms_histogram".into(), json!(terms_hist));
        SweepReport::build(
            self.name(),
            cfg,
            results.len() as u64,
            failures,
            findings,
            started,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{cplm_parts, is_cplm};
    use crate::perm::Permutation;

    #[test]
    fn small_sweeps_pass() {
        for d in 2..=3 {
            let cfg = SweepConfig::new(d);
            for r in [
                MultiplicationSweep::default().run(&cfg),
                PeriodSweep.run(&cfg),
                EigenSweep.run(&cfg),
                PrerowSweep.run(&cfg),
            ] {
                assert!(r.pass, "{}", r.to_json());
            }
        }
    }

    #[test]
    fn dimension_two_prerow_is_only_rows() {
        let r = PrerowSweep.run(&SweepConfig::new(2));
        assert_eq!(r.findings["row_plms"], json!([[1, 1], [2, 2]]));
        assert_eq!(r.findings["prerow_count"], json!(0));
    }

    #[test]
    fn worked_prerow_example_has_the_form() {
        let r = PrerowSweep.run(&SweepConfig::new(3));
        let entry = r.findings["prerow"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["a"] == json!([2, 3, 3]))
            .expect("listed");
        assert_eq!(entry["literal_form"], json!(true));
    }

    fn brute_force_forms(a: &Plm) -> (bool, bool) {
        let d = a.dim();
        let perms: Vec<Permutation> = super::super::enumerate(d)
            .filter(Plm::is_permutation)
            .map(|p| Permutation::from_images(p.colmap().to_vec()).unwrap())
            .collect();
        let rows = perms
            .iter()
            .any(|s| has_prerow_form(&a.row_act(s).unwrap()));
        let relabel = perms.iter().any(|s| {
            let conj = a.row_act(s).unwrap().col_act(s).unwrap();
            has_prerow_form(&conj)
        });
        (rows, relabel)
    }

    #[test]
    fn form_readings_match_brute_force() {
        for d in 2..=4 {
            for a in super::super::enumerate(d) {
                let literal =
                    is_cplm(&a) && a.row_of(0) != 0 && cplm_parts(&a).is_ok_and(|p| p.plc.is_row());
                assert_eq!(has_prerow_form(&a), literal, "{a:?}");
                assert_eq!(
                    brute_force_forms(&a),
                    (
                        has_prerow_form_up_to_rows(&a),
                        has_prerow_form_up_to_relabeling(&a)
                    ),
                    "{a:?}"
                );
            }
        }
    }

    #[test]
    fn dimension_three_prerow_needs_relabeling() {
        let r = PrerowSweep.run(&SweepConfig::new(3));
        assert!(r.pass);
        assert_eq!(r.findings["up_to_relabeling_exceptions"], json!([]));
        let literal = r.findings["literal_form_exceptions"].as_array().unwrap();
        assert!(literal.contains(&json!([1, 1, 2])));
    }

    #[test]
    fn dimension_four_has_a_relabeling_exception() {
        let r = PrerowSweep.run(&SweepConfig::new(4));
        assert!(r.pass);
        let ex = r.findings["up_to_relabeling_exceptions"]
            .as_array()
            .unwrap();
        assert!(ex.contains(&json!([2, 3, 4, 4])));
    }

    #[test]
    fn decompose_dimension_one() {
        let mut cfg = SweepConfig::new(1);
        cfg.cases = 5;
        let r = DecomposeSweep.run(&cfg);
        assert!(r.pass);
        assert_eq!(r.findings["max_terms"], json!(1));
    }
}
