//! The formula-versus-oracle check suite. Each check is a named invariant
//! evaluated at capped sizes; the report text depends only on the inputs.
//!
//! Formulas are reached through a [`FormulaSet`] so a deliberately broken
//! implementation can be swapped in to confirm the checks catch it.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::formulas::{self, BoundReport, ExactProb, FormulaError};
use crate::gf::Field;
use crate::matroid::{Matroid, MatroidStats};
use crate::minor::{find_minor, verify_witness, MinorOutcome, SearchLimits};
use crate::oracle::{self, Procedure};
use crate::sampler::{sample_matrix, Event, SeedSpec};
use crate::sweep::{MRule, NRange, SweepSpec, SweepTarget};

type Prob2 = fn(usize, usize, u32) -> Result<ExactProb, FormulaError>;

/// The formula implementations under test.
#[derive(Clone, Copy)]
pub struct FormulaSet {
    pub count_rank_matrices: fn(usize, usize, u32, usize) -> Result<BigUint, FormulaError>,
    pub prob_free_minor: fn(usize, usize, u32, usize) -> Result<BoundReport, FormulaError>,
    pub prob_full_col_rank: Prob2,
    pub li_lower_bound: Prob2,
    pub upper_bound_nonfree: Prob2,
    pub lower_bound_nonfree: fn(usize, usize, u32, &MatroidStats) -> Result<BoundReport, FormulaError>,
    pub p_smq: fn(usize, u32, &MatroidStats) -> Result<ExactProb, FormulaError>,
    pub rep_count_lower_bound: fn(usize, u32, &MatroidStats) -> Result<BigUint, FormulaError>,
}

impl Default for FormulaSet {
    fn default() -> Self {
        FormulaSet {
            count_rank_matrices: formulas::count_rank_matrices,
            prob_free_minor: formulas::prob_free_minor,
            prob_full_col_rank: formulas::prob_full_col_rank,
            li_lower_bound: formulas::li_lower_bound,
            upper_bound_nonfree: formulas::upper_bound_nonfree,
            lower_bound_nonfree: formulas::lower_bound_nonfree,
            p_smq: formulas::p_smq,
            rep_count_lower_bound: formulas::rep_count_lower_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, failures: Vec<String>, cases: usize, note: String) -> Self {
        let passed = failures.is_empty();
        let mut detail = format!("{cases} cases");
        if !note.is_empty() {
            detail.push_str(", ");
            detail.push_str(&note);
        }
        if !passed {
            let shown: Vec<_> = failures.iter().take(3).cloned().collect();
            detail.push_str(&format!(", {} failures: {}", failures.len(), shown.join("; ")));
        }
        CheckResult { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{ok}/{} checks passed", self.checks.len());
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateConfig {
    /// Largest number of matrices any oracle enumeration may visit.
    pub cap: u64,
    pub seed: u64,
    pub trials: u64,
    /// Random instances for the minor search cross-check.
    pub minor_instances: u64,
    pub limits: SearchLimits,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { cap: 1 << 12, seed: 1, trials: 2000, minor_instances: 40, limits: SearchLimits::default() }
    }
}

pub fn run_validation(fs: &FormulaSet, cfg: &ValidateConfig) -> ValidationReport {
    let checks = vec![
        check_rank_counts(fs),
        check_free_minor_is_full_rank(fs),
        check_li_bound_strict(fs),
        check_psmq_rep_count(fs),
        check_oracle_equality(fs, &[2, 3], 4, cfg.cap),
        check_sandwich(fs, &sandwich_targets(), 2, 3, 5, cfg.cap),
        check_rep_counts(fs, &[2, 3], 3, cfg.cap),
        check_distributions(cfg.cap),
        check_trend(fs),
        check_cq(),
        check_minor_search(cfg.seed, cfg.minor_instances, cfg.limits),
        check_monte_carlo(cfg.seed, cfg.trials, cfg.limits),
    ];
    ValidationReport { checks }
}

fn err<E: std::fmt::Display>(case: String, e: E) -> String {
    format!("{case}: {e}")
}

/// Rank counts partition all matrices and are symmetric under transpose.
pub fn check_rank_counts(fs: &FormulaSet) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in [2, 3, 4, 5] {
        for m in 0..=4 {
            for n in 0..=4 {
                cases += 1;
                let case = format!("q={q} {m}x{n}");
                let mut total = BigUint::from(0u32);
                for k in 0..=m.min(n) {
                    match ((fs.count_rank_matrices)(m, n, q, k), (fs.count_rank_matrices)(n, m, q, k)) {
                        (Ok(a), Ok(b)) => {
                            if a != b {
                                failures.push(format!("{case} k={k}: transpose {a} != {b}"));
                            }
                            total += a;
                        }
                        (Err(e), _) | (_, Err(e)) => failures.push(err(case.clone(), e)),
                    }
                }
                if total != num_traits::pow(BigUint::from(q), m * n) {
                    failures.push(format!("{case}: counts sum to {total}"));
                }
            }
        }
    }
    CheckResult::new("rank-counts-partition", failures, cases, String::new())
}

pub fn check_free_minor_is_full_rank(fs: &FormulaSet) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in [2, 3, 4] {
        for m in 0..=6 {
            for n in 0..=m {
                cases += 1;
                match ((fs.prob_free_minor)(m, n, q, n), (fs.prob_full_col_rank)(m, n, q)) {
                    (Ok(a), Ok(b)) if a.value == b => {}
                    (Ok(a), Ok(b)) => failures.push(format!("q={q} {m}x{n}: {} != {b}", a.value)),
                    (Err(e), _) | (_, Err(e)) => failures.push(err(format!("q={q} {m}x{n}"), e)),
                }
            }
        }
    }
    CheckResult::new("free-minor-equals-full-column-rank", failures, cases, String::new())
}

pub fn check_li_bound_strict(fs: &FormulaSet) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in [2, 3, 4] {
        for m in 1..=8 {
            for n in 1..=m {
                cases += 1;
                match ((fs.li_lower_bound)(m, n, q), (fs.prob_full_col_rank)(m, n, q)) {
                    (Ok(a), Ok(b)) if a < b => {}
                    (Ok(a), Ok(b)) => failures.push(format!("q={q} {m}x{n}: {a} >= {b}")),
                    (Err(e), _) | (_, Err(e)) => failures.push(err(format!("q={q} {m}x{n}"), e)),
                }
            }
        }
    }
    CheckResult::new("li-bound-strictly-below-full-column-rank", failures, cases, String::new())
}

fn small_stats() -> Vec<MatroidStats> {
    let mut out = Vec::new();
    for e in 1..=6 {
        for r in 0..=e {
            for l in 0..=(e - r) {
                let st = MatroidStats { e, r, l };
                if st.is_consistent() {
                    out.push(st);
                }
            }
        }
    }
    out
}

pub fn check_psmq_rep_count(fs: &FormulaSet) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for q in [2, 3, 5] {
        for st in small_stats() {
            for m in st.r..=st.r + 2 {
                cases += 1;
                let case = format!("q={q} m={m} {st:?}");
                match ((fs.p_smq)(m, q, &st), (fs.rep_count_lower_bound)(m, q, &st)) {
                    (Ok(p), Ok(c)) => {
                        let total = num_traits::pow(BigUint::from(q), m * st.e);
                        if ExactProb::from_counts(&c, &total).as_ref() != Ok(&p) {
                            failures.push(format!("{case}: {p} vs {c}/{total}"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => failures.push(err(case, e)),
                }
            }
        }
    }
    CheckResult::new("p-smq-matches-rep-count", failures, cases, String::new())
}

fn fits(q: u32, m: usize, n: usize, cap: u64) -> bool {
    oracle::matrix_count(q, m, n, cap).is_ok()
}

/// Exact formulas equal exhaustive counts for every size within `cap`.
pub fn check_oracle_equality(fs: &FormulaSet, qs: &[u32], max_dim: usize, cap: u64) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for &q in qs {
        let field = Field::new(q).expect("supported field");
        for m in 1..=max_dim {
            for n in 1..=max_dim {
                if !fits(q, m, n, cap) {
                    continue;
                }
                let case = format!("q={q} {m}x{n}");
                if m >= n {
                    cases += 1;
                    match (oracle::exact_event_prob(&field, m, n, Event::FullColumnRank, cap), (fs.prob_full_col_rank)(m, n, q)) {
                        (Ok(o), Ok(p)) if o.exact == p => {}
                        (Ok(o), Ok(p)) => failures.push(format!("{case} full column rank: oracle {} formula {p}", o.exact)),
                        (Err(e), _) => failures.push(err(case.clone(), e)),
                        (_, Err(e)) => failures.push(err(case.clone(), e)),
                    }
                }
                for k in 0..=m.min(n) {
                    cases += 1;
                    match (oracle::exact_event_prob(&field, m, n, Event::RankExactly(k), cap), (fs.count_rank_matrices)(m, n, q, k)) {
                        (Ok(o), Ok(c)) if o.hits == c => {}
                        (Ok(o), Ok(c)) => failures.push(format!("{case} rank {k}: oracle {} formula {c}", o.hits)),
                        (Err(e), _) => failures.push(err(case.clone(), e)),
                        (_, Err(e)) => failures.push(err(case.clone(), e)),
                    }
                }
                for r in 1..=m.min(n) + 1 {
                    cases += 1;
                    let target = Matroid::free(r).expect("small");
                    match (oracle::exact_minor_prob(&field, m, n, &target, cap), (fs.prob_free_minor)(m, n, q, r)) {
                        (Ok(o), Ok(p)) if o.exact == p.value => {}
                        (Ok(o), Ok(p)) => failures.push(format!("{case} free:{r}: oracle {} formula {}", o.exact, p.value)),
                        (Err(e), _) => failures.push(err(case.clone(), e)),
                        (_, Err(e)) => failures.push(err(case.clone(), e)),
                    }
                }
            }
        }
    }
    CheckResult::new("formulas-equal-oracle", failures, cases, format!("cap {cap}"))
}

/// The non-free targets used for the bound sandwich.
pub fn sandwich_targets() -> Vec<(String, Matroid)> {
    let u23_loop = Matroid::uniform(2, 3).and_then(|m| m.with_loops(1)).expect("small");
    vec![
        ("U:1,2".into(), Matroid::uniform(1, 2).expect("small")),
        ("U:1,3".into(), Matroid::uniform(1, 3).expect("small")),
        ("U:2,3+loop".into(), u23_loop),
        ("loops:2".into(), Matroid::uniform(0, 2).expect("small")),
    ]
}

/// Lower bound strictly below the exact probability (non-strict when the
/// bound falls back to the block form) and, for `m >= n`, the exact
/// probability at most the upper bound.
pub fn check_sandwich(fs: &FormulaSet, targets: &[(String, Matroid)], q: u32, max_m: usize, max_n: usize, cap: u64) -> CheckResult {
    let field = Field::new(q).expect("supported field");
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, target) in targets {
        let st = target.stats();
        for m in st.r.max(1)..=max_m {
            for n in st.e..=max_n {
                if !fits(q, m, n, cap) {
                    continue;
                }
                cases += 1;
                let case = format!("{name} q={q} {m}x{n}");
                let exact = match oracle::exact_minor_prob(&field, m, n, target, cap) {
                    Ok(o) => o.exact,
                    Err(e) => {
                        failures.push(err(case, e));
                        continue;
                    }
                };
                match (fs.lower_bound_nonfree)(m, n, q, &st) {
                    Ok(lb) => {
                        let fallback = lb.best_k.is_none();
                        let ok = if fallback { lb.value <= exact } else { lb.value < exact };
                        if !ok {
                            failures.push(format!("{case}: lower {} vs exact {exact}", lb.value));
                        }
                    }
                    Err(e) => failures.push(err(case.clone(), e)),
                }
                if m >= n {
                    match (fs.upper_bound_nonfree)(m, n, q) {
                        Ok(ub) if exact <= ub => {}
                        Ok(ub) => failures.push(format!("{case}: exact {exact} above upper {ub}")),
                        Err(e) => failures.push(err(case, e)),
                    }
                }
            }
        }
    }
    CheckResult::new("bound-sandwich", failures, cases, format!("q={q}, m<={max_m}, n<={max_n}"))
}

/// Every matroid on at most four elements: uniform matroids with added loops.
pub fn small_matroids() -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for k in 0..=n {
            for loops in 0..=(4 - n) {
                let m = Matroid::uniform(k, n).and_then(|u| u.with_loops(loops)).expect("small");
                let name = if loops == 0 { format!("U:{k},{n}") } else { format!("U:{k},{n}+{loops}loops") };
                out.push((name, m));
            }
        }
    }
    out
}

/// Exact representation counts dominate the lower bound for representable
/// matroids. The bound places the loop columns in every possible way, so the
/// labelled count is compared only when there is a single placement (no
/// loops, or only loops); the count up to isomorphism is compared always.
pub fn check_rep_counts(fs: &FormulaSet, qs: &[u32], max_m: usize, cap: u64) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut tight = 0;
    let mut skipped = 0;
    for &q in qs {
        let field = Field::new(q).expect("supported field");
        for (name, target) in small_matroids() {
            let st = target.stats();
            let representable = fits(q, st.r, st.e, cap)
                && oracle::count_representations_exact(&target, st.r, &field, cap).is_ok_and(|c| c > BigUint::from(0u32));
            if !representable {
                skipped += 1;
                continue;
            }
            let single_placement = st.l == 0 || st.l == st.e;
            for m in st.r..=max_m {
                if !fits(q, m, st.e, cap) {
                    continue;
                }
                cases += 1;
                let case = format!("{name} q={q} m={m}");
                let bound = match (fs.rep_count_lower_bound)(m, q, &st) {
                    Ok(b) => b,
                    Err(e) => {
                        failures.push(err(case, e));
                        continue;
                    }
                };
                let counted = if single_placement {
                    oracle::count_representations_exact(&target, m, &field, cap)
                } else {
                    oracle::count_representations_isomorphic(&target, m, &field, cap)
                };
                match counted {
                    Ok(exact) if exact < bound => failures.push(format!("{case}: exact {exact} below bound {bound}")),
                    Ok(exact) => tight += usize::from(exact == bound),
                    Err(e) => failures.push(err(case, e)),
                }
            }
        }
    }
    let note = format!("{skipped} non-representable skipped, {tight} tight");
    CheckResult::new("rep-count-lower-bound", failures, cases, note)
}

/// Change of basis is a bijection; reduce is exactly uniform conditional on
/// success.
pub fn check_distributions(cap: u64) -> CheckResult {
    let f2 = Field::new(2).expect("GF(2)");
    let mut failures = Vec::new();
    let runs = [
        (2, 2, Procedure::ChangeOfBasis),
        (2, 1, Procedure::ChangeOfBasis),
        (2, 2, Procedure::ReduceConditional { k: 1 }),
        (3, 2, Procedure::ReduceConditional { k: 1 }),
        (2, 3, Procedure::ReduceConditional { k: 1 }),
    ];
    for (m, n, proc) in runs {
        match oracle::distribution_check(&f2, m, n, proc, cap) {
            Ok(r) if r.passed => {}
            Ok(r) => failures.push(format!("{} {m}x{n}: counts {:?}", r.procedure, r.output_counts)),
            Err(e) => failures.push(err(format!("{proc:?} {m}x{n}"), e)),
        }
    }
    CheckResult::new("distribution-invariance", failures, runs.len(), String::new())
}

/// First `n` at which the lower bound for `U:1,2`, `q = 2`, `m = 3` exceeds
/// 0.99, with the bound non-decreasing up to there.
pub fn lower_bound_crossing(fs: &FormulaSet, max_n: usize) -> Result<Option<usize>, String> {
    let st = MatroidStats { e: 2, r: 1, l: 0 };
    let mut prev = ExactProb::zero();
    for n in 2..=max_n {
        let v = (fs.lower_bound_nonfree)(3, n, 2, &st).map_err(|e| e.to_string())?.value;
        if v < prev {
            return Err(format!("bound decreases at n={n}"));
        }
        if v.to_f64() > 0.99 {
            return Ok(Some(n));
        }
        prev = v;
    }
    Ok(None)
}

pub fn check_trend(fs: &FormulaSet) -> CheckResult {
    let (failures, note) = match lower_bound_crossing(fs, 500) {
        Ok(Some(n)) => (vec![], format!("n* = {n}")),
        Ok(None) => (vec!["never exceeds 0.99 up to n = 500".to_string()], String::new()),
        Err(e) => (vec![e], String::new()),
    };
    CheckResult::new("lower-bound-trend", failures, 1, note)
}

pub fn check_cq() -> CheckResult {
    let mut failures = Vec::new();
    let qs = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];
    for q in qs {
        match formulas::cq_constant(q, 1e-12) {
            Ok(c) if c.approx > c.lower_bound.to_f64() => {}
            Ok(c) => failures.push(format!("q={q}: {} <= {}", c.approx, c.lower_bound)),
            Err(e) => failures.push(err(format!("q={q}"), e)),
        }
    }
    CheckResult::new("cq-above-pentagonal-bound", failures, qs.len(), String::new())
}

/// A deterministic random (host, target) pair: column matroids of small
/// random matrices over GF(2) or GF(3).
pub fn random_minor_instance(seed: u64, index: u64) -> (Matroid, Matroid) {
    use rand_chacha::rand_core::RngCore;
    let mut rng = SeedSpec::new(seed, index).rng();
    let mut pick = |lo: u64, hi: u64| (lo + rng.next_u64() % (hi - lo + 1)) as usize;
    let q = if pick(0, 1) == 0 { 2 } else { 3 };
    let field = Field::new(q).expect("small field");
    let (hm, hn) = (pick(1, 4), pick(2, 7));
    let (tm, tn) = (pick(1, 3), pick(1, 5));
    let sub = SeedSpec::new(seed, index).stream.wrapping_mul(2).wrapping_add(1 << 40);
    let host = Matroid::from_matrix(&sample_matrix(&field, hm, hn, SeedSpec::new(seed, sub))).expect("small");
    let target = Matroid::from_matrix(&sample_matrix(&field, tm, tn, SeedSpec::new(seed, sub + 1))).expect("small");
    (host, target)
}

/// The minor search agrees with exhaustive contraction/deletion enumeration,
/// and every witness verifies.
pub fn check_minor_search(seed: u64, instances: u64, limits: SearchLimits) -> CheckResult {
    let mut failures = Vec::new();
    let mut found = 0;
    for i in 0..instances {
        let (host, target) = random_minor_instance(seed, i);
        let brute = oracle::brute_force_minor(&host, &target).is_some();
        let agrees = match find_minor(&host, &target, limits) {
            MinorOutcome::Found(w) => {
                found += 1;
                if !verify_witness(&host, &target, &w) {
                    failures.push(format!("instance {i}: witness does not verify"));
                }
                brute
            }
            MinorOutcome::Absent => !brute,
            MinorOutcome::Unknown => false,
        };
        if !agrees {
            failures.push(format!("instance {i}: search disagrees with enumeration (enumeration says {brute})"));
        }
    }
    CheckResult::new("minor-search-matches-enumeration", failures, instances as usize, format!("{found} minors found"))
}

/// Monte Carlo rows stay consistent with the exact bounds within their
/// Wilson intervals.
pub fn check_monte_carlo(seed: u64, trials: u64, limits: SearchLimits) -> CheckResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    let u12 = Matroid::uniform(1, 2).expect("small");
    let runs = [
        (MRule::NMinus(3), NRange::new(4, 10, 3).expect("range"), SweepTarget::Minor(u12.clone())),
        (MRule::NPlus(2), NRange::new(2, 6, 2).expect("range"), SweepTarget::Minor(u12)),
        (MRule::Constant(3), NRange::new(2, 4, 1).expect("range"), SweepTarget::Minor(Matroid::free(2).expect("small"))),
        (MRule::NPlus(1), NRange::new(2, 6, 2).expect("range"), SweepTarget::Event(Event::FullColumnRank)),
    ];
    for (rule, range, target) in runs {
        let spec = SweepSpec { field: Field::new(2).expect("GF(2)"), n_range: range, m_rule: rule, target, trials, seed, limits };
        match spec.run() {
            Ok(rows) => {
                for r in rows {
                    cases += 1;
                    if !r.consistent() {
                        failures.push(format!("{rule} n={}: {:?} outside bounds", r.n, r.estimate));
                    }
                }
            }
            Err(e) => failures.push(err(rule.to_string(), e)),
        }
    }
    CheckResult::new("monte-carlo-within-bounds", failures, cases, format!("{trials} trials per point"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let cfg = ValidateConfig { trials: 500, minor_instances: 10, ..Default::default() };
        let a = run_validation(&FormulaSet::default(), &cfg);
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_text(), run_validation(&FormulaSet::default(), &cfg).to_text());
    }

    fn broken_full_col_rank(m: usize, n: usize, q: u32) -> Result<ExactProb, FormulaError> {
        formulas::prob_full_col_rank(m + 1, n, q)
    }

    #[test]
    fn corrupted_formula_is_caught() {
        let fs = FormulaSet { prob_full_col_rank: broken_full_col_rank, ..Default::default() };
        let check = check_oracle_equality(&fs, &[2], 2, 1 << 8);
        assert!(!check.passed);
        assert!(check.detail.contains("full column rank"), "{}", check.detail);
        assert!(!check_free_minor_is_full_rank(&fs).passed);
    }

    #[test]
    fn crossing_is_reported() {
        let n = lower_bound_crossing(&FormulaSet::default(), 500).unwrap().unwrap();
        assert!(formulas::lower_bound_nonfree(3, n, 2, &MatroidStats { e: 2, r: 1, l: 0 }).unwrap().value.to_f64() > 0.99);
        assert!(formulas::lower_bound_nonfree(3, n - 1, 2, &MatroidStats { e: 2, r: 1, l: 0 }).unwrap().value.to_f64() <= 0.99);
    }
}
