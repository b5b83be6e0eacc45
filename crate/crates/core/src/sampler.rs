//! Seeded uniform matrices, the row/column reduction that turns an `m x n`
//! uniform matrix into an `(m-k) x (n-k)` one, and Monte Carlo estimates.
//!
//! Generator contract: trial `i` under seed `s` draws from ChaCha20 (the
//! `rand_chacha` implementation) keyed with the 32-byte key whose first eight
//! bytes are `s` in little-endian order and whose remaining bytes are zero,
//! with the stream (nonce) set to `i`. Entries are filled in row-major order;
//! each takes 64-bit words from `next_u64`, rejecting words at or above the
//! largest multiple of `q` not exceeding `2^64`, and uses `word % q`.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::ser::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::Field;
use crate::matrix::{change_of_basis, FqMatrix, MatrixError};
use crate::matroid::Matroid;
use crate::minor::{find_minor_in_matrix, verify_witness_matrix, MinorError, MinorOutcome, SearchLimits};

/// Two-sided 95% normal quantile used for Wilson intervals.
pub const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Minor(#[from] MinorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeedSpec { seed, stream }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(self.stream);
        rng
    }
}

/// Uniform element code in `0..q` by rejection from 64-bit words.
pub fn uniform_code(rng: &mut impl RngCore, q: u32) -> u8 {
    let q = q as u128;
    let limit = ((1u128 << 64) / q) * q;
    loop {
        let w = rng.next_u64() as u128;
        if w < limit {
            return (w % q) as u8;
        }
    }
}

pub fn sample_matrix(field: &Field, m: usize, n: usize, s: SeedSpec) -> FqMatrix {
    let mut rng = s.rng();
    let data = (0..m * n).map(|_| uniform_code(&mut rng, field.q())).collect();
    FqMatrix::new(field, m, n, data).expect("codes are in range")
}

/// Brings `k` columns of `a` to unit vectors by an invertible row operation
/// and contracts them, leaving an `(m-k) x (n-k)` matrix.
///
/// When `m > n` the first `k` columns must be independent. Otherwise the
/// first `k` rows must be independent, and the leftmost pivot columns of those
/// rows are the ones contracted. Returns `None` when the test fails.
pub fn reduce(a: &FqMatrix, k: usize) -> Result<Option<FqMatrix>, SamplerError> {
    let (m, n) = (a.rows(), a.cols());
    if k > m.min(n) {
        return Err(SamplerError::BadArguments(format!("k = {k} exceeds min({m}, {n})")));
    }
    if k == 0 {
        return Ok(Some(a.clone()));
    }
    let f = a.field();
    let (p, cols) = if m > n {
        let first: Vec<usize> = (0..k).collect();
        let lead = a.select_columns(&first)?;
        if lead.rank() < k {
            return Ok(None);
        }
        (complete_basis(&lead).inverse()?, first)
    } else {
        let top = a.select_rows(&(0..k).collect::<Vec<_>>());
        let (_, pivots) = top.rref();
        if pivots.len() < k {
            return Ok(None);
        }
        let w_inv = top.select_columns(&pivots)?.inverse()?;
        let y = a.select_rows(&(k..m).collect::<Vec<_>>()).select_columns(&pivots)?;
        let y_w_inv = y.mul(&w_inv)?;
        // P = [[W^-1, 0], [-Y W^-1, I]]
        let mut p = FqMatrix::identity(f, m);
        for i in 0..k {
            for j in 0..k {
                p.set(i, j, w_inv.get(i, j));
            }
        }
        for i in k..m {
            for j in 0..k {
                p.set(i, j, f.neg(y_w_inv.get(i - k, j)));
            }
        }
        (p, pivots)
    };
    let pa = change_of_basis(&p, a)?;
    Ok(Some(pa.contract_unit_columns(&cols)?))
}

/// Extends independent columns to a square invertible matrix with standard
/// basis vectors, taken greedily in index order.
fn complete_basis(cols: &FqMatrix) -> FqMatrix {
    let m = cols.rows();
    let mut span = crate::matrix::Span::new(cols.field(), m);
    let mut chosen: Vec<Vec<u8>> = Vec::with_capacity(m);
    for j in 0..cols.cols() {
        let c = cols.column(j);
        span.insert(&c);
        chosen.push(c);
    }
    for i in 0..m {
        if chosen.len() == m {
            break;
        }
        let mut e = vec![0u8; m];
        e[i] = 1;
        if span.insert(&e) {
            chosen.push(e);
        }
    }
    let rows: Vec<Vec<u8>> = (0..m).map(|i| chosen.iter().map(|c| c[i]).collect()).collect();
    FqMatrix::from_rows(cols.field(), &rows).expect("square")
}

/// Matrix predicates that can be estimated or counted exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    FullColumnRank,
    /// The column matroid is free; the same event as full column rank.
    IsFreeMatroid,
    RankAtLeast(usize),
    RankExactly(usize),
}

impl Event {
    pub fn holds(&self, a: &FqMatrix) -> bool {
        match *self {
            Event::FullColumnRank | Event::IsFreeMatroid => a.rank() == a.cols(),
            Event::RankAtLeast(r) => a.rank() >= r,
            Event::RankExactly(r) => a.rank() == r,
        }
    }
}

impl FromStr for Event {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || SamplerError::UnknownEvent(s.to_string());
        match s {
            "full-column-rank" => Ok(Event::FullColumnRank),
            "is-free-matroid" => Ok(Event::IsFreeMatroid),
            _ => {
                let (name, arg) = s.split_once(':').ok_or_else(unknown)?;
                let r: usize = arg.trim().parse().map_err(|_| unknown())?;
                match name {
                    "rank-at-least" => Ok(Event::RankAtLeast(r)),
                    "rank-exactly" => Ok(Event::RankExactly(r)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::FullColumnRank => write!(f, "full-column-rank"),
            Event::IsFreeMatroid => write!(f, "is-free-matroid"),
            Event::RankAtLeast(r) => write!(f, "rank-at-least:{r}"),
            Event::RankExactly(r) => write!(f, "rank-exactly:{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    /// Trials where the search ran out of budget.
    pub unknowns: u64,
    pub point: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn new(trials: u64, successes: u64, unknowns: u64, seed: u64) -> Self {
        assert!(trials > 0 && successes + unknowns <= trials);
        let point = successes as f64 / trials as f64;
        let (lo, hi) = wilson_interval(successes, trials);
        Estimate { trials, successes, unknowns, point, wilson_lo: lo.min(point), wilson_hi: hi.max(point), seed }
    }

    /// Normal-equivalent standard deviation implied by the interval width.
    pub fn sigma(&self) -> f64 {
        (self.wilson_hi - self.wilson_lo) / (2.0 * Z95)
    }

    /// Point estimate if every unknown were a success.
    pub fn upper_bracket(&self) -> f64 {
        (self.successes + self.unknowns) as f64 / self.trials as f64
    }
}

pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

impl Serialize for Estimate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Wire {
            trials: u64,
            successes: u64,
            unknowns: u64,
            point: f64,
            ci: [f64; 2],
            seed: u64,
            method: &'static str,
        }
        Wire {
            trials: self.trials,
            successes: self.successes,
            unknowns: self.unknowns,
            point: self.point,
            ci: [self.wilson_lo, self.wilson_hi],
            seed: self.seed,
            method: "wilson95",
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trial {
    Hit,
    Miss,
    Unknown,
}

fn tally(trials: u64, seed: u64, outcomes: &[Trial]) -> Estimate {
    let hits = outcomes.iter().filter(|&&t| t == Trial::Hit).count() as u64;
    let unknowns = outcomes.iter().filter(|&&t| t == Trial::Unknown).count() as u64;
    Estimate::new(trials, hits, unknowns, seed)
}

fn check_trials(trials: u64) -> Result<(), SamplerError> {
    if trials == 0 {
        return Err(SamplerError::BadArguments("trials must be at least 1".into()));
    }
    Ok(())
}

/// Fraction of sampled `m x n` matrices whose column matroid has `target` as
/// a minor. A trial counts only when the witness verifies; searches that run
/// out of budget are counted as unknowns.
pub fn mc_minor_prob(
    field: &Field,
    m: usize,
    n: usize,
    target: &Matroid,
    trials: u64,
    seed: u64,
    limits: SearchLimits,
) -> Result<Estimate, SamplerError> {
    check_trials(trials)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let a = sample_matrix(field, m, n, SeedSpec::new(seed, i));
            Ok(match find_minor_in_matrix(&a, target, limits)? {
                MinorOutcome::Found(w) if verify_witness_matrix(&a, target, &w) => Trial::Hit,
                MinorOutcome::Found(_) | MinorOutcome::Unknown => Trial::Unknown,
                MinorOutcome::Absent => Trial::Miss,
            })
        })
        .collect::<Result<Vec<_>, SamplerError>>()?;
    Ok(tally(trials, seed, &outcomes))
}

pub fn mc_event_prob(field: &Field, m: usize, n: usize, event: Event, trials: u64, seed: u64) -> Result<Estimate, SamplerError> {
    check_trials(trials)?;
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let a = sample_matrix(field, m, n, SeedSpec::new(seed, i));
            if event.holds(&a) {
                Trial::Hit
            } else {
                Trial::Miss
            }
        })
        .collect();
    Ok(tally(trials, seed, &outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn mat(q: u32, rows: &[&[u8]]) -> FqMatrix {
        FqMatrix::from_rows(&gf(q), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = gf(7);
        let s = SeedSpec::new(42, 3);
        assert_eq!(sample_matrix(&f, 4, 5, s), sample_matrix(&f, 4, 5, s));
        assert_ne!(sample_matrix(&f, 4, 5, s), sample_matrix(&f, 4, 5, SeedSpec::new(42, 4)));
        assert_ne!(sample_matrix(&f, 4, 5, s), sample_matrix(&f, 4, 5, SeedSpec::new(43, 3)));
    }

    #[test]
    fn single_bit_is_fair() {
        let f = gf(2);
        let ones: u32 = (0..10_000).map(|i| sample_matrix(&f, 1, 1, SeedSpec::new(7, i)).get(0, 0) as u32).sum();
        let p = ones as f64 / 10_000.0;
        assert!((p - 0.5).abs() < 0.02, "{p}");
    }

    #[test]
    fn two_by_two_outcomes_pass_chi_square() {
        let f = gf(2);
        let mut counts = [0u32; 16];
        for i in 0..16_000 {
            let a = sample_matrix(&f, 2, 2, SeedSpec::new(11, i));
            let idx = a.entries().iter().fold(0usize, |acc, &x| acc * 2 + x as usize);
            counts[idx] += 1;
        }
        let stat: f64 = counts.iter().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
        let pvalue = 1.0 - ChiSquared::new(15.0).unwrap().cdf(stat);
        assert!(pvalue > 0.001, "chi2 = {stat}, p = {pvalue}");
    }

    #[test]
    fn odd_field_codes_are_uniform() {
        let f = gf(3);
        let mut counts = [0u32; 3];
        for i in 0..3000 {
            for &x in sample_matrix(&f, 2, 2, SeedSpec::new(5, i)).entries() {
                counts[x as usize] += 1;
            }
        }
        let stat: f64 = counts.iter().map(|&c| (c as f64 - 4000.0).powi(2) / 4000.0).sum();
        assert!(1.0 - ChiSquared::new(2.0).unwrap().cdf(stat) > 0.001);
    }

    #[test]
    fn reduce_examples() {
        let a = mat(3, &[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(reduce(&a, 0).unwrap(), Some(a.clone()));
        let i3 = FqMatrix::identity(&gf(2), 3);
        assert_eq!(reduce(&i3, 1).unwrap(), Some(FqMatrix::identity(&gf(2), 2)));
        let b = mat(2, &[&[1, 0], &[1, 1]]);
        assert_eq!(reduce(&b, 1).unwrap(), Some(mat(2, &[&[1]])));
        assert!(reduce(&b, 3).is_err());
        assert_eq!(reduce(&mat(2, &[&[0, 1], &[1, 1]]), 1).unwrap(), Some(mat(2, &[&[1]])));
        assert_eq!(reduce(&mat(2, &[&[0, 0], &[1, 1]]), 1).unwrap(), None);
        assert_eq!(reduce(&mat(2, &[&[0], &[0], &[0]]), 1).unwrap(), None);
        assert_eq!(reduce(&mat(2, &[&[0, 1], &[1, 0], &[1, 1]]), 1).unwrap(), Some(mat(2, &[&[1], &[1]])));
    }

    #[test]
    fn reduce_is_a_contraction() {
        let f = gf(3);
        for i in 0..50 {
            for (m, n) in [(3, 5), (5, 3), (4, 4)] {
                let a = sample_matrix(&f, m, n, SeedSpec::new(1, i));
                for k in 1..=2 {
                    let Some(b) = reduce(&a, k).unwrap() else { continue };
                    assert_eq!((b.rows(), b.cols()), (m - k, n - k));
                    assert_eq!(b.rank(), a.rank() - k);
                }
            }
        }
    }

    #[test]
    fn reduce_success_rate_beats_bound() {
        let f = gf(2);
        for (m, n, k) in [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 2), (2, 4, 2)] {
            let total = 1u64 << (m * n);
            let ok = (0..total)
                .filter(|&code| {
                    let data = (0..m * n).map(|j| ((code >> (m * n - 1 - j)) & 1) as u8).collect();
                    reduce(&FqMatrix::new(&f, m, n, data).unwrap(), k).unwrap().is_some()
                })
                .count() as f64;
            let bound = 1.0 - 2f64.powi(k as i32 - m.max(n) as i32);
            assert!(ok / total as f64 > bound, "{m}x{n} k={k}");
        }
    }

    #[test]
    fn events_parse() {
        assert_eq!("full-column-rank".parse::<Event>().unwrap(), Event::FullColumnRank);
        assert_eq!("rank-at-least:3".parse::<Event>().unwrap(), Event::RankAtLeast(3));
        assert_eq!("rank-exactly:0".parse::<Event>().unwrap(), Event::RankExactly(0));
        assert!(matches!("is-nonsingular".parse::<Event>(), Err(SamplerError::UnknownEvent(_))));
        assert!("rank-at-least:x".parse::<Event>().is_err());
        for e in [Event::IsFreeMatroid, Event::RankAtLeast(2)] {
            assert_eq!(e.to_string().parse::<Event>().unwrap(), e);
        }
    }

    #[test]
    fn wilson_contains_point() {
        for (s, n) in [(0, 10), (10, 10), (3, 7), (500, 1000)] {
            let e = Estimate::new(n, s, 0, 0);
            assert!(0.0 <= e.wilson_lo && e.wilson_lo <= e.point && e.point <= e.wilson_hi && e.wilson_hi <= 1.0);
        }
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    fn within(e: &Estimate, p: f64, sigmas: f64) -> bool {
        (e.point - p).abs() <= sigmas * e.sigma().max(1e-12)
    }

    #[test]
    fn event_estimates() {
        let f = gf(2);
        let e = mc_event_prob(&f, 3, 2, Event::FullColumnRank, 20_000, 9).unwrap();
        assert!(within(&e, 21.0 / 32.0, 3.0), "{e:?}");
        let e = mc_event_prob(&f, 20, 2, Event::IsFreeMatroid, 2_000, 9).unwrap();
        assert!(e.point > 1.0 - 2f64.powi(-18) - 3.0 * e.sigma());
        let e = mc_event_prob(&f, 3, 3, Event::RankAtLeast(0), 100, 9).unwrap();
        assert_eq!(e.successes, 100);
        assert!(mc_event_prob(&f, 3, 3, Event::RankAtLeast(0), 0, 9).is_err());
    }

    #[test]
    fn minor_estimates() {
        let f = gf(2);
        let free1 = Matroid::free(1).unwrap();
        let e = mc_minor_prob(&f, 2, 2, &free1, 20_000, 1, SearchLimits::default()).unwrap();
        assert!(within(&e, 15.0 / 16.0, 3.0), "{e:?}");
        let free2 = Matroid::free(2).unwrap();
        let e = mc_minor_prob(&f, 2, 2, &free2, 20_000, 1, SearchLimits::default()).unwrap();
        assert!(within(&e, 3.0 / 8.0, 3.0), "{e:?}");
        let u12 = Matroid::uniform(1, 2).unwrap();
        let e = mc_minor_prob(&f, 12, 2, &u12, 5_000, 1, SearchLimits::default()).unwrap();
        assert!(e.point <= 1.0 - (1023.0 / 1024.0) * (2047.0 / 2048.0) + 3.0 * e.sigma().max(1e-3));
        assert!(mc_minor_prob(&f, 2, 2, &u12, 0, 1, SearchLimits::default()).is_err());
    }

    #[test]
    fn estimate_independent_of_thread_count() {
        let f = gf(3);
        let u24 = Matroid::uniform(2, 4).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_minor_prob(&f, 3, 6, &u24, 300, 77, SearchLimits::default()).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn estimate_json_shape() {
        let v = serde_json::to_value(Estimate::new(4, 1, 1, 9)).unwrap();
        assert_eq!(v["method"], "wilson95");
        assert_eq!(v["ci"].as_array().unwrap().len(), 2);
        assert_eq!(v["seed"], 9);
    }
}
