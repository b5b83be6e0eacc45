//! Exact closed forms and bounds for the probability that a fixed matroid is a
//! minor of the column matroid of a uniform random matrix over GF(q).
//!
//! Everything is evaluated in arbitrary-precision rationals; floats only
//! appear in [`ExactProb::to_f64`] and in [`cq_constant`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::matroid::MatroidStats;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("tolerance must be a positive finite number")]
    BadTolerance,
    #[error("{name} = {value} lies outside [0, 1]")]
    OutOfRange { name: &'static str, value: String },
}

fn bad(msg: impl Into<String>) -> FormulaError {
    FormulaError::BadArguments(msg.into())
}

/// A probability held as a rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn new(value: BigRational) -> Result<Self, FormulaError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(FormulaError::OutOfRange { name: "probability", value: value.to_string() });
        }
        Ok(ExactProb(value))
    }

    pub fn from_counts(hits: &BigUint, total: &BigUint) -> Result<Self, FormulaError> {
        if total.is_zero() {
            return Err(bad("zero total"));
        }
        Self::new(BigRational::new(BigInt::from(hits.clone()), BigInt::from(total.clone())))
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn complement(&self) -> ExactProb {
        ExactProb(BigRational::one() - &self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// `1/q^e` style powers with possibly negative exponent.
fn qpow(q: u32, exp: i64) -> BigRational {
    let base = BigInt::from(q);
    if exp >= 0 {
        BigRational::from_integer(num_traits::pow(base, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-exp) as usize))
    }
}

fn upow(q: u32, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), exp)
}

fn check_q(q: u32) -> Result<(), FormulaError> {
    if q < 2 {
        return Err(bad(format!("q = {q} must be at least 2")));
    }
    Ok(())
}

fn check_stats(stats: &MatroidStats) -> Result<(), FormulaError> {
    if !stats.is_consistent() {
        return Err(bad(format!("inconsistent matroid stats {stats:?}")));
    }
    Ok(())
}

/// Gaussian binomial `[n k]_q = prod_{i<k} (q^{n-i} - 1) / (q^{k-i} - 1)`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> Result<BigUint, FormulaError> {
    check_q(q)?;
    if k > n {
        return Err(bad(format!("k = {k} exceeds n = {n}")));
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= upow(q, n - i) - &one;
        den *= upow(q, k - i) - &one;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Number of `m x n` matrices over GF(q) of rank exactly `k`, by the
/// alternating sum over Gaussian binomials.
pub fn count_rank_matrices(m: usize, n: usize, q: u32, k: usize) -> Result<BigUint, FormulaError> {
    check_q(q)?;
    if k > m || k > n {
        return Err(bad(format!("rank {k} exceeds a dimension of {m}x{n}")));
    }
    let (lo, hi) = (m.min(n), m.max(n));
    let mut sum = BigInt::zero();
    for i in 0..=k {
        let j = k - i;
        let term = BigInt::from(gaussian_binomial(k, i, q)?) * BigInt::from(upow(q, hi * i + j * j.saturating_sub(1) / 2));
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let total = BigInt::from(gaussian_binomial(lo, k, q)?) * sum;
    Ok(total.to_biguint().expect("rank count is nonnegative"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

/// A formula value with its kind and the sub-terms that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: ExactProb,
    pub best_k: Option<usize>,
    pub components: BTreeMap<String, Value>,
}

impl BoundReport {
    fn new(kind: BoundKind, value: ExactProb) -> Self {
        BoundReport { kind, value, best_k: None, components: BTreeMap::new() }
    }

    fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.components.insert(key.to_string(), v.into());
        self
    }
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Wire<'a> {
            kind: BoundKind,
            num: String,
            den: String,
            float: f64,
            best_k: Option<usize>,
            components: &'a BTreeMap<String, Value>,
        }
        Wire {
            kind: self.kind,
            num: self.value.numer().to_string(),
            den: self.value.denom().to_string(),
            float: self.value.to_f64(),
            best_k: self.best_k,
            components: &self.components,
        }
        .serialize(s)
    }
}

fn prob_json(p: &ExactProb) -> Value {
    serde_json::json!({ "num": p.numer().to_string(), "den": p.denom().to_string(), "float": p.to_f64() })
}

/// Probability that the free matroid of rank `r` is a minor, i.e. that the
/// matrix has rank at least `r`. Exactly zero when `r > min(m, n)`.
pub fn prob_free_minor(m: usize, n: usize, q: u32, r: usize) -> Result<BoundReport, FormulaError> {
    check_q(q)?;
    if r > m.min(n) {
        return Ok(BoundReport::new(BoundKind::Exact, ExactProb::zero()).with("rank_exceeds_dimensions", true));
    }
    let mut hits = BigUint::zero();
    for k in r..=m.min(n) {
        hits += count_rank_matrices(m, n, q, k)?;
    }
    let value = ExactProb::from_counts(&hits, &upow(q, m * n))?;
    Ok(BoundReport::new(BoundKind::Exact, value).with("rank_exceeds_dimensions", false))
}

/// `prod_{i<n} (1 - q^{i-m})`: probability of full column rank, `m >= n`.
pub fn prob_full_col_rank(m: usize, n: usize, q: u32) -> Result<ExactProb, FormulaError> {
    check_q(q)?;
    if n > m {
        return Err(bad(format!("need m >= n, got {m}x{n}")));
    }
    let mut p = BigRational::one();
    for i in 0..n {
        p *= BigRational::one() - qpow(q, i as i64 - m as i64);
    }
    ExactProb::new(p)
}

/// `max(0, 1 - q^{n-m})`, the union-bound relaxation of full column rank.
pub fn li_lower_bound(m: usize, n: usize, q: u32) -> Result<ExactProb, FormulaError> {
    check_q(q)?;
    if n > m {
        return Err(bad(format!("need m >= n, got {m}x{n}")));
    }
    let v = BigRational::one() - qpow(q, n as i64 - m as i64);
    ExactProb::new(if v.is_negative() { BigRational::zero() } else { v })
}

/// Upper bound for any non-free minor when `m >= n`: the matrix must fail
/// to have full column rank.
pub fn upper_bound_nonfree(m: usize, n: usize, q: u32) -> Result<ExactProb, FormulaError> {
    Ok(prob_full_col_rank(m, n, q)?.complement())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CqReport {
    pub q: u32,
    pub approx: f64,
    pub partial_terms: u32,
    /// Guaranteed bound on `|approx - C_q|`.
    pub error_bound: f64,
    #[serde(serialize_with = "ser_prob")]
    pub lower_bound: ExactProb,
}

fn ser_prob<S: Serializer>(p: &ExactProb, s: S) -> Result<S::Ok, S::Error> {
    prob_json(p).serialize(s)
}

/// `C_q = prod_{k>=1} (1 - q^{-k})` by partial products.
///
/// With `P_N` the product of the first `N` factors, the tail satisfies
/// `P_N (1 - q^{-N}/(q-1)) <= C_q <= P_N`, so the product stops once
/// `q^{-N}/(q-1) < tol`. Also returns the closed lower bound `1 - 1/q - 1/q^2`.
pub fn cq_constant(q: u32, tol: f64) -> Result<CqReport, FormulaError> {
    check_q(q)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(FormulaError::BadTolerance);
    }
    let mut partial = BigRational::one();
    let mut terms = 0u32;
    loop {
        terms += 1;
        partial *= BigRational::one() - qpow(q, -(terms as i64));
        let tail = qpow(q, -(terms as i64)) / BigRational::from_integer(BigInt::from(q - 1));
        if tail.to_f64().expect("finite") < tol {
            let approx = partial.to_f64().expect("finite");
            let lower_bound = ExactProb::new(BigRational::one() - qpow(q, -1) - qpow(q, -2))?;
            return Ok(CqReport { q, approx, partial_terms: terms, error_bound: tail.to_f64().unwrap() * approx, lower_bound });
        }
    }
}

/// Per-block probability lower bound
/// `C(e, l) (q-1)^{e-r-l} / q^{s(e-r)} * prod_{i<r} (1 - q^{i-s})`.
///
/// Returns an error when the value leaves `[0, 1]`; see [`p_smq_in_open_unit`]
/// for the strict check.
pub fn p_smq(s: usize, q: u32, stats: &MatroidStats) -> Result<ExactProb, FormulaError> {
    check_q(q)?;
    check_stats(stats)?;
    let MatroidStats { e, r, l } = *stats;
    if s < r {
        return Err(bad(format!("s = {s} is below the rank {r}")));
    }
    let mut v = BigRational::from_integer(binomial(BigInt::from(e), BigInt::from(l)))
        * BigRational::from_integer(num_traits::pow(BigInt::from(q - 1), e - r - l))
        * qpow(q, -((s * (e - r)) as i64));
    for i in 0..r {
        v *= BigRational::one() - qpow(q, i as i64 - s as i64);
    }
    ExactProb::new(v.clone()).map_err(|_| FormulaError::OutOfRange { name: "p_smq", value: v.to_string() })
}

pub fn p_smq_in_open_unit(p: &ExactProb) -> bool {
    !p.value().is_zero() && !p.value().is_one()
}

fn block_value(p: &ExactProb, blocks: usize) -> BigRational {
    BigRational::one() - num_traits::pow(BigRational::one() - p.value(), blocks)
}

/// `1 - (1 - p_{m,q,M})^{floor(n/|E|)}` from independent column blocks.
pub fn lower_bound_block(m: usize, n: usize, q: u32, stats: &MatroidStats) -> Result<ExactProb, FormulaError> {
    check_stats(stats)?;
    if stats.e == 0 {
        return Err(bad("empty ground set"));
    }
    if m < stats.r || n < stats.e {
        return Err(bad(format!("need m >= r = {} and n >= |E| = {}, got {m}x{n}", stats.r, stats.e)));
    }
    let p = p_smq(m, q, stats)?;
    ExactProb::new(block_value(&p, n / stats.e))
}

/// The non-asymptotic lower bound maximised over `1 <= k <= min(n-|E|, m-r)`:
/// `(1 - q^{-(n-k)}) (1 - (1 - p_{m-k,q,M})^{floor((n-k)/|E|)})`.
///
/// Ties go to the smallest `k`. When no positive `k` is admissible the block
/// bound is returned instead and `components.k_range_empty` is set.
pub fn lower_bound_nonfree(m: usize, n: usize, q: u32, stats: &MatroidStats) -> Result<BoundReport, FormulaError> {
    check_q(q)?;
    check_stats(stats)?;
    if stats.e == 0 {
        return Err(bad("empty ground set"));
    }
    if m < stats.r || n < stats.e {
        return Err(bad(format!("need m >= r = {} and n >= |E| = {}, got {m}x{n}", stats.r, stats.e)));
    }
    let kmax = (n - stats.e).min(m - stats.r);
    if kmax < 1 {
        let value = lower_bound_block(m, n, q, stats)?;
        let p = p_smq(m, q, stats)?;
        return Ok(BoundReport::new(BoundKind::Lower, value)
            .with("k_range_empty", true)
            .with("blocks", (n / stats.e) as u64)
            .with("p_smq", prob_json(&p))
            .with("p_smq_open_unit", p_smq_in_open_unit(&p)));
    }
    let mut best: Option<(BigRational, usize, ExactProb)> = None;
    for k in 1..=kmax {
        let p = p_smq(m - k, q, stats)?;
        let v = (BigRational::one() - qpow(q, -((n - k) as i64))) * block_value(&p, (n - k) / stats.e);
        if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
            best = Some((v, k, p));
        }
    }
    let (v, k, p) = best.expect("nonempty k range");
    let mut report = BoundReport::new(BoundKind::Lower, ExactProb::new(v)?)
        .with("k_range_empty", false)
        .with("blocks", ((n - k) / stats.e) as u64)
        .with("s", (m - k) as u64)
        .with("p_smq", prob_json(&p))
        .with("p_smq_open_unit", p_smq_in_open_unit(&p));
    report.best_k = Some(k);
    Ok(report)
}

/// `(1 - q^{-|E|}) p_{|E|-1,q,M}` for a non-free matroid.
pub fn asymptotic_liminf_bound(q: u32, stats: &MatroidStats) -> Result<ExactProb, FormulaError> {
    check_stats(stats)?;
    if stats.e <= stats.r {
        return Err(bad("the matroid is free"));
    }
    let p = p_smq(stats.e - 1, q, stats)?;
    ExactProb::new((BigRational::one() - qpow(q, -(stats.e as i64))) * p.value())
}

/// Lower bound on the number of labelled `m x |E|` representations:
/// `C(e, l) (q-1)^{e-r-l} prod_{i=1}^{r} (q^m - q^{i-1})`.
pub fn rep_count_lower_bound(m: usize, q: u32, stats: &MatroidStats) -> Result<BigUint, FormulaError> {
    check_q(q)?;
    check_stats(stats)?;
    let MatroidStats { e, r, l } = *stats;
    if m < r {
        return Err(bad(format!("m = {m} is below the rank {r}")));
    }
    let mut count = binomial(BigUint::from(e), BigUint::from(l)) * num_traits::pow(BigUint::from(q - 1), e - r - l);
    for i in 1..=r {
        count *= upow(q, m) - upow(q, i - 1);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> ExactProb {
        ExactProb::new(BigRational::new(n.into(), d.into())).unwrap()
    }

    fn stats(e: usize, r: usize, l: usize) -> MatroidStats {
        MatroidStats { e, r, l }
    }

    const U12: MatroidStats = MatroidStats { e: 2, r: 1, l: 0 };

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(5, 0, 3).unwrap(), BigUint::one());
        assert_eq!(gaussian_binomial(2, 1, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert!(gaussian_binomial(2, 3, 2).is_err());
        assert!(gaussian_binomial(2, 1, 1).is_err());
    }

    /// Distinct 2-dimensional spans of pairs of vectors in GF(2)^4.
    #[test]
    fn gaussian_4_2_by_subspace_enumeration() {
        let mut spans = std::collections::BTreeSet::new();
        for a in 1u8..16 {
            for b in 1u8..16 {
                if a != b {
                    let mut s = [0u8, a, b, a ^ b];
                    s.sort();
                    spans.insert(s);
                }
            }
        }
        assert_eq!(spans.len(), 35);
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(count_rank_matrices(2, 2, 2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(count_rank_matrices(2, 2, 2, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(count_rank_matrices(3, 5, 4, 0).unwrap(), BigUint::one());
        assert!(count_rank_matrices(2, 1, 2, 2).is_err());
    }

    #[test]
    fn rank_counts_partition_all_matrices() {
        for q in [2, 3, 4, 5] {
            for m in 0..=4 {
                for n in 0..=4 {
                    let total: BigUint = (0..=m.min(n)).map(|k| count_rank_matrices(m, n, q, k).unwrap()).sum();
                    assert_eq!(total, upow(q, m * n), "q={q} {m}x{n}");
                    for k in 0..=m.min(n) {
                        assert_eq!(count_rank_matrices(m, n, q, k), count_rank_matrices(n, m, q, k));
                    }
                }
            }
        }
    }

    #[test]
    fn free_minor_examples() {
        assert_eq!(prob_free_minor(2, 2, 2, 1).unwrap().value, frac(15, 16));
        assert_eq!(prob_free_minor(4, 3, 3, 0).unwrap().value, ExactProb::one());
        assert_eq!(prob_free_minor(3, 2, 2, 2).unwrap().value, frac(21, 32));
        let none = prob_free_minor(2, 3, 2, 3).unwrap();
        assert_eq!(none.value, ExactProb::zero());
        assert_eq!(none.components["rank_exceeds_dimensions"], Value::Bool(true));
    }

    #[test]
    fn full_column_rank_examples() {
        assert_eq!(prob_full_col_rank(2, 2, 2).unwrap(), frac(3, 8));
        assert_eq!(prob_full_col_rank(5, 0, 3).unwrap(), ExactProb::one());
        assert_eq!(prob_full_col_rank(3, 2, 2).unwrap(), frac(21, 32));
        assert!(prob_full_col_rank(2, 3, 2).is_err());
    }

    #[test]
    fn free_minor_of_full_size_is_full_column_rank() {
        for q in [2, 3, 5] {
            for m in 0..=5 {
                for n in 0..=m {
                    assert_eq!(prob_free_minor(m, n, q, n).unwrap().value, prob_full_col_rank(m, n, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn li_bound_examples() {
        assert_eq!(li_lower_bound(2, 2, 2).unwrap(), ExactProb::zero());
        assert_eq!(li_lower_bound(12, 2, 2).unwrap(), frac(1023, 1024));
        assert_eq!(li_lower_bound(3, 2, 2).unwrap(), frac(1, 2));
        for q in [2, 3, 4] {
            for m in 1..=8 {
                for n in 1..=m {
                    assert!(li_lower_bound(m, n, q).unwrap() < prob_full_col_rank(m, n, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_nonfree(2, 2, 2).unwrap(), frac(5, 8));
        assert_eq!(upper_bound_nonfree(7, 0, 2).unwrap(), ExactProb::zero());
        let expected = BigRational::one()
            - BigRational::new(1023.into(), 1024.into())
                * BigRational::new(511.into(), 512.into())
                * BigRational::new(255.into(), 256.into());
        assert_eq!(upper_bound_nonfree(10, 3, 2).unwrap().value(), &expected);
    }

    #[test]
    fn cq_examples() {
        let c2 = cq_constant(2, 1e-9).unwrap();
        assert!((c2.approx - 0.2887880951).abs() < 1e-9, "{}", c2.approx);
        assert_eq!(c2.lower_bound, frac(1, 4));
        assert!(c2.approx > c2.lower_bound.to_f64());
        let c16 = cq_constant(16, 1e-12).unwrap();
        assert!(c16.approx > 239.0 / 256.0);
        assert!((c16.approx - (1.0 - 1.0 / 16.0 - 1.0 / 256.0)).abs() < 1e-4);
        assert_eq!(cq_constant(2, 0.0), Err(FormulaError::BadTolerance));
        assert_eq!(cq_constant(2, f64::NAN), Err(FormulaError::BadTolerance));
    }

    #[test]
    fn p_smq_examples() {
        assert_eq!(p_smq(1, 2, &U12).unwrap(), frac(1, 4));
        assert_eq!(p_smq(1, 2, &stats(2, 0, 2)).unwrap(), frac(1, 4));
        assert_eq!(p_smq(2, 2, &U12).unwrap(), frac(3, 16));
        assert!(p_smq(0, 2, &U12).is_err());
        assert!(p_smq(3, 2, &stats(2, 1, 2)).is_err());
        // the all-loops matroid at s = 0 sits on the boundary of (0, 1)
        let p = p_smq(0, 2, &stats(2, 0, 2)).unwrap();
        assert!(!p_smq_in_open_unit(&p));
    }

    #[test]
    fn nonfree_lower_bound_examples() {
        let rep = lower_bound_nonfree(2, 4, 2, &U12).unwrap();
        assert_eq!(rep.best_k, Some(1));
        assert_eq!(rep.value, frac(7, 32));
        assert_eq!(rep.kind, BoundKind::Lower);

        let empty = lower_bound_nonfree(1, 4, 2, &U12).unwrap();
        assert_eq!(empty.components["k_range_empty"], Value::Bool(true));
        assert_eq!(empty.best_k, None);
        assert_eq!(empty.value, lower_bound_block(1, 4, 2, &U12).unwrap());
        assert!(lower_bound_nonfree(0, 4, 2, &U12).is_err());
        assert!(lower_bound_nonfree(2, 1, 2, &U12).is_err());
    }

    #[test]
    fn ties_break_to_smallest_k() {
        // all-loops targets make p independent of s, so equal values recur
        for m in 1..6 {
            for n in 2..10 {
                let Ok(rep) = lower_bound_nonfree(m, n, 2, &U12) else { continue };
                let Some(k) = rep.best_k else { continue };
                for smaller in 1..k {
                    let p = p_smq(m - smaller, 2, &U12).unwrap();
                    let v = (BigRational::one() - qpow(2, -((n - smaller) as i64))) * block_value(&p, (n - smaller) / 2);
                    assert!(&v < rep.value.value());
                }
            }
        }
    }

    #[test]
    fn block_bound_examples() {
        assert_eq!(lower_bound_block(1, 2, 2, &U12).unwrap(), frac(1, 4));
        assert_eq!(lower_bound_block(1, 4, 2, &U12).unwrap(), frac(7, 16));
        assert!(lower_bound_block(1, 1, 2, &U12).is_err());
    }

    #[test]
    fn liminf_examples() {
        assert_eq!(asymptotic_liminf_bound(2, &U12).unwrap(), frac(3, 16));
        let u24 = stats(4, 2, 0);
        let expected = (BigRational::one() - qpow(3, -4)) * p_smq(3, 3, &u24).unwrap().value();
        assert_eq!(asymptotic_liminf_bound(3, &u24).unwrap().value(), &expected);
        assert!(asymptotic_liminf_bound(2, &stats(3, 3, 0)).is_err());
    }

    #[test]
    fn rep_count_examples() {
        assert_eq!(rep_count_lower_bound(2, 2, &stats(3, 2, 0)).unwrap(), BigUint::from(6u32));
        assert_eq!(rep_count_lower_bound(1, 2, &U12).unwrap(), BigUint::one());
        assert_eq!(rep_count_lower_bound(3, 5, &stats(2, 0, 2)).unwrap(), BigUint::one());
        assert!(rep_count_lower_bound(0, 2, &U12).is_err());
    }

    #[test]
    fn p_smq_matches_rep_count() {
        for q in [2, 3, 4] {
            for (e, r, l) in [(2, 1, 0), (3, 2, 0), (4, 2, 1), (2, 0, 2), (4, 2, 0), (7, 3, 0)] {
                let st = stats(e, r, l);
                for m in r..=4 {
                    let p = p_smq(m, q, &st).unwrap();
                    let count = rep_count_lower_bound(m, q, &st).unwrap();
                    let scaled = p.value() * BigRational::from_integer(BigInt::from(upow(q, m * e)));
                    assert_eq!(scaled, BigRational::from_integer(BigInt::from(count)));
                }
            }
        }
    }

    #[test]
    fn lower_bound_increases_toward_one() {
        let mut prev = ExactProb::zero();
        let mut crossed = None;
        for n in 3..60 {
            let v = lower_bound_nonfree(3, n, 2, &U12).unwrap().value;
            assert!(v >= prev, "n = {n}");
            if crossed.is_none() && v.to_f64() > 0.99 {
                crossed = Some(n);
            }
            prev = v;
        }
        assert!(crossed.is_some());
    }

    #[test]
    fn report_json_shape() {
        let rep = lower_bound_nonfree(2, 4, 2, &U12).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["kind"], "lower");
        assert_eq!(v["num"], "7");
        assert_eq!(v["den"], "32");
        assert_eq!(v["best_k"], 1);
        assert!(v["components"].is_object());
    }
}
