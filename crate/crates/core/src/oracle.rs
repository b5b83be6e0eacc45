//! Ground truth by exhaustive enumeration of every `m x n` matrix over GF(q).
//!
//! Matrix number `i` has row-major entries equal to the base-`q` digits of
//! `i`, most significant first, so the enumeration is lexicographic.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::{Serialize, Serializer};
use thiserror::Error;

use crate::formulas::ExactProb;
use crate::gf::Field;
use crate::matrix::{change_of_basis, FqMatrix, MatrixError};
use crate::matroid::{Matroid, MatroidError};
use crate::minor::{find_minor_in_matrix, verify_witness_matrix, MinorError, MinorOutcome, SearchLimits};
use crate::sampler::{reduce, Event, SamplerError};

/// Default cap on the number of matrices enumerated.
pub const DEFAULT_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} matrices exceed the enumeration cap {cap}")]
    TooLarge { count: String, cap: u64 },
    #[error("minor search ran out of budget on matrix {0}")]
    BudgetExceeded(u64),
    #[error("minor search returned a witness that does not verify on matrix {0}")]
    BadWitness(u64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Minor(#[from] MinorError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub total: BigUint,
    pub hits: BigUint,
    pub exact: ExactProb,
}

impl OracleResult {
    fn new(total: u64, hits: u64) -> Self {
        let (total, hits) = (BigUint::from(total), BigUint::from(hits));
        let exact = ExactProb::from_counts(&hits, &total).expect("hits <= total");
        OracleResult { total, hits, exact }
    }
}

impl Serialize for OracleResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({
            "total": self.total.to_string(),
            "hits": self.hits.to_string(),
            "exact": { "num": self.exact.numer().to_string(), "den": self.exact.denom().to_string() },
            "float": self.exact.to_f64(),
        })
        .serialize(s)
    }
}

/// Number of `m x n` matrices over GF(q), if it does not exceed `cap`.
pub fn matrix_count(q: u32, m: usize, n: usize, cap: u64) -> Result<u64, OracleError> {
    let count = num_traits::pow(BigUint::from(q), m * n);
    match u64::try_from(&count) {
        Ok(c) if c <= cap => Ok(c),
        _ => Err(OracleError::TooLarge { count: count.to_string(), cap }),
    }
}

pub fn matrix_from_index(field: &Field, m: usize, n: usize, mut index: u64) -> FqMatrix {
    let q = field.q() as u64;
    let mut data = vec![0u8; m * n];
    for x in data.iter_mut().rev() {
        *x = (index % q) as u8;
        index /= q;
    }
    FqMatrix::new(field, m, n, data).expect("codes are in range")
}

pub fn matrix_index(a: &FqMatrix) -> u64 {
    let q = a.field().q() as u64;
    a.entries().iter().fold(0, |acc, &x| acc * q + x as u64)
}

fn count_matching(
    field: &Field,
    m: usize,
    n: usize,
    cap: u64,
    pred: impl Fn(u64, &FqMatrix) -> Result<bool, OracleError> + Sync,
) -> Result<OracleResult, OracleError> {
    let total = matrix_count(field.q(), m, n, cap)?;
    let hits = (0..total)
        .into_par_iter()
        .map(|i| pred(i, &matrix_from_index(field, m, n, i)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(OracleResult::new(total, hits))
}

pub fn exact_event_prob(field: &Field, m: usize, n: usize, event: Event, cap: u64) -> Result<OracleResult, OracleError> {
    count_matching(field, m, n, cap, |_, a| Ok(event.holds(a)))
}

/// Exact probability that `target` is a minor of the column matroid of a
/// uniform matrix. Every witness found is verified.
pub fn exact_minor_prob(field: &Field, m: usize, n: usize, target: &Matroid, cap: u64) -> Result<OracleResult, OracleError> {
    let limits = SearchLimits { budget: u64::MAX };
    count_matching(field, m, n, cap, |i, a| match find_minor_in_matrix(a, target, limits)? {
        MinorOutcome::Found(w) if verify_witness_matrix(a, target, &w) => Ok(true),
        MinorOutcome::Found(_) => Err(OracleError::BadWitness(i)),
        MinorOutcome::Absent => Ok(false),
        MinorOutcome::Unknown => Err(OracleError::BudgetExceeded(i)),
    })
}

/// Number of `m x |E|` matrices whose column matroid is exactly `target`
/// under the identity labelling of columns.
pub fn count_representations_exact(target: &Matroid, m: usize, field: &Field, cap: u64) -> Result<BigUint, OracleError> {
    let e = target.ground_size();
    let r = count_matching(field, m, e, cap, |_, a| {
        Ok(a.rank() == target.rank() && Matroid::from_matrix(a)? == *target)
    })?;
    Ok(r.hits)
}

/// Number of `m x |E|` matrices whose column matroid is isomorphic to
/// `target`. Unlike the labelled count this includes every placement of the
/// loop columns.
pub fn count_representations_isomorphic(target: &Matroid, m: usize, field: &Field, cap: u64) -> Result<BigUint, OracleError> {
    let e = target.ground_size();
    let stats = target.stats();
    let r = count_matching(field, m, e, cap, |_, a| {
        if a.rank() != target.rank() {
            return Ok(false);
        }
        let candidate = Matroid::from_matrix(a)?;
        Ok(candidate.stats() == stats
            && candidate.bases().len() == target.bases().len()
            && crate::matroid::is_isomorphic(&candidate, target).is_some())
    })?;
    Ok(r.hits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Procedure {
    ChangeOfBasis,
    ReduceConditional { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DistributionReport {
    pub procedure: String,
    pub q: u32,
    pub m: usize,
    pub n: usize,
    /// Invertible matrices tried, or inputs on which reduce succeeded.
    pub checked: u64,
    /// Reduce output tallies indexed by [`matrix_index`]; empty for change of basis.
    pub output_counts: Vec<u64>,
    pub passed: bool,
}

/// Exhaustive distribution checks.
///
/// Change of basis: `A -> PA` must be a bijection on all `m x n` matrices
/// for every invertible `m x m` matrix `P`. Reduce: over all inputs on which
/// [`reduce`] succeeds, every `(m-k) x (n-k)` output must occur equally often.
pub fn distribution_check(field: &Field, m: usize, n: usize, procedure: Procedure, cap: u64) -> Result<DistributionReport, OracleError> {
    let total = matrix_count(field.q(), m, n, cap)?;
    let (name, checked, output_counts, passed) = match procedure {
        Procedure::ChangeOfBasis => {
            let ps = matrix_count(field.q(), m, m, cap)?;
            let results = (0..ps)
                .into_par_iter()
                .filter_map(|pi| {
                    let p = matrix_from_index(field, m, m, pi);
                    (p.rank() == m).then(|| is_bijection(field, &p, m, n, total))
                })
                .collect::<Result<Vec<bool>, OracleError>>()?;
            ("change-of-basis".to_string(), results.len() as u64, Vec::new(), results.iter().all(|&b| b))
        }
        Procedure::ReduceConditional { k } => {
            let outputs = matrix_count(field.q(), m.saturating_sub(k), n.saturating_sub(k), cap)?;
            let mut counts = vec![0u64; outputs as usize];
            for i in 0..total {
                if let Some(b) = reduce(&matrix_from_index(field, m, n, i), k)? {
                    counts[matrix_index(&b) as usize] += 1;
                }
            }
            let checked = counts.iter().sum::<u64>();
            let passed = checked > 0 && counts.iter().all(|&c| c == counts[0]);
            (format!("reduce-conditional:{k}"), checked, counts, passed)
        }
    };
    Ok(DistributionReport { procedure: name, q: field.q(), m, n, checked, output_counts, passed })
}

fn is_bijection(field: &Field, p: &FqMatrix, m: usize, n: usize, total: u64) -> Result<bool, OracleError> {
    let mut seen = vec![false; total as usize];
    for i in 0..total {
        let image = matrix_index(&change_of_basis(p, &matrix_from_index(field, m, n, i))?) as usize;
        if std::mem::replace(&mut seen[image], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minor test by trying every disjoint contraction/deletion pair and testing
/// the result for isomorphism with the target. Exponential; small hosts only.
/// Returns `(contract, delete)` of the first pair found.
pub fn brute_force_minor(host: &Matroid, target: &Matroid) -> Option<(Vec<usize>, Vec<usize>)> {
    let e = host.ground_size();
    let keep = target.ground_size();
    if keep > e {
        return None;
    }
    let assignments = 3u64.pow(e as u32);
    for code in 0..assignments {
        // digit 0 keep, 1 contract, 2 delete
        let mut digits = Vec::with_capacity(e);
        let mut c = code;
        for _ in 0..e {
            digits.push((c % 3) as u8);
            c /= 3;
        }
        if digits.iter().filter(|&&d| d == 0).count() != keep {
            continue;
        }
        let pick = |t: u8| (0..e).filter(|&i| digits[i] == t).collect::<Vec<_>>();
        let (contract, delete) = (pick(1), pick(2));
        let minor = host.minor(&contract, &delete).expect("disjoint");
        if crate::matroid::is_isomorphic(&minor, target).is_some() {
            return Some((contract, delete));
        }
    }
    None
}
