//! Minor containment with verifiable witnesses.
//!
//! A target `N` is a minor of a host `M` iff there is an independent set `C`
//! with `|C| = r(M) - r(N)` and an injection of `E(N)` into `E(M) \ C` under
//! which independence in `N` matches independence in `M / C`. The search
//! enumerates such `C` in lexicographic order and, for each, embeds the target
//! element by element, checking the bases and circuits each placement closes.
//!
//! Hosts are either explicit [`Matroid`]s or matrices (up to 64 columns), the
//! latter working directly with column spans so no basis family is built.
//! When the dual needs a smaller contraction set, the dual target is searched
//! in the dual host instead and the witness translated back.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{dual_representation, FqMatrix, Span};
use crate::matroid::{elements_of, ElementSet, Matroid, MAX_GROUND};

/// Default number of search steps before a search gives up.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest matrix host, in columns.
pub const MAX_MATRIX_HOST: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("unknown matroid class `{0}`")]
    UnknownClass(String),
    #[error("matrix host has {0} columns, more than {MAX_MATRIX_HOST}")]
    HostTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Step budget: one step per contraction set tried plus one per partial
    /// assignment checked.
    pub budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { budget: DEFAULT_BUDGET }
    }
}

/// Certificate that `(host / contract) \ delete` equals the target after
/// mapping target element `i` to host element `bijection[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub contract: Vec<usize>,
    pub delete: Vec<usize>,
    pub bijection: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorOutcome {
    Found(MinorWitness),
    Absent,
    /// Budget ran out before the search could decide.
    Unknown,
}

impl MinorOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, MinorOutcome::Found(_))
    }

    pub fn witness(&self) -> Option<&MinorWitness> {
        match self {
            MinorOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MinorOutcome::Found(_) => "found",
            MinorOutcome::Absent => "absent",
            MinorOutcome::Unknown => "unknown",
        }
    }
}

/// Independence in a contracted host.
trait Embedding {
    /// Whether the host elements in `set` (distinct, outside the contraction
    /// set) are independent.
    fn independent(&self, set: &[usize]) -> bool;

    /// For each element, the previous element it is interchangeable with
    /// (both loops, or parallel), if any. Blocked elements are skipped.
    fn clone_of(&self, blocked: &[bool]) -> Vec<Option<usize>> {
        let n = blocked.len();
        let loop_ = |e: usize| !self.independent(&[e]);
        let mut out = vec![None; n];
        for e in (0..n).filter(|&e| !blocked[e]) {
            out[e] = (0..e).rev().filter(|&f| !blocked[f]).find(|&f| match (loop_(f), loop_(e)) {
                (true, true) => true,
                (false, false) => !self.independent(&[f, e]),
                _ => false,
            });
        }
        out
    }
}

/// What the search needs from a host: independence for choosing the
/// contraction set, then an [`Embedding`] for the contracted host.
trait SearchHost {
    type Span: Clone;
    type Contracted<'a>: Embedding
    where
        Self: 'a;
    fn ground(&self) -> usize;
    fn rank(&self) -> usize;
    fn empty(&self) -> Self::Span;
    fn extend(&self, span: &Self::Span, e: usize) -> Option<Self::Span>;
    /// The host contracted by the independent set `contract` spanning `span`.
    fn contracted<'a>(&'a self, contract: &[usize], span: &Self::Span) -> Self::Contracted<'a>;
}

struct TableHost {
    ground: usize,
    rank: usize,
    indep: Vec<bool>,
}

fn table_extend(indep: &[bool], span: ElementSet, e: usize) -> Option<ElementSet> {
    let next = span | (1 << e);
    (next != span && indep[next as usize]).then_some(next)
}

struct TableContracted<'a> {
    indep: &'a [bool],
    base: ElementSet,
}

impl Embedding for TableContracted<'_> {
    fn independent(&self, set: &[usize]) -> bool {
        let bits = set.iter().fold(self.base, |acc, &e| acc | (1 << e));
        self.indep[bits as usize]
    }
}

impl SearchHost for TableHost {
    type Span = ElementSet;
    type Contracted<'a> = TableContracted<'a>;

    fn ground(&self) -> usize {
        self.ground
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn empty(&self) -> ElementSet {
        0
    }

    fn extend(&self, span: &ElementSet, e: usize) -> Option<ElementSet> {
        table_extend(&self.indep, *span, e)
    }

    fn contracted<'a>(&'a self, _: &[usize], span: &ElementSet) -> TableContracted<'a> {
        TableContracted { indep: &self.indep, base: *span }
    }
}

struct MatrixHost<'a> {
    a: &'a FqMatrix,
    columns: Vec<Vec<u8>>,
    rank: usize,
}

impl<'a> MatrixHost<'a> {
    fn new(a: &'a FqMatrix) -> Self {
        let columns = (0..a.cols()).map(|j| a.column(j)).collect();
        MatrixHost { a, columns, rank: a.rank() }
    }
}

impl SearchHost for MatrixHost<'_> {
    type Span = Span;
    type Contracted<'a>
        = Quotient
    where
        Self: 'a;

    fn ground(&self) -> usize {
        self.a.cols()
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn empty(&self) -> Span {
        Span::new(self.a.field(), self.a.rows())
    }

    fn extend(&self, span: &Span, e: usize) -> Option<Span> {
        if span.contains(&self.columns[e]) {
            return None;
        }
        let mut next = span.clone();
        next.insert(&self.columns[e]);
        Some(next)
    }

    /// Columns taken modulo the span of the contraction set, in coordinates
    /// of the quotient space (dimension at most the target rank).
    fn contracted(&self, contract: &[usize], span: &Span) -> Quotient {
        let f = self.a.field();
        let n = self.a.cols();
        let rests: Vec<Vec<u8>> = self.columns.iter().map(|c| span.reduce(c)).collect();
        let m = self.a.rows();
        let data = (0..m).flat_map(|i| rests.iter().map(move |c| c[i])).collect();
        let (rr, pivots) = FqMatrix::new(f, m, n, data).expect("shape").rref();
        debug_assert_eq!(pivots.len() + contract.len(), self.rank);
        let columns = (0..n)
            .map(|j| (0..pivots.len()).fold(0u128, |acc, i| acc | (rr.get(i, j) as u128) << (4 * i)))
            .collect();
        Quotient { field: f.clone(), dim: pivots.len(), columns }
    }
}

/// Vectors of at most [`MAX_GROUND`] entries packed four bits per entry.
type Packed = u128;

fn entry(v: Packed, i: usize) -> u8 {
    ((v >> (4 * i)) & 0xF) as u8
}

/// A host contracted to a small quotient space with packed vectors.
struct Quotient {
    field: crate::gf::Field,
    dim: usize,
    columns: Vec<Packed>,
}

impl Quotient {
    /// `v + c * w`.
    fn axpy(&self, v: Packed, c: u8, w: Packed) -> Packed {
        let f = &self.field;
        if f.p() == 2 && c == 1 {
            return v ^ w;
        }
        let mut out = 0;
        for i in 0..self.dim {
            let x = f.add(entry(v, i), f.mul(c, entry(w, i)));
            out |= (x as Packed) << (4 * i);
        }
        out
    }
}

impl Embedding for Quotient {
    fn independent(&self, set: &[usize]) -> bool {
        if set.len() > self.dim {
            return false;
        }
        // echelon rows: rows[i] has entry 1 at pivots[i], zero at earlier pivots
        let mut rows = [0 as Packed; MAX_GROUND];
        let mut pivots = [0usize; MAX_GROUND];
        for (k, &e) in set.iter().enumerate() {
            let mut v = self.columns[e];
            for i in 0..k {
                let c = entry(v, pivots[i]);
                if c != 0 {
                    v = self.axpy(v, self.field.neg(c), rows[i]);
                }
            }
            if v == 0 {
                return false;
            }
            pivots[k] = v.trailing_zeros() as usize / 4;
            let lead = entry(v, pivots[k]);
            rows[k] = if lead == 1 { v } else { self.axpy(0, self.field.inv_nonzero(lead), v) };
        }
        true
    }

    fn clone_of(&self, blocked: &[bool]) -> Vec<Option<usize>> {
        let mut last = std::collections::HashMap::new();
        let mut out = vec![None; blocked.len()];
        for (e, &v) in self.columns.iter().enumerate() {
            if blocked[e] {
                continue;
            }
            let key = if v == 0 {
                0
            } else {
                let lead = entry(v, v.trailing_zeros() as usize / 4);
                self.axpy(0, self.field.inv_nonzero(lead), v)
            };
            out[e] = last.insert(key, e);
        }
        out
    }
}

/// What placing target element `pos` must preserve, given that the earlier
/// positions already embed correctly: every basis of the prefix through `pos`
/// that contains `pos` stays independent, and every circuit ending at `pos`
/// stays dependent.
struct Checks {
    sets: Vec<(ElementSet, bool)>,
}

fn placement_checks(indep: &[bool], size: usize) -> Vec<Checks> {
    (0..size)
        .map(|pos| {
            let bit = 1usize << pos;
            let mut sets = Vec::new();
            for x in 0..bit {
                let s = x | bit;
                let members = || (0..=pos).filter(move |&i| s >> i & 1 == 1);
                if indep[s] {
                    if (0..=pos).all(|i| s >> i & 1 == 1 || !indep[s | 1 << i]) {
                        sets.push((s as ElementSet, true));
                    }
                } else if members().all(|i| indep[s & !(1 << i)]) {
                    sets.push((s as ElementSet, false));
                }
            }
            Checks { sets }
        })
        .collect()
}

struct Search {
    checks: Vec<Checks>,
    target_size: usize,
    steps: u64,
    budget: u64,
}

enum Step<T> {
    Done(T),
    NotHere,
    OutOfBudget,
}

impl Search {
    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.budget
    }

    fn run<H: SearchHost>(&mut self, host: &H, contract_size: usize) -> MinorOutcome {
        let mut chosen = Vec::with_capacity(contract_size);
        match self.contraction_sets(host, 0, contract_size, &mut chosen, &host.empty()) {
            Step::Done(w) => MinorOutcome::Found(w),
            Step::NotHere => MinorOutcome::Absent,
            Step::OutOfBudget => MinorOutcome::Unknown,
        }
    }

    fn contraction_sets<H: SearchHost>(
        &mut self,
        host: &H,
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        span: &H::Span,
    ) -> Step<MinorWitness> {
        if need == 0 {
            if !self.tick() {
                return Step::OutOfBudget;
            }
            return self.embed_under(host.ground(), chosen, &host.contracted(chosen, span));
        }
        let n = host.ground();
        for e in start..n {
            if n - e < need {
                break;
            }
            let Some(next) = host.extend(span, e) else {
                continue;
            };
            chosen.push(e);
            let res = self.contraction_sets(host, e + 1, need - 1, chosen, &next);
            chosen.pop();
            match res {
                Step::NotHere => {}
                other => return other,
            }
        }
        Step::NotHere
    }

    fn embed_under<E: Embedding>(&mut self, n: usize, contract: &[usize], host: &E) -> Step<MinorWitness> {
        let mut blocked = vec![false; n];
        for &c in contract {
            blocked[c] = true;
        }
        let mut image = Vec::with_capacity(self.target_size);
        let clone_of = host.clone_of(&blocked);
        match self.assign(host, &clone_of, 0, &mut blocked, &mut image) {
            Step::Done(()) => {
                let mut kept = vec![false; n];
                for &h in image.iter().chain(contract) {
                    kept[h] = true;
                }
                let delete = (0..n).filter(|&h| !kept[h]).collect();
                Step::Done(MinorWitness { contract: contract.to_vec(), delete, bijection: image })
            }
            Step::NotHere => Step::NotHere,
            Step::OutOfBudget => Step::OutOfBudget,
        }
    }

    /// Interchangeable host elements are used in increasing order only.
    fn assign<E: Embedding>(
        &mut self,
        host: &E,
        clone_of: &[Option<usize>],
        pos: usize,
        used: &mut [bool],
        image: &mut Vec<usize>,
    ) -> Step<()> {
        if pos == self.target_size {
            return Step::Done(());
        }
        for cand in 0..used.len() {
            if used[cand] || clone_of[cand].is_some_and(|c| !used[c]) {
                continue;
            }
            if !self.tick() {
                return Step::OutOfBudget;
            }
            if !self.place(host, pos, cand, image) {
                continue;
            }
            used[cand] = true;
            image.push(cand);
            match self.assign(host, clone_of, pos + 1, used, image) {
                Step::NotHere => {}
                other => return other,
            }
            image.pop();
            used[cand] = false;
        }
        Step::NotHere
    }

    fn place<E: Embedding>(&self, host: &E, pos: usize, cand: usize, image: &[usize]) -> bool {
        let mut set = Vec::with_capacity(pos + 1);
        self.checks[pos].sets.iter().all(|&(s, want)| {
            set.clear();
            set.extend((0..pos).filter(|&i| s >> i & 1 == 1).map(|i| image[i]));
            set.push(cand);
            host.independent(&set) == want
        })
    }
}

fn quick_absent(host_e: usize, host_r: usize, target: &Matroid) -> bool {
    let (e, r) = (target.ground_size(), target.rank());
    e > host_e || r > host_r || e - r > host_e - host_r
}

/// An order of the target elements in which circuits close as early as
/// possible, so that dependencies prune the embedding near the root.
/// Returns `position[element]`.
fn embedding_order(target: &Matroid) -> Vec<usize> {
    let e = target.ground_size();
    let circuits = target.circuits();
    let mut placed: ElementSet = 0;
    let mut position = vec![0; e];
    for pos in 0..e {
        let key = |x: usize| {
            let with = placed | (1 << x);
            let mut closes = 0;
            let mut near = [0usize; 3];
            for &c in circuits.iter().filter(|&&c| c & (1 << x) != 0) {
                match (c & !with).count_ones() {
                    0 => closes += 1,
                    k @ 1..=3 => near[k as usize - 1] += 1,
                    _ => {}
                }
            }
            (closes, near[0], near[1], near[2], std::cmp::Reverse(x))
        };
        let best = (0..e).filter(|&x| placed & (1 << x) == 0).max_by_key(|&x| key(x)).expect("unplaced element");
        position[best] = pos;
        placed |= 1 << best;
    }
    position
}

fn run_search<H: SearchHost>(host: &H, target: &Matroid, limits: SearchLimits) -> MinorOutcome {
    if quick_absent(host.ground(), host.rank(), target) {
        return MinorOutcome::Absent;
    }
    let position = embedding_order(target);
    let ordered = target.relabel(&position).expect("permutation");
    let mut search = Search {
        checks: placement_checks(&ordered.independence_table(), ordered.ground_size()),
        target_size: ordered.ground_size(),
        steps: 0,
        budget: limits.budget,
    };
    match search.run(host, host.rank() - target.rank()) {
        MinorOutcome::Found(w) => {
            let bijection = position.iter().map(|&p| w.bijection[p]).collect();
            MinorOutcome::Found(MinorWitness { bijection, ..w })
        }
        other => other,
    }
}

/// Contraction set sizes for searching `target` in the host and, dually,
/// `target*` in `host*`.
fn contraction_sizes(host_e: usize, host_r: usize, target: &Matroid) -> (usize, usize) {
    let (e, r) = (target.ground_size(), target.rank());
    (host_r - r, (host_e - host_r) - (e - r))
}

/// `N = M / C \ D` exactly when `N* = M* / D \ C`.
fn from_dual(outcome: MinorOutcome) -> MinorOutcome {
    match outcome {
        MinorOutcome::Found(w) => MinorOutcome::Found(MinorWitness { contract: w.delete, delete: w.contract, bijection: w.bijection }),
        other => other,
    }
}

/// Searches for `target` as a minor of an explicit host matroid.
///
/// The search runs on whichever of the host and its dual needs the smaller
/// contraction set.
pub fn find_minor(host: &Matroid, target: &Matroid, limits: SearchLimits) -> MinorOutcome {
    if quick_absent(host.ground_size(), host.rank(), target) {
        return MinorOutcome::Absent;
    }
    let (primal, dual) = contraction_sizes(host.ground_size(), host.rank(), target);
    let table = |m: &Matroid| TableHost { ground: m.ground_size(), rank: m.rank(), indep: m.independence_table() };
    if dual < primal {
        from_dual(run_search(&table(&host.dual()), &target.dual(), limits))
    } else {
        run_search(&table(host), target, limits)
    }
}

/// Searches for `target` as a minor of the column matroid of `host`.
pub fn find_minor_in_matrix(host: &FqMatrix, target: &Matroid, limits: SearchLimits) -> Result<MinorOutcome, MinorError> {
    if host.cols() > MAX_MATRIX_HOST {
        return Err(MinorError::HostTooLarge(host.cols()));
    }
    let rank = host.rank();
    if quick_absent(host.cols(), rank, target) {
        return Ok(MinorOutcome::Absent);
    }
    let (primal, dual) = contraction_sizes(host.cols(), rank, target);
    Ok(if dual < primal {
        let d = dual_representation(host);
        from_dual(run_search(&MatrixHost::new(&d), &target.dual(), limits))
    } else {
        run_search(&MatrixHost::new(host), target, limits)
    })
}

/// Structural part of witness validity shared by both verifiers; returns the
/// contraction set and survivor list.
fn check_shape(ground: usize, target: &Matroid, w: &MinorWitness) -> Option<(Vec<usize>, Vec<usize>)> {
    if w.bijection.len() != target.ground_size() {
        return None;
    }
    let mut role = vec![0u8; ground];
    for (list, tag) in [(&w.contract, 1u8), (&w.delete, 2), (&w.bijection, 3)] {
        for &h in list.iter() {
            if h >= ground || role[h] != 0 {
                return None;
            }
            role[h] = tag;
        }
    }
    if role.contains(&0) {
        return None;
    }
    Some((w.contract.clone(), w.bijection.clone()))
}

/// Recomputes `(host / C) \ D` and checks it equals the target under the
/// witness bijection.
pub fn verify_witness(host: &Matroid, target: &Matroid, w: &MinorWitness) -> bool {
    let Some((contract, image)) = check_shape(host.ground_size(), target, w) else {
        return false;
    };
    let cset = contract.iter().fold(0u32, |acc, &c| acc | (1 << c));
    if !host.is_independent(cset) {
        return false;
    }
    let Ok(minor) = host.minor(&contract, &w.delete) else {
        return false;
    };
    // survivors are relabelled in increasing order
    let mut survivors = image.clone();
    survivors.sort_unstable();
    let relabel: Vec<usize> =
        image.iter().map(|h| survivors.binary_search(h).expect("survivor")).collect();
    if minor.bases().len() != target.bases().len() {
        return false;
    }
    target.bases().iter().all(|&b| {
        let mapped = elements_of(b).into_iter().fold(0u32, |acc, i| acc | (1 << relabel[i]));
        minor.is_basis(mapped)
    })
}

/// Matrix-host verification by direct rank computations: `C` must have full
/// column rank, and each target subset `X` is independent exactly when the
/// columns `C ∪ f(X)` have rank `|C| + |X|`.
pub fn verify_witness_matrix(host: &FqMatrix, target: &Matroid, w: &MinorWitness) -> bool {
    if host.cols() > MAX_MATRIX_HOST {
        return false;
    }
    let Some((contract, image)) = check_shape(host.cols(), target, w) else {
        return false;
    };
    let rank_of = |cols: &[usize]| host.select_columns(cols).expect("in range").rank();
    if rank_of(&contract) != contract.len() {
        return false;
    }
    let e = target.ground_size();
    for x in 0u32..(1 << e) {
        let mut cols = contract.clone();
        cols.extend(elements_of(x).into_iter().map(|i| image[i]));
        let independent = rank_of(&cols) == cols.len();
        if independent != target.is_independent(x) {
            return false;
        }
    }
    true
}

/// A host for class checks.
#[derive(Debug, Clone, Copy)]
pub enum HostRef<'a> {
    Matroid(&'a Matroid),
    Matrix(&'a FqMatrix),
}

impl HostRef<'_> {
    pub fn find(&self, target: &Matroid, limits: SearchLimits) -> Result<MinorOutcome, MinorError> {
        match self {
            HostRef::Matroid(m) => Ok(find_minor(m, target, limits)),
            HostRef::Matrix(a) => find_minor_in_matrix(a, target, limits),
        }
    }

    pub fn verify(&self, target: &Matroid, w: &MinorWitness) -> bool {
        match self {
            HostRef::Matroid(m) => verify_witness(m, target, w),
            HostRef::Matrix(a) => verify_witness_matrix(a, target, w),
        }
    }
}

/// Excluded minors of the graphic matroids, in the order they are searched.
pub const GRAPHIC_EXCLUDED: [&str; 5] = ["U:2,4", "F7", "F7*", "MK5*", "MK33*"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedMinorResult {
    pub name: &'static str,
    pub outcome: MinorOutcome,
    /// Witness checked by the independent verifier.
    pub verified: bool,
    /// Absence decided without search (binary hosts have no `U:2,4` minor).
    pub by_theorem: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: String,
    pub results: Vec<ExcludedMinorResult>,
}

impl ClassReport {
    /// `Some(true)` if every excluded minor is absent, `Some(false)` if one was
    /// found and verified, `None` when undecided.
    pub fn is_member(&self) -> Option<bool> {
        if self.results.iter().any(|r| r.verified) {
            Some(false)
        } else if self.results.iter().all(|r| r.outcome == MinorOutcome::Absent)
            && self.results.len() == GRAPHIC_EXCLUDED.len()
        {
            Some(true)
        } else {
            None
        }
    }

    pub fn found(&self) -> Vec<&'static str> {
        self.results.iter().filter(|r| r.verified).map(|r| r.name).collect()
    }
}

/// Tests the host against each excluded minor of `class_name` (only
/// `graphic`). With `stop_at_first`, stops after the first verified find.
pub fn has_excluded_minor(
    host: HostRef<'_>,
    class_name: &str,
    limits: SearchLimits,
    stop_at_first: bool,
) -> Result<ClassReport, MinorError> {
    if class_name != "graphic" {
        return Err(MinorError::UnknownClass(class_name.to_string()));
    }
    let binary = matches!(host, HostRef::Matrix(a) if a.field().q() == 2);
    let mut results = Vec::new();
    for name in GRAPHIC_EXCLUDED {
        if binary && name == "U:2,4" {
            results.push(ExcludedMinorResult { name, outcome: MinorOutcome::Absent, verified: false, by_theorem: true });
            continue;
        }
        let target = Matroid::catalog(name).expect("catalog entry");
        let outcome = host.find(&target, limits)?;
        let verified = match &outcome {
            MinorOutcome::Found(w) => host.verify(&target, w),
            _ => false,
        };
        results.push(ExcludedMinorResult { name, outcome, verified, by_theorem: false });
        if stop_at_first && verified {
            break;
        }
    }
    Ok(ClassReport { class: class_name.to_string(), results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::matroid::{complete_graph, fano_matrix};

    fn cat(name: &str) -> Matroid {
        Matroid::catalog(name).unwrap()
    }

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn deletion_only_witness() {
        let host = cat("U:2,4");
        let target = cat("U:2,3");
        let MinorOutcome::Found(w) = find_minor(&host, &target, limits()) else { panic!() };
        assert!(w.contract.is_empty());
        assert_eq!(w.delete.len(), 1);
        assert!(verify_witness(&host, &target, &w));
    }

    #[test]
    fn free_host_has_only_free_minors() {
        assert_eq!(find_minor(&cat("free:5"), &cat("U:1,2"), limits()), MinorOutcome::Absent);
        assert!(find_minor(&cat("free:5"), &cat("free:3"), limits()).is_found());
    }

    #[test]
    fn fano_in_its_matrix() {
        let a = fano_matrix();
        let target = cat("F7");
        let MinorOutcome::Found(w) = find_minor_in_matrix(&a, &target, limits()).unwrap() else { panic!() };
        assert!(w.contract.is_empty() && w.delete.is_empty());
        assert!(verify_witness_matrix(&a, &target, &w));
        let host = Matroid::from_matrix(&a).unwrap();
        assert!(verify_witness(&host, &target, &w));
    }

    #[test]
    fn bad_witnesses_rejected() {
        let host = cat("U:2,4");
        let target = cat("U:2,3");
        // contract set not independent
        let w = MinorWitness { contract: vec![0, 1, 2], delete: vec![], bijection: vec![3] };
        assert!(!verify_witness(&host, &cat("loops:1"), &w));
        // not a partition of the ground set
        let w = MinorWitness { contract: vec![], delete: vec![0], bijection: vec![1, 2, 2] };
        assert!(!verify_witness(&host, &target, &w));

        // a host where the bijection matters: U_{1,2} ⊕ free:1 on {0,1 | 2}, target
        // free:1 ⊕ U_{1,2} on {0 | 1,2}
        let host = Matroid::from_bases(4, [0b0101, 0b0110]).unwrap(); // 0,1 parallel; 2 coloop; 3 loop
        let target = Matroid::from_bases(3, [0b011, 0b101]).unwrap(); // 0 coloop; 1,2 parallel
        let good = MinorWitness { contract: vec![], delete: vec![3], bijection: vec![2, 0, 1] };
        assert!(verify_witness(&host, &target, &good));
        let swapped = MinorWitness { contract: vec![], delete: vec![3], bijection: vec![0, 2, 1] };
        assert!(!verify_witness(&host, &target, &swapped));
    }

    #[test]
    fn contraction_is_needed() {
        // U_{1,3} is a minor of U_{2,4} only by contracting one element
        let host = cat("U:2,4");
        let target = cat("U:1,3");
        let MinorOutcome::Found(w) = find_minor(&host, &target, limits()) else { panic!() };
        assert_eq!((w.contract.len(), w.delete.len()), (1, 0));
        assert!(verify_witness(&host, &target, &w));
    }

    #[test]
    fn loops_in_target_need_closure_elements() {
        // a loop in the target can come from contracting a parallel element
        let host = cat("U:1,2");
        let target = cat("loops:1");
        let MinorOutcome::Found(w) = find_minor(&host, &target, limits()) else { panic!() };
        assert_eq!((w.contract.len(), w.bijection.len()), (1, 1));
        assert_ne!(w.contract[0], w.bijection[0]);
        assert!(verify_witness(&host, &target, &w));
        assert_eq!(find_minor(&cat("free:3"), &target, limits()), MinorOutcome::Absent);
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let tiny = SearchLimits { budget: 2 };
        assert_eq!(find_minor(&cat("MK5*"), &cat("F7"), tiny), MinorOutcome::Unknown);
        assert_eq!(find_minor(&cat("MK5*"), &cat("F7"), limits()), MinorOutcome::Absent);
    }

    #[test]
    fn graphic_class_examples() {
        let k4 = Matroid::from_graph(&complete_graph(4)).unwrap();
        let report = has_excluded_minor(HostRef::Matroid(&k4), "graphic", limits(), false).unwrap();
        assert_eq!(report.is_member(), Some(true));

        let u24 = cat("U:2,4");
        let report = has_excluded_minor(HostRef::Matroid(&u24), "graphic", limits(), false).unwrap();
        assert_eq!(report.found(), vec!["U:2,4"]);
        assert_eq!(report.is_member(), Some(false));

        let a = fano_matrix();
        let report = has_excluded_minor(HostRef::Matrix(&a), "graphic", limits(), false).unwrap();
        assert_eq!(report.found(), vec!["F7"]);
        assert!(report.results[0].by_theorem);

        assert!(matches!(
            has_excluded_minor(HostRef::Matroid(&k4), "planar", limits(), false),
            Err(MinorError::UnknownClass(_))
        ));
    }

    #[test]
    fn excluded_minors_of_each_other() {
        // the five excluded minors are pairwise minor-incomparable
        for a in GRAPHIC_EXCLUDED {
            for b in GRAPHIC_EXCLUDED {
                let found = find_minor(&cat(a), &cat(b), limits()).is_found();
                assert_eq!(found, a == b, "{b} in {a}");
            }
        }
    }

    #[test]
    fn matrix_host_over_gf3() {
        let f = Field::new(3).unwrap();
        // U_{2,4} over GF(3): columns e1, e2, e1+e2, e1+2e2
        let a = FqMatrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        let target = cat("U:2,4");
        let MinorOutcome::Found(w) = find_minor_in_matrix(&a, &target, limits()).unwrap() else { panic!() };
        assert!(verify_witness_matrix(&a, &target, &w));
        let too_big = FqMatrix::zeros(&f, 1, 65);
        assert_eq!(find_minor_in_matrix(&too_big, &target, limits()), Err(MinorError::HostTooLarge(65)));
    }

    #[test]
    fn wide_matrix_host() {
        let f = Field::new(2).unwrap();
        // identity on 38 columns, then two copies of the last unit vector
        let mut a = FqMatrix::zeros(&f, 38, 40);
        for i in 0..38 {
            a.set(i, i, 1);
        }
        a.set(37, 38, 1);
        a.set(37, 39, 1);
        let target = cat("U:1,3");
        let MinorOutcome::Found(w) = find_minor_in_matrix(&a, &target, limits()).unwrap() else { panic!() };
        assert_eq!(w.contract.len() + w.delete.len() + 3, 40);
        assert!(verify_witness_matrix(&a, &target, &w));
        assert_eq!(find_minor_in_matrix(&a, &cat("U:1,4"), limits()).unwrap(), MinorOutcome::Absent);
    }
}
