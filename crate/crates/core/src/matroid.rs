//! Matroids on at most 20 elements, stored by their explicit basis family.
//!
//! Element subsets are `u32` bitmasks. Minors relabel surviving elements to
//! `0..k` in their original order.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf::Field;
use crate::matrix::FqMatrix;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 20;

/// A subset of the ground set as a bitmask.
pub type ElementSet = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of {0} elements exceeds the limit of {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("unknown matroid name `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("contraction and deletion sets overlap")]
    OverlappingSets,
    #[error("element {0} is outside the ground set")]
    ElementOutOfRange(usize),
    #[error("invalid basis family: {0}")]
    InvalidBases(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    ground: usize,
    rank: usize,
    /// Sorted, deduplicated.
    bases: Vec<ElementSet>,
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matroid(E={}, r={}, bases={})", self.ground, self.rank, self.bases.len())
    }
}

/// Ground-set size, rank and loop count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MatroidStats {
    pub e: usize,
    pub r: usize,
    pub l: usize,
}

impl MatroidStats {
    /// Checks the relations every matroid satisfies between |E|, r and the loops.
    pub fn is_consistent(&self) -> bool {
        self.r <= self.e && self.l <= self.e - self.r && (self.r > 0 || self.l == self.e)
    }
}

pub fn set_from_elements(elems: &[usize]) -> ElementSet {
    elems.iter().fold(0, |acc, &e| acc | (1 << e))
}

pub fn elements_of(set: ElementSet) -> Vec<usize> {
    (0..32).filter(|&i| set & (1 << i) != 0).collect()
}

/// Packs the bits of `set` that lie in `keep` into consecutive low bits.
fn compress(set: ElementSet, keep: ElementSet) -> ElementSet {
    let mut out = 0;
    let mut pos = 0;
    let mut k = keep;
    while k != 0 {
        let low = k & k.wrapping_neg();
        if set & low != 0 {
            out |= 1 << pos;
        }
        pos += 1;
        k &= k - 1;
    }
    out
}

fn full(ground: usize) -> ElementSet {
    if ground == 32 {
        u32::MAX
    } else {
        (1u32 << ground) - 1
    }
}

/// Calls `f` on every `k`-subset of `0..n`, in colexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(ElementSet)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut x: u64 = (1 << k) - 1;
    let limit: u64 = 1 << n;
    while x < limit {
        f(x as ElementSet);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

impl Matroid {
    /// Builds a matroid from a basis family, checking sizes and ranges. The
    /// exchange axiom is not checked here; see [`Matroid::satisfies_basis_exchange`].
    pub fn from_bases(ground: usize, bases: impl IntoIterator<Item = ElementSet>) -> Result<Self, MatroidError> {
        if ground > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(ground));
        }
        let mut bases: Vec<ElementSet> = bases.into_iter().collect();
        bases.sort_unstable();
        bases.dedup();
        let Some(&first) = bases.first() else {
            return Err(MatroidError::InvalidBases("no bases".into()));
        };
        let rank = first.count_ones() as usize;
        if let Some(b) = bases.iter().find(|b| b.count_ones() as usize != rank) {
            return Err(MatroidError::InvalidBases(format!("basis {:?} has the wrong size", elements_of(*b))));
        }
        if let Some(b) = bases.iter().find(|&&b| b & !full(ground) != 0) {
            return Err(MatroidError::InvalidBases(format!("basis {:?} leaves the ground set", elements_of(*b))));
        }
        Ok(Matroid { ground, rank, bases })
    }

    pub fn uniform(rank: usize, ground: usize) -> Result<Self, MatroidError> {
        if rank > ground {
            return Err(MatroidError::BadParameters(format!("U:{rank},{ground} needs rank <= size")));
        }
        if ground > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(ground));
        }
        let mut bases = Vec::new();
        for_each_subset(ground, rank, |s| bases.push(s));
        Self::from_bases(ground, bases)
    }

    pub fn free(ground: usize) -> Result<Self, MatroidError> {
        Self::uniform(ground, ground)
    }

    /// Column-dependence matroid of a matrix.
    pub fn from_matrix(a: &FqMatrix) -> Result<Self, MatroidError> {
        let n = a.cols();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        let r = a.rank();
        let mut bases = Vec::new();
        for_each_subset(n, r, |s| {
            let cols = elements_of(s);
            if a.select_columns(&cols).expect("columns in range").rank() == r {
                bases.push(s);
            }
        });
        Self::from_bases(n, bases)
    }

    /// Cycle matroid of a multigraph given by its edge list. Self-loops become
    /// matroid loops and parallel edges parallel elements.
    pub fn from_graph(edges: &[(usize, usize)]) -> Result<Self, MatroidError> {
        if edges.len() > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(edges.len()));
        }
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let forest = |set: ElementSet| -> usize {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut size = 0;
            for e in elements_of(set) {
                let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
                if a != b {
                    parent[a] = b;
                    size += 1;
                }
            }
            size
        };
        let rank = forest(full(edges.len()));
        let mut bases = Vec::new();
        for_each_subset(edges.len(), rank, |s| {
            if forest(s) == rank {
                bases.push(s);
            }
        });
        Self::from_bases(edges.len(), bases)
    }

    /// Named matroids: `U:k,n`, `free:n`, `loops:n`, `F7`, `F7*`, `MK4`,
    /// `MK5`, `MK5*`, `MK33`, `MK33*`. A leading `name:` is ignored.
    pub fn catalog(name: &str) -> Result<Self, MatroidError> {
        let name = name.trim();
        let name = name.strip_prefix("name:").unwrap_or(name);
        let num = |s: &str| -> Result<usize, MatroidError> {
            s.trim().parse().map_err(|_| MatroidError::BadParameters(format!("`{s}` in `{name}`")))
        };
        if let Some(rest) = name.strip_prefix("U:") {
            let (k, n) = rest
                .split_once(',')
                .ok_or_else(|| MatroidError::BadParameters(format!("expected U:k,n, got `{name}`")))?;
            return Self::uniform(num(k)?, num(n)?);
        }
        if let Some(n) = name.strip_prefix("free:") {
            return Self::free(num(n)?);
        }
        if let Some(n) = name.strip_prefix("loops:") {
            return Self::uniform(0, num(n)?);
        }
        match name {
            "F7" => Self::from_matrix(&fano_matrix()),
            "F7*" => Ok(Self::from_matrix(&fano_matrix())?.dual()),
            "MK4" => Self::from_graph(&complete_graph(4)),
            "MK5" => Self::from_graph(&complete_graph(5)),
            "MK5*" => Ok(Self::from_graph(&complete_graph(5))?.dual()),
            "MK33" => Self::from_graph(&complete_bipartite(3, 3)),
            "MK33*" => Ok(Self::from_graph(&complete_bipartite(3, 3))?.dual()),
            _ => Err(MatroidError::UnknownName(name.to_string())),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn is_basis(&self, set: ElementSet) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    pub fn is_independent(&self, set: ElementSet) -> bool {
        self.bases.iter().any(|&b| b & set == set)
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, set: ElementSet) -> usize {
        self.bases.iter().map(|&b| (b & set).count_ones() as usize).max().unwrap_or(0)
    }

    /// Elements lying in no basis.
    pub fn loops(&self) -> ElementSet {
        let covered = self.bases.iter().fold(0, |acc, &b| acc | b);
        full(self.ground) & !covered
    }

    /// Elements lying in every basis.
    pub fn coloops(&self) -> ElementSet {
        self.bases.iter().fold(full(self.ground), |acc, &b| acc & b)
    }

    pub fn stats(&self) -> MatroidStats {
        MatroidStats { e: self.ground, r: self.rank, l: self.loops().count_ones() as usize }
    }

    pub fn is_free(&self) -> bool {
        self.bases.len() == 1 && self.bases[0] == full(self.ground)
    }

    pub fn dual(&self) -> Matroid {
        let all = full(self.ground);
        let mut bases: Vec<ElementSet> = self.bases.iter().map(|&b| all & !b).collect();
        bases.sort_unstable();
        Matroid { ground: self.ground, rank: self.ground - self.rank, bases }
    }

    fn check_set(&self, elems: &[usize]) -> Result<ElementSet, MatroidError> {
        if let Some(&e) = elems.iter().find(|&&e| e >= self.ground) {
            return Err(MatroidError::ElementOutOfRange(e));
        }
        Ok(set_from_elements(elems))
    }

    /// `M / C \ D`, relabelled to `0..|E|-|C|-|D|` in original order.
    pub fn minor(&self, contract: &[usize], delete: &[usize]) -> Result<Matroid, MatroidError> {
        let c = self.check_set(contract)?;
        let d = self.check_set(delete)?;
        if c & d != 0 {
            return Err(MatroidError::OverlappingSets);
        }
        Ok(self.minor_sets(c, d))
    }

    pub fn contract(&self, elems: &[usize]) -> Result<Matroid, MatroidError> {
        self.minor(elems, &[])
    }

    pub fn delete(&self, elems: &[usize]) -> Result<Matroid, MatroidError> {
        self.minor(&[], elems)
    }

    pub(crate) fn minor_sets(&self, c: ElementSet, d: ElementSet) -> Matroid {
        // bases of M/C meet C in a basis of C; bases of M\D avoid D as far as possible
        let rc = self.rank_of(c);
        let after_contract: Vec<ElementSet> =
            self.bases.iter().copied().filter(|&b| (b & c).count_ones() as usize == rc).collect();
        let min_d = after_contract.iter().map(|&b| (b & d).count_ones()).min().unwrap_or(0);
        let keep = full(self.ground) & !c & !d;
        let mut bases: Vec<ElementSet> = after_contract
            .into_iter()
            .filter(|&b| (b & d).count_ones() == min_d)
            .map(|b| compress(b, keep))
            .collect();
        bases.sort_unstable();
        bases.dedup();
        let rank = bases[0].count_ones() as usize;
        Matroid { ground: keep.count_ones() as usize, rank, bases }
    }

    /// Direct sum with `k` extra loops appended after the existing elements.
    pub fn with_loops(&self, k: usize) -> Result<Matroid, MatroidError> {
        if self.ground + k > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(self.ground + k));
        }
        Ok(Matroid { ground: self.ground + k, rank: self.rank, bases: self.bases.clone() })
    }

    /// Image under `perm`, where element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Matroid, MatroidError> {
        let mut seen = vec![false; self.ground];
        if perm.len() != self.ground || perm.iter().any(|&p| p >= self.ground || std::mem::replace(&mut seen[p], true)) {
            return Err(MatroidError::BadParameters("relabelling is not a permutation".into()));
        }
        let bases = self.bases.iter().map(|&b| map_set(b, perm));
        Matroid::from_bases(self.ground, bases)
    }

    /// `table[X]` is true iff `X` is independent.
    pub fn independence_table(&self) -> Vec<bool> {
        let size = 1usize << self.ground;
        let mut indep = vec![false; size];
        for &b in &self.bases {
            indep[b as usize] = true;
        }
        for x in (0..size).rev() {
            if indep[x] {
                continue;
            }
            let mut missing = !x & (size - 1);
            while missing != 0 {
                let bit = missing & missing.wrapping_neg();
                if indep[x | bit] {
                    indep[x] = true;
                    break;
                }
                missing &= missing - 1;
            }
        }
        indep
    }

    /// All circuits (minimal dependent sets).
    pub fn circuits(&self) -> Vec<ElementSet> {
        circuits_from_table(&self.independence_table())
    }

    /// Exhaustive check of the basis-exchange axiom.
    pub fn satisfies_basis_exchange(&self) -> bool {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                let mut only1 = b1 & !b2;
                while only1 != 0 {
                    let x = only1 & only1.wrapping_neg();
                    only1 &= only1 - 1;
                    let mut only2 = b2 & !b1;
                    let mut ok = false;
                    while only2 != 0 {
                        let y = only2 & only2.wrapping_neg();
                        only2 &= only2 - 1;
                        if self.is_basis((b1 & !x) | y) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matroid text format: `E r` header, then one basis per line.
    pub fn parse(text: &str) -> Result<Matroid, MatroidError> {
        let perr = |line: usize, column: usize, message: String| MatroidError::Parse { line, column, message };
        let mut lines = text.lines().enumerate();
        let (hl, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| perr(1, 1, "missing header `E r`".into()))?;
        let head = tokens(header);
        if head.len() != 2 {
            return Err(perr(hl + 1, 1, "header must be `E r`".into()));
        }
        let parse_tok = |lno: usize, (col, tok): &(usize, &str)| -> Result<usize, MatroidError> {
            tok.parse().map_err(|_| perr(lno, *col, format!("invalid number `{tok}`")))
        };
        let e = parse_tok(hl + 1, &head[0])?;
        let r = parse_tok(hl + 1, &head[1])?;
        if e > MAX_GROUND {
            return Err(perr(hl + 1, head[0].0, format!("ground set of {e} exceeds {MAX_GROUND}")));
        }
        if r > e {
            return Err(perr(hl + 1, head[1].0, format!("rank {r} exceeds ground size {e}")));
        }
        let mut bases = Vec::new();
        for (lno, line) in lines {
            let toks = tokens(line);
            if toks.is_empty() && r > 0 {
                continue;
            }
            let mut set: ElementSet = 0;
            for t in &toks {
                let x = parse_tok(lno + 1, t)?;
                if x >= e {
                    return Err(perr(lno + 1, t.0, format!("element {x} outside ground set of size {e}")));
                }
                set |= 1 << x;
            }
            if set.count_ones() as usize != r || toks.len() != r {
                return Err(perr(lno + 1, 1, format!("basis must list {r} distinct elements")));
            }
            bases.push(set);
        }
        if r == 0 {
            bases = vec![0];
        }
        let m = Matroid::from_bases(e, bases)?;
        if !m.satisfies_basis_exchange() {
            return Err(MatroidError::InvalidBases("basis exchange axiom fails".into()));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.ground, self.rank);
        let mut rows: Vec<Vec<usize>> = self.bases.iter().map(|&b| elements_of(b)).collect();
        rows.sort();
        for row in rows {
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

pub(crate) fn map_set(set: ElementSet, perm: &[usize]) -> ElementSet {
    let mut out = 0;
    let mut s = set;
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        out |= 1 << perm[i];
        s &= s - 1;
    }
    out
}

pub(crate) fn circuits_from_table(indep: &[bool]) -> Vec<ElementSet> {
    let mut out = Vec::new();
    for (x, &ind) in indep.iter().enumerate() {
        if ind {
            continue;
        }
        let mut rest = x;
        let mut minimal = true;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if !indep[x & !bit] {
                minimal = false;
                break;
            }
            rest &= rest - 1;
        }
        if minimal {
            out.push(x as ElementSet);
        }
    }
    out
}

/// The 3x7 binary matrix whose columns are the nonzero vectors of GF(2)^3;
/// column `j` is the binary expansion of `j + 1`, least significant bit in row 0.
pub fn fano_matrix() -> FqMatrix {
    let f = Field::new(2).expect("GF(2)");
    let data = (0..3).flat_map(|i| (1..8u8).map(move |v| (v >> i) & 1)).collect();
    FqMatrix::new(&f, 3, 7, data).expect("fano matrix")
}

pub fn complete_graph(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn complete_bipartite(a: usize, b: usize) -> Vec<(usize, usize)> {
    (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect()
}

/// Per-element invariants that any isomorphism must preserve.
fn element_signatures(m: &Matroid, circuits: &[ElementSet]) -> Vec<Vec<usize>> {
    let mut sig = vec![vec![0usize; m.ground + 2]; m.ground];
    for &b in &m.bases {
        for e in elements_of(b) {
            sig[e][0] += 1;
        }
    }
    for &c in circuits {
        let size = c.count_ones() as usize;
        for e in elements_of(c) {
            sig[e][1 + size] += 1;
        }
    }
    sig
}

/// Searches for a bijection `f` (element `i` of `a` maps to `f[i]` of `b`)
/// carrying the bases of `a` exactly onto the bases of `b`.
pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    if a.ground != b.ground || a.rank != b.rank || a.bases.len() != b.bases.len() {
        return None;
    }
    let ca = a.circuits();
    let cb = b.circuits();
    if ca.len() != cb.len() {
        return None;
    }
    let sa = element_signatures(a, &ca);
    let sb = element_signatures(b, &cb);
    let mut ms = sa.clone();
    let mut mb = sb.clone();
    ms.sort();
    mb.sort();
    if ms != mb {
        return None;
    }

    // rarest signatures first
    let mut order: Vec<usize> = (0..a.ground).collect();
    order.sort_by_key(|&e| (sb.iter().filter(|s| **s == sa[e]).count(), e));
    let pos_of: Vec<usize> = {
        let mut p = vec![0; a.ground];
        for (i, &e) in order.iter().enumerate() {
            p[e] = i;
        }
        p
    };
    // circuits of `a` grouped by the position of their last element in `order`
    let mut closing: Vec<Vec<ElementSet>> = vec![Vec::new(); a.ground];
    for &c in &ca {
        let last = elements_of(c).into_iter().map(|e| pos_of[e]).max().expect("nonempty circuit");
        closing[last].push(c);
    }
    let circuits_b: HashSet<ElementSet> = cb.into_iter().collect();

    let mut map = vec![usize::MAX; a.ground];
    let mut used = vec![false; b.ground];
    if iso_search(0, &order, &closing, &sa, &sb, &circuits_b, &mut map, &mut used) {
        debug_assert!(a.bases.iter().all(|&x| b.is_basis(map_set(x, &map))));
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    depth: usize,
    order: &[usize],
    closing: &[Vec<ElementSet>],
    sa: &[Vec<usize>],
    sb: &[Vec<usize>],
    circuits_b: &HashSet<ElementSet>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let e = order[depth];
    for t in 0..used.len() {
        if used[t] || sa[e] != sb[t] {
            continue;
        }
        map[e] = t;
        let consistent = closing[depth].iter().all(|&c| circuits_b.contains(&map_set(c, map)));
        if consistent {
            used[t] = true;
            if iso_search(depth + 1, order, closing, sa, sb, circuits_b, map, used) {
                return true;
            }
            used[t] = false;
        }
        map[e] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2(rows: &[&[u8]]) -> FqMatrix {
        FqMatrix::from_rows(&Field::new(2).unwrap(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn from_matrix_examples() {
        let f = Field::new(2).unwrap();
        assert_eq!(Matroid::from_matrix(&FqMatrix::identity(&f, 2)).unwrap(), Matroid::free(2).unwrap());
        assert_eq!(Matroid::from_matrix(&gf2(&[&[1, 1]])).unwrap(), Matroid::uniform(1, 2).unwrap());
        let m = Matroid::from_matrix(&gf2(&[&[1, 0, 1], &[0, 0, 1]])).unwrap();
        assert_eq!(m.loops(), 0b010);
        assert_eq!(m.stats(), MatroidStats { e: 3, r: 2, l: 1 });
        assert!(matches!(Matroid::from_matrix(&FqMatrix::zeros(&f, 1, 21)), Err(MatroidError::GroundTooLarge(21))));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Matroid::uniform(1, 3).unwrap().dual(), Matroid::uniform(2, 3).unwrap());
        assert_eq!(Matroid::free(4).unwrap().dual(), Matroid::uniform(0, 4).unwrap());
        let f7 = Matroid::catalog("F7").unwrap();
        let d = f7.dual();
        assert_eq!((d.ground_size(), d.rank(), d.bases().len()), (7, 4, 28));
        assert_eq!(d.dual(), f7);
    }

    #[test]
    fn graph_examples() {
        assert_eq!(Matroid::from_graph(&complete_graph(3)).unwrap(), Matroid::uniform(2, 3).unwrap());
        let looped = Matroid::from_graph(&[(0, 0)]).unwrap();
        assert_eq!((looped.ground_size(), looped.rank()), (1, 0));
        let k4 = Matroid::from_graph(&complete_graph(4)).unwrap();
        assert_eq!((k4.ground_size(), k4.rank(), k4.bases().len()), (6, 3, 16));
        // parallel edges are parallel elements
        let par = Matroid::from_graph(&[(0, 1), (0, 1)]).unwrap();
        assert_eq!(par, Matroid::uniform(1, 2).unwrap());
        let k5 = Matroid::catalog("MK5").unwrap();
        assert_eq!(k5.bases().len(), 125); // 5^3 spanning trees
        let k33 = Matroid::catalog("MK33").unwrap();
        assert_eq!(k33.bases().len(), 81); // 3^2 * 3^2
    }

    #[test]
    fn catalog_examples() {
        let u24 = Matroid::catalog("U:2,4").unwrap();
        assert_eq!((u24.rank(), u24.ground_size(), u24.bases().len()), (2, 4, 6));
        assert_eq!(Matroid::catalog("free:3").unwrap(), Matroid::uniform(3, 3).unwrap());
        assert_eq!(Matroid::catalog("name:free:3").unwrap(), Matroid::uniform(3, 3).unwrap());
        let f7 = Matroid::catalog("F7").unwrap();
        assert_eq!((f7.rank(), f7.ground_size(), f7.bases().len()), (3, 7, 28));
        let k5d = Matroid::catalog("MK5*").unwrap();
        assert_eq!((k5d.rank(), k5d.ground_size()), (6, 10));
        let k33d = Matroid::catalog("MK33*").unwrap();
        assert_eq!((k33d.rank(), k33d.ground_size()), (4, 9));
        assert!(matches!(Matroid::catalog("K9"), Err(MatroidError::UnknownName(_))));
        assert!(matches!(Matroid::catalog("U:3,2"), Err(MatroidError::BadParameters(_))));
        assert!(matches!(Matroid::catalog("U:a,2"), Err(MatroidError::BadParameters(_))));
        assert!(matches!(Matroid::catalog("free:21"), Err(MatroidError::GroundTooLarge(21))));
    }

    #[test]
    fn minor_examples() {
        let u24 = Matroid::uniform(2, 4).unwrap();
        assert_eq!(u24.delete(&[3]).unwrap(), Matroid::uniform(2, 3).unwrap());
        assert_eq!(u24.contract(&[0]).unwrap(), Matroid::uniform(1, 3).unwrap());
        assert_eq!(u24.minor(&[0], &[0]), Err(MatroidError::OverlappingSets));
        assert_eq!(u24.contract(&[7]), Err(MatroidError::ElementOutOfRange(7)));
        assert!(Matroid::free(3).unwrap().is_free());
        assert!(!Matroid::uniform(2, 3).unwrap().is_free());
        // contracting a loop leaves it deleted; deleting a coloop drops rank
        let m = Matroid::free(2).unwrap().with_loops(1).unwrap();
        assert_eq!(m.contract(&[2]).unwrap(), Matroid::free(2).unwrap());
        assert_eq!(m.delete(&[0]).unwrap(), Matroid::free(1).unwrap().with_loops(1).unwrap());
    }

    #[test]
    fn basis_exchange_holds_for_constructions() {
        for name in ["U:2,5", "F7", "F7*", "MK4", "MK5*", "MK33*", "loops:3"] {
            assert!(Matroid::catalog(name).unwrap().satisfies_basis_exchange(), "{name}");
        }
        let bad = Matroid::from_bases(4, [0b0011, 0b1100]).unwrap();
        assert!(!bad.satisfies_basis_exchange());
    }

    #[test]
    fn isomorphism_examples() {
        let f7 = Matroid::catalog("F7").unwrap();
        assert!(is_isomorphic(&f7, &f7).is_some());
        assert!(is_isomorphic(&Matroid::uniform(1, 2).unwrap(), &Matroid::free(2).unwrap()).is_none());
        let m = Matroid::from_matrix(&gf2(&[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        assert!(is_isomorphic(&m, &Matroid::uniform(2, 3).unwrap()).is_some());
        // F7 and its dual differ in rank; K4 is not isomorphic to U_{3,6}
        assert!(is_isomorphic(&f7, &f7.dual()).is_none());
        assert!(is_isomorphic(&Matroid::catalog("MK4").unwrap(), &Matroid::uniform(3, 6).unwrap()).is_none());
        // relabelled copies are found and the returned map is exact
        let perm = [3, 6, 0, 5, 1, 2, 4];
        let g = f7.relabel(&perm).unwrap();
        let map = is_isomorphic(&f7, &g).unwrap();
        assert!(f7.bases().iter().all(|&b| g.is_basis(map_set(b, &map))));
    }

    #[test]
    fn text_roundtrip() {
        for name in ["F7", "loops:2", "U:0,0", "MK4"] {
            let m = Matroid::catalog(name).unwrap();
            assert_eq!(Matroid::parse(&m.to_text()).unwrap(), m, "{name}");
        }
        assert!(matches!(Matroid::parse("3 2\n0 1\n0 5\n"), Err(MatroidError::Parse { line: 3, column: 3, .. })));
        assert!(matches!(Matroid::parse("4 2\n0 1\n2 3\n"), Err(MatroidError::InvalidBases(_))));
        assert!(matches!(Matroid::parse("3 2\n0 1 2\n"), Err(MatroidError::Parse { line: 2, .. })));
    }

    #[test]
    fn dual_representation_matches_dual() {
        use crate::matrix::dual_representation;
        use crate::sampler::{sample_matrix, SeedSpec};
        for q in [2, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            for i in 0..40 {
                let (m, n) = (1 + (i % 4) as usize, 1 + (i % 7) as usize);
                let a = sample_matrix(&f, m, n, SeedSpec::new(q as u64, i));
                let d = dual_representation(&a);
                assert_eq!(Matroid::from_matrix(&d).unwrap(), Matroid::from_matrix(&a).unwrap().dual(), "q={q} {a:?}");
            }
        }
    }
}
