//! Dense matrices over GF(q).
//!
//! Entries are element codes of the owning [`Field`], stored row-major. Zero-row
//! and zero-column matrices are legal everywhere and have rank 0.

use std::fmt;

use thiserror::Error;

use crate::gf::{Field, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("column {0} is not a unit column")]
    NotUnitColumn(usize),
    #[error("unit columns share pivot row {0}")]
    DuplicatePivotRow(usize),
    #[error("column index {0} out of range")]
    ColumnOutOfRange(usize),
    #[error("entry {value} is not an element of GF({q})")]
    InvalidEntry { value: u32, q: u32 },
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl FqMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x as u32 >= field.q()) {
            return Err(MatrixError::InvalidEntry { value: bad as u32, q: field.q() });
        }
        Ok(FqMatrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        FqMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        assert!((value as u32) < self.field.q());
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            data.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        FqMatrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    /// Submatrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<FqMatrix, MatrixError> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(MatrixError::ColumnOutOfRange(bad));
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Ok(FqMatrix { field: self.field.clone(), rows: self.rows, cols: cols.len(), data })
    }

    pub fn select_rows(&self, rows: &[usize]) -> FqMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        FqMatrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j) == 0)
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination. GF(2) uses packed rows.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.field.q() == 2 {
            return gf2_rank(self);
        }
        self.rref().1.len()
    }

    /// Reduced row-echelon form and its pivot columns (first nonzero pivot).
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = &self.field;
        let mut r = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..r.cols {
            if lead == r.rows {
                break;
            }
            let Some(pr) = (lead..r.rows).find(|&i| r.get(i, col) != 0) else {
                continue;
            };
            r.swap_rows(pr, lead);
            let inv = f.inv_nonzero(r.get(lead, col));
            r.scale_row(lead, inv);
            for i in 0..r.rows {
                let factor = r.get(i, col);
                if i != lead && factor != 0 {
                    r.add_row_multiple(i, lead, f.neg(factor));
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (r, pivots)
    }

    pub fn inverse(&self) -> Result<FqMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = FqMatrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(MatrixError::NotInvertible);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        r.select_columns(&cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: u8) {
        let f = self.field.clone();
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, c);
        }
    }

    // row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: u8) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + j];
                *d = f.add(*d, f.mul(c, s));
            }
        }
    }

    /// Row index of the single nonzero entry if column `j` is a standard basis vector.
    pub fn unit_pivot(&self, j: usize) -> Option<usize> {
        let mut pivot = None;
        for i in 0..self.rows {
            match self.get(i, j) {
                0 => {}
                1 if pivot.is_none() => pivot = Some(i),
                _ => return None,
            }
        }
        pivot
    }

    /// Delete the listed unit columns together with the rows holding their
    /// nonzero entries. The column matroid of the result is the contraction of
    /// the original by those columns, on the surviving columns in order.
    pub fn contract_unit_columns(&self, cols: &[usize]) -> Result<FqMatrix, MatrixError> {
        let mut pivot_rows = Vec::with_capacity(cols.len());
        let mut seen_cols = vec![false; self.cols];
        for &c in cols {
            if c >= self.cols {
                return Err(MatrixError::ColumnOutOfRange(c));
            }
            if std::mem::replace(&mut seen_cols[c], true) {
                return Err(MatrixError::DimensionMismatch(format!("column {c} listed twice")));
            }
            let r = self.unit_pivot(c).ok_or(MatrixError::NotUnitColumn(c))?;
            if pivot_rows.contains(&r) {
                return Err(MatrixError::DuplicatePivotRow(r));
            }
            pivot_rows.push(r);
        }
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !pivot_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|&c| !seen_cols[c]).collect();
        self.select_rows(&keep_rows).select_columns(&keep_cols)
    }

    /// Matrix text format: a `q m n` header line followed by `m` lines of `n`
    /// whitespace-separated element codes.
    pub fn parse(text: &str) -> Result<FqMatrix, MatrixError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, 1, "missing header line `q m n`"))?;
        let nums = parse_numbers(header, hline + 1)?;
        if nums.len() != 3 {
            return Err(parse_err(hline + 1, 1, "header must be `q m n`"));
        }
        let (q, m, n) = (nums[0].0, nums[1].0 as usize, nums[2].0 as usize);
        let field = Field::new(q as u32).map_err(|e| parse_err(hline + 1, nums[0].1, &e.to_string()))?;
        let mut data = Vec::with_capacity(m * n);
        let mut last_line = hline + 1;
        // with n = 0 the rows are empty lines, which the filter above drops
        if n > 0 {
            for row in 0..m {
                let (lno, line) = lines.next().ok_or_else(|| {
                    parse_err(last_line + 1, 1, &format!("expected {m} rows, found {row}"))
                })?;
                last_line = lno + 1;
                let vals = parse_numbers(line, lno + 1)?;
                if vals.len() != n {
                    return Err(parse_err(lno + 1, 1, &format!("expected {n} entries, found {}", vals.len())));
                }
                for (v, col) in vals {
                    if v >= q {
                        return Err(parse_err(lno + 1, col, &format!("{v} is not an element of GF({q})")));
                    }
                    data.push(v as u8);
                }
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(parse_err(lno + 1, 1, "unexpected trailing data"));
        }
        FqMatrix::new(&field, m, n, data)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q(), self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// The product `P·A` for an invertible `m x m` matrix `P`.
pub fn change_of_basis(p: &FqMatrix, a: &FqMatrix) -> Result<FqMatrix, MatrixError> {
    if p.field != a.field {
        return Err(MatrixError::FieldMismatch);
    }
    if p.rows != p.cols || p.cols != a.rows {
        return Err(MatrixError::DimensionMismatch(format!(
            "change of basis {}x{} applied to {}x{}",
            p.rows, p.cols, a.rows, a.cols
        )));
    }
    if p.rank() != p.rows {
        return Err(MatrixError::NotInvertible);
    }
    p.mul(a)
}

/// A matrix whose column matroid is the dual of the column matroid of `a`.
///
/// With `a` row-reduced to `[I | X]` on its pivot and non-pivot columns, the
/// result is `[-X^T | I]` on the same columns.
pub fn dual_representation(a: &FqMatrix) -> FqMatrix {
    let f = a.field();
    let (r, pivots) = a.rref();
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut d = FqMatrix::zeros(f, free.len(), a.cols());
    for (k, &c) in free.iter().enumerate() {
        d.set(k, c, 1);
        for (i, &p) in pivots.iter().enumerate() {
            d.set(k, p, f.neg(r.get(i, c)));
        }
    }
    d
}

/// Oriented vertex-edge incidence matrix: edge `(u, v)` gets `1` in row `u`
/// and `-1` in row `v`; self-loops give zero columns.
pub fn incidence_matrix(field: &Field, vertices: usize, edges: &[(usize, usize)]) -> Result<FqMatrix, MatrixError> {
    let mut a = FqMatrix::zeros(field, vertices, edges.len());
    for (j, &(u, v)) in edges.iter().enumerate() {
        if u >= vertices || v >= vertices {
            return Err(MatrixError::DimensionMismatch(format!("edge ({u}, {v}) with {vertices} vertices")));
        }
        if u != v {
            a.set(u, j, 1);
            a.set(v, j, field.neg(1));
        }
    }
    Ok(a)
}

fn parse_err(line: usize, column: usize, message: &str) -> MatrixError {
    MatrixError::Parse { line, column, message: message.to_string() }
}

/// Whitespace-separated unsigned integers with their 1-based column positions.
fn parse_numbers(line: &str, lno: usize) -> Result<Vec<(u64, usize)>, MatrixError> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                let tok = &line[s..i];
                let v = tok
                    .parse::<u64>()
                    .map_err(|_| parse_err(lno, s + 1, &format!("invalid number `{tok}`")))?;
                out.push((v, s + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    Ok(out)
}

fn gf2_rank(a: &FqMatrix) -> usize {
    let words = a.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| {
            let mut w = vec![0u64; words];
            for (j, &x) in a.row(i).iter().enumerate() {
                if x != 0 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..a.cols {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[wi] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Incrementally maintained span of vectors in GF(q)^dim, kept in reduced
/// echelon form so membership is a single reduction pass.
#[derive(Clone, Debug)]
pub struct Span {
    field: Field,
    dim: usize,
    basis: Vec<(usize, Vec<u8>)>,
}

impl Span {
    pub fn new(field: &Field, dim: usize) -> Self {
        Span { field: field.clone(), dim, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Component of `v` left after eliminating every basis pivot.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut w = v.to_vec();
        for (p, b) in &self.basis {
            let c = w[*p];
            if c != 0 {
                let c = f.neg(c);
                for (x, &y) in w.iter_mut().zip(b) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if it lies outside the span; returns whether it was added.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field.clone();
        let inv = f.inv_nonzero(w[p]);
        for x in &mut w {
            *x = f.mul(*x, inv);
        }
        for (_, b) in &mut self.basis {
            let c = b[p];
            if c != 0 {
                let c = f.neg(c);
                for (x, &y) in b.iter_mut().zip(&w) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
        }
        self.basis.push((p, w));
        true
    }
}
