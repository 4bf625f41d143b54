//! Dense matrices over a [`Scalar`] and the elimination routines the rest of
//! the crate is built on (rank, reduced echelon form, nullspace, inverse).
//!
//! Pivots are chosen per column by [`Scalar::pivot_score`]: shortest
//! numerator/denominator bit length for rationals, largest magnitude for
//! floats. The reduced echelon form is unique, so the pivot rule only affects
//! intermediate growth, never the output.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self[(i, i)].clone();
        }
        t
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() && S::EXACT {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    out.data[i * other.cols + j].add_mul(a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> S {
        assert_eq!((self.cols, self.rows), (other.rows, other.cols));
        let mut acc = S::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc.add_mul(&self[(i, k)], &other[(k, i)]);
            }
        }
        acc
    }

    /// Largest absolute entry, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| serde_json::Value::Array(self.row(r).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    /// Reduced row echelon form. Returns the reduced matrix and its pivot
    /// columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let best = (lead..m.rows)
                .filter(|&r| !m[(r, col)].is_zero())
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .pivot_score()
                        .partial_cmp(&m[(b, col)].pivot_score())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        // earliest row wins ties
                        .then(b.cmp(&a))
                });
            let Some(p) = best else {
                if !S::EXACT {
                    for r in lead..m.rows {
                        m[(r, col)] = S::zero();
                    }
                }
                continue;
            };
            m.swap_rows(lead, p);
            let inv = S::one() / m[(lead, col)].clone();
            for c in col..m.cols {
                let v = m[(lead, c)].clone() * inv.clone();
                m[(lead, c)] = v;
            }
            m[(lead, col)] = S::one();
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m[(r, col)].clone();
                if factor.is_zero() {
                    if !S::EXACT {
                        m[(r, col)] = S::zero();
                    }
                    continue;
                }
                for c in col..m.cols {
                    let pivot_entry = m[(lead, c)].clone();
                    if pivot_entry.is_zero() && S::EXACT {
                        continue;
                    }
                    let v = m[(r, c)].clone() - factor.clone() * pivot_entry;
                    m[(r, c)] = v;
                }
                m[(r, col)] = S::zero();
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column, in
    /// increasing free-column order. Each vector has a 1 in its free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis for the
    /// row space.
    pub fn row_space_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let best = (col..n)
                .filter(|&r| !m[(r, col)].is_zero())
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .pivot_score()
                        .partial_cmp(&m[(b, col)].pivot_score())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(b.cmp(&a))
                });
            let Some(p) = best else { return S::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                let factor = m[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[(r, c)].clone() - factor.clone() * m[(col, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

/// `diag(a, b, ...)` for diagonal square matrices, `[r1; r2; ...]` otherwise.
impl<S: Scalar> std::fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &mut dyn Iterator<Item = &S>| v.map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let diagonal = (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()));
        if diagonal && self.is_square() {
            return write!(f, "diag({})", join(&mut (0..self.rows).map(|i| &self[(i, i)])));
        }
        let rows: Vec<String> = (0..self.rows).map(|r| join(&mut self.row(r).iter())).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Incrementally maintained echelon basis; used to track the dimension of a
/// growing span without re-eliminating from scratch.
#[derive(Clone, Debug)]
pub struct SpanTracker<S> {
    width: usize,
    // (pivot column, normalized row)
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> SpanTracker<S> {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds `v` to the span; returns true if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.width);
        if self.is_full() {
            return false;
        }
        for (pc, row) in &self.rows {
            let f = v[*pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if r.is_zero() && S::EXACT {
                    continue;
                }
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        let best = (0..self.width).filter(|&c| !v[c].is_zero()).max_by(|&a, &b| {
            v[a].pivot_score()
                .partial_cmp(&v[b].pivot_score())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.cmp(&a))
        });
        let Some(pc) = best else { return false };
        let inv = S::one() / v[pc].clone();
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        self.rows.push((pc, v));
        true
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[S]) -> bool {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            let f = w[*pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        w.iter().all(Scalar::is_zero)
    }
}
