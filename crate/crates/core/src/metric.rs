//! Nondegenerate scalar products, their signature, and the pairings they
//! induce on tensor spaces.
//!
//! A [`Metric`] stores the Gram matrix `g` (so `<v, w> = v^T g w`) together
//! with its inverse, which gives the pairing on covectors.
//!
//! The pairing on endomorphisms is `<u1, u2> = Tr(u1 . g^{-1} u2^T g)`,
//! the trace of `u1` composed with the metric transpose of `u2`. For
//! `g = diag(1, -1)` and `u1 = u2 = E_12` (the map `e_2 -> e_1`):
//! `g^{-1} E_12^T g = -E_21`, so `<E_12, E_12> = Tr(E_12 . (-E_21)) = -1`,
//! which is `eps_1 eps_2` as expected for `e^2 (x) e_1`.
//!
//! Two-forms are paired with the normalization `<e^{ij}, e^{ij}> = eps_i eps_j`
//! on a pseudo-orthonormal basis.

use serde::{Deserialize, Serialize};

use crate::algebra::json_scalar;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Float, Scalar};

#[derive(Clone, PartialEq)]
pub struct Metric<S> {
    g: Matrix<S>,
    inv: Matrix<S>,
}

impl<S: Scalar> std::fmt::Debug for Metric<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Metric {:?}", self.g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl<S: Scalar> Metric<S> {
    pub fn new(g: Matrix<S>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::DimensionMismatch(format!("metric is {}x{}", g.rows(), g.cols())));
        }
        if !g.is_symmetric() {
            return Err(Error::AsymmetricMetric);
        }
        let inv = g.inverse().map_err(|_| Error::DegenerateMetric)?;
        if !S::EXACT && g.determinant().is_zero() {
            return Err(Error::DegenerateMetric);
        }
        Ok(Self { g, inv })
    }

    pub fn euclidean(n: usize) -> Self {
        Self { g: Matrix::identity(n), inv: Matrix::identity(n) }
    }

    pub fn diagonal(entries: &[S]) -> Result<Self> {
        if entries.iter().any(Scalar::is_zero) {
            return Err(Error::DegenerateMetric);
        }
        let inv: Vec<S> = entries.iter().map(|x| S::one() / x.clone()).collect();
        Ok(Self { g: Matrix::diagonal(entries), inv: Matrix::diagonal(&inv) })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn inverse_gram(&self) -> &Matrix<S> {
        &self.inv
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.g[(i, j)].is_zero()))
    }

    pub fn scaled(&self, c: &S) -> Self {
        let cinv = S::one() / c.clone();
        Self { g: self.g.scale(c), inv: self.inv.scale(&cinv) }
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Metric<T> {
        Metric { g: self.g.map(&f), inv: self.inv.map(&f) }
    }

    pub fn to_float(&self) -> Metric<Float> {
        let g = self.g.map(|x| Float(x.to_f64()));
        // invert in floating point rather than converting an exact inverse
        // so that float-only inputs behave the same as converted ones
        let inv = g.inverse().unwrap_or_else(|_| self.inv.map(|x| Float(x.to_f64())));
        Metric { g, inv }
    }

    pub fn inner(&self, v: &[S], w: &[S]) -> S {
        let gw = self.g.mul_vec(w);
        let mut acc = S::zero();
        for (a, b) in v.iter().zip(&gw) {
            acc.add_mul(a, b);
        }
        acc
    }

    pub fn flat(&self, v: &[S]) -> Vec<S> {
        self.g.mul_vec(v)
    }

    pub fn sharp(&self, alpha: &[S]) -> Vec<S> {
        self.inv.mul_vec(alpha)
    }

    /// Pairing of two covectors, `alpha^T g^{-1} beta`.
    pub fn inner_dual(&self, alpha: &[S], beta: &[S]) -> S {
        let gb = self.inv.mul_vec(beta);
        let mut acc = S::zero();
        for (a, b) in alpha.iter().zip(&gb) {
            acc.add_mul(a, b);
        }
        acc
    }

    /// `<u1, u2> = Tr(u1 . g^{-1} u2^T g)` on endomorphisms (column action).
    pub fn pair_operators(&self, u1: &Matrix<S>, u2: &Matrix<S>) -> S {
        let t = self.inv.mul(&u2.transpose()).mul(&self.g);
        u1.trace_product(&t)
    }

    /// Pairing on 2-forms given as antisymmetric matrices `alpha_{ij} =
    /// alpha(e_i, e_j)`: `1/2 sum g^{ia} g^{jb} alpha_{ij} beta_{ab}`.
    pub fn pair_two_forms(&self, alpha: &Matrix<S>, beta: &Matrix<S>) -> S {
        let half = S::one() / S::from_i64(2);
        self.pair_bilinear_forms(alpha, beta) * half
    }

    /// Full pairing on `T* (x) T*`: `sum g^{ia} g^{jb} alpha_{ij} beta_{ab}`.
    pub fn pair_bilinear_forms(&self, alpha: &Matrix<S>, beta: &Matrix<S>) -> S {
        // Tr(g^{-1} alpha g^{-1} beta^T)
        let left = self.inv.mul(alpha);
        let right = self.inv.mul(&beta.transpose());
        left.trace_product(&right)
    }

    /// Trace of a bilinear form with respect to the metric,
    /// `sum g^{ij} B_{ij}`.
    pub fn trace_form(&self, b: &Matrix<S>) -> S {
        self.inv.trace_product(b)
    }

    /// The operator `B~` with `<B~ v, w> = B(v, w)`: `g^{-1} B`.
    pub fn raise_form(&self, b: &Matrix<S>) -> Matrix<S> {
        self.inv.mul(b)
    }

    /// Finite `GL` action `h . S = h^{-T} S h^{-1}`.
    pub fn act(&self, h: &Matrix<S>) -> Result<Self> {
        let hinv = h.inverse()?;
        let g = hinv.transpose().mul(&self.g).mul(&hinv);
        let inv = h.mul(&self.inv).mul(&h.transpose());
        Ok(Self { g, inv })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.dim(), "g": self.g.to_json() })
    }
}

#[derive(Deserialize)]
struct MetricJson {
    n: Option<usize>,
    g: Vec<Vec<serde_json::Value>>,
}

/// Parses `diag(c1,...,cn)`, a JSON matrix (bare or as `{"n":..,"g":..}`), or
/// a sum of terms `c*ei.ej` (symmetric product, contributes `c` to entries
/// `(i,j)` and `(j,i)`; once when `i = j`) and `c*ei⊗ei`.
pub fn parse_metric<S: Scalar>(text: &str, n: usize) -> Result<Metric<S>> {
    let t = text.trim();
    let g = if let Some(body) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let entries: Vec<S> = body
            .split(',')
            .enumerate()
            .map(|(idx, c)| {
                S::parse_literal(c).ok_or_else(|| Error::parse(5, format!("malformed diagonal entry {} '{}'", idx + 1, c.trim())))
            })
            .collect::<Result<_>>()?;
        if entries.len() != n {
            return Err(Error::DimensionMismatch(format!("diag has {} entries, expected {n}", entries.len())));
        }
        Matrix::diagonal(&entries)
    } else if t.starts_with('[') || t.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(t)?;
        let doc: MetricJson = if value.is_array() {
            MetricJson { n: None, g: serde_json::from_value(value)? }
        } else {
            serde_json::from_value(value)?
        };
        if doc.n.is_some_and(|m| m != n) || doc.g.len() != n || doc.g.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("metric matrix is not {n}x{n}")));
        }
        let rows = doc
            .g
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| json_scalar::<S>(v).ok_or_else(|| Error::parse(0, format!("bad metric entry {v}"))))
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    } else {
        parse_metric_terms(t, n)?
    };
    if g.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    Metric::new(g)
}

fn parse_metric_terms<S: Scalar>(text: &str, n: usize) -> Result<Matrix<S>> {
    let mut g = Matrix::<S>::zeros(n, n);
    let mut negative = false;
    let mut buf = String::new();
    let mut buf_pos = 0;
    let mut terms: Vec<(usize, bool, String)> = Vec::new();
    for (pos, ch) in text.char_indices() {
        match ch {
            '+' | '-' => {
                if !buf.trim().is_empty() {
                    terms.push((buf_pos, negative, std::mem::take(&mut buf)));
                    negative = false;
                }
                buf.clear();
                if ch == '-' {
                    negative = !negative;
                }
            }
            _ => {
                if buf.is_empty() {
                    buf_pos = pos;
                }
                buf.push(ch);
            }
        }
    }
    if buf.trim().is_empty() {
        return Err(Error::parse(text.len(), "expected a metric term"));
    }
    terms.push((buf_pos, negative, buf));

    for (pos, neg, term) in terms {
        let term = term.trim();
        let e_at = term.find('e').ok_or_else(|| Error::parse(pos, format!("malformed metric term '{term}'")))?;
        let coeff_text = term[..e_at].trim().trim_end_matches(['*', '·']).trim();
        let coeff = if coeff_text.is_empty() {
            S::one()
        } else {
            S::parse_literal(coeff_text).ok_or_else(|| Error::parse(pos, format!("malformed coefficient '{coeff_text}'")))?
        };
        let coeff = if neg { -coeff } else { coeff };
        let rest = &term[e_at..];
        let (sep_at, sep) = rest
            .char_indices()
            .find(|(_, c)| matches!(c, '.' | '⊙' | '⊗' | 'x'))
            .ok_or_else(|| Error::parse(pos, format!("missing product sign in '{term}'")))?;
        let i = parse_basis_index(&rest[..sep_at], n, pos)?;
        let j = parse_basis_index(&rest[sep_at + sep.len_utf8()..], n, pos)?;
        match sep {
            '.' | '⊙' => {
                g[(i, j)] = g[(i, j)].clone() + coeff.clone();
                if i != j {
                    g[(j, i)] = g[(j, i)].clone() + coeff;
                }
            }
            _ => g[(i, j)] = g[(i, j)].clone() + coeff,
        }
    }
    Ok(g)
}

fn parse_basis_index(text: &str, n: usize, pos: usize) -> Result<usize> {
    let t = text.trim();
    let t = t
        .strip_prefix('e')
        .ok_or_else(|| Error::parse(pos, format!("expected e<i>, found '{t}'")))?;
    let t = t.strip_prefix('^').unwrap_or(t);
    let t = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(t);
    let i: usize = t.trim().parse().map_err(|_| Error::parse(pos, format!("malformed index '{t}'")))?;
    if i == 0 || i > n {
        return Err(Error::DimensionMismatch(format!("index e{i} outside 1..={n}")));
    }
    Ok(i - 1)
}

/// Symmetric pivoted `LDL^T`: returns `(P, d)` with `P^T g P = diag(d)`.
/// When every remaining diagonal entry vanishes, the basis vector `b_r` is
/// replaced by `b_r + b_s` for an off-diagonal `g(b_r, b_s) != 0`, which
/// creates the nonzero pivot `2 g(b_r, b_s)`.
pub fn diagonalize<S: Scalar>(g: &Matrix<S>) -> Result<(Matrix<S>, Vec<S>)> {
    let n = g.rows();
    let mut a = g.clone();
    let mut basis = Matrix::<S>::identity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    let mut pivots = Vec::with_capacity(n);

    while !remaining.is_empty() {
        let best_diag = remaining
            .iter()
            .copied()
            .filter(|&r| !a[(r, r)].is_zero())
            .max_by(|&x, &y| a[(x, x)].pivot_score().partial_cmp(&a[(y, y)].pivot_score()).unwrap().then(y.cmp(&x)));
        let best_off = remaining
            .iter()
            .flat_map(|&r| remaining.iter().map(move |&s| (r, s)))
            .filter(|&(r, s)| r < s && !a[(r, s)].is_zero())
            .max_by(|&(r1, s1), &(r2, s2)| {
                a[(r1, s1)].pivot_score().partial_cmp(&a[(r2, s2)].pivot_score()).unwrap().then((r2, s2).cmp(&(r1, s1)))
            });
        let use_diag = match (best_diag, best_off) {
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => return Err(Error::DegenerateMetric),
            (Some(d), Some((r, s))) => S::EXACT || a[(d, d)].abs_f64() >= 0.5 * a[(r, s)].abs_f64(),
        };
        let r = if use_diag {
            best_diag.expect("checked")
        } else {
            let (r, s) = best_off.expect("checked");
            // b_r <- b_r + sigma b_s, sigma chosen so the new pivot is large
            let sigma = if S::EXACT {
                S::one()
            } else {
                let plus = (a[(r, r)].clone() + a[(s, s)].clone() + a[(r, s)].clone() * S::from_i64(2)).abs_f64();
                let minus = (a[(r, r)].clone() + a[(s, s)].clone() - a[(r, s)].clone() * S::from_i64(2)).abs_f64();
                if plus >= minus { S::one() } else { -S::one() }
            };
            for k in 0..n {
                let v = basis[(k, r)].clone() + sigma.clone() * basis[(k, s)].clone();
                basis[(k, r)] = v;
            }
            for k in 0..n {
                let v = a[(r, k)].clone() + sigma.clone() * a[(s, k)].clone();
                a[(r, k)] = v;
            }
            for k in 0..n {
                let v = a[(k, r)].clone() + sigma.clone() * a[(k, s)].clone();
                a[(k, r)] = v;
            }
            r
        };
        let pivot = a[(r, r)].clone();
        if pivot.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        remaining.retain(|&x| x != r);
        for &s in &remaining {
            let f = a[(s, r)].clone() / pivot.clone();
            if f.is_zero() && S::EXACT {
                continue;
            }
            for k in 0..n {
                let v = basis[(k, s)].clone() - f.clone() * basis[(k, r)].clone();
                basis[(k, s)] = v;
            }
            for k in 0..n {
                let v = a[(s, k)].clone() - f.clone() * a[(r, k)].clone();
                a[(s, k)] = v;
            }
            for k in 0..n {
                let v = a[(k, s)].clone() - f.clone() * a[(k, r)].clone();
                a[(k, s)] = v;
            }
        }
        order.push(r);
        pivots.push(pivot);
    }
    let p = Matrix::from_fn(n, n, |row, col| basis[(row, order[col])].clone());
    Ok((p, pivots))
}

/// Sylvester inertia via [`diagonalize`].
pub fn signature<S: Scalar>(metric: &Metric<S>) -> Result<Signature> {
    let (_, d) = diagonalize(metric.gram())?;
    let p = d.iter().filter(|x| x.sign() > 0).count();
    let q = d.iter().filter(|x| x.sign() < 0).count();
    if p + q != metric.dim() {
        return Err(Error::DegenerateMetric);
    }
    Ok(Signature { p, q })
}

/// A frame `F` (columns) with `F^T g F = diag(eps)`, positive directions
/// first.
pub fn pseudo_orthonormal_frame<S: Scalar>(metric: &Metric<S>) -> Result<(Matrix<Float>, Vec<i8>)> {
    let g = metric.gram().map(|x| Float(x.to_f64()));
    let scale = g.max_abs().max(1.0);
    let (p, d) = diagonalize(&g)?;
    if d.iter().any(|x| x.0.abs() <= 1e-12 * scale) {
        return Err(Error::DegenerateMetric);
    }
    let n = g.rows();
    let mut cols: Vec<(usize, i8)> = d.iter().enumerate().map(|(i, x)| (i, if x.0 > 0.0 { 1 } else { -1 })).collect();
    cols.sort_by_key(|&(i, e)| (-e, i));
    let frame = Matrix::from_fn(n, n, |r, c| {
        let (src, _) = cols[c];
        Float(p[(r, src)].0 / d[src].0.abs().sqrt())
    });
    Ok((frame, cols.into_iter().map(|(_, e)| e).collect()))
}

/// Tensor spaces carrying an induced pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorShape {
    /// `T`, basis `e_i`.
    Vector,
    /// `T*`, basis `e^i`.
    Covector,
    /// `Λ²T*`, basis `e^{ij}`, `i < j`.
    TwoForm,
    /// `T* (x) T`, basis `e^j (x) e_i` as the matrix unit `E_{ij}`,
    /// row-major.
    Operator,
    /// `Λ²T* (x) T`, basis `e^{ij} (x) e_k`, pair-major as in
    /// `StructureTensor::as_vector`.
    BracketTensor,
}

impl std::str::FromStr for TensorShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" | "vector" => TensorShape::Vector,
            "T*" | "covector" => TensorShape::Covector,
            "L2T*" | "Λ²T*" | "two-form" => TensorShape::TwoForm,
            "T*T" | "T*⊗T" | "operator" => TensorShape::Operator,
            "L2T*T" | "Λ²T*⊗T" | "bracket" => TensorShape::BracketTensor,
            other => return Err(Error::UnsupportedShape(other.to_string())),
        })
    }
}

/// Gram matrix of the pairing on a tensor space, in the basis documented on
/// [`TensorShape`].
#[derive(Clone)]
pub struct InducedPairing<S> {
    pub shape: TensorShape,
    pub gram: Matrix<S>,
}

impl<S: Scalar> InducedPairing<S> {
    pub fn pair(&self, x: &[S], y: &[S]) -> S {
        let gy = self.gram.mul_vec(y);
        let mut acc = S::zero();
        for (a, b) in x.iter().zip(&gy) {
            acc.add_mul(a, b);
        }
        acc
    }
}

pub fn induced_pairing<S: Scalar>(metric: &Metric<S>, shape: TensorShape) -> InducedPairing<S> {
    let n = metric.dim();
    let g = metric.gram();
    let gi = metric.inverse_gram();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let two_form = |(i, j): (usize, usize), (a, b): (usize, usize)| {
        gi[(i, a)].clone() * gi[(j, b)].clone() - gi[(i, b)].clone() * gi[(j, a)].clone()
    };
    let gram = match shape {
        TensorShape::Vector => g.clone(),
        TensorShape::Covector => gi.clone(),
        TensorShape::TwoForm => Matrix::from_fn(pairs.len(), pairs.len(), |x, y| two_form(pairs[x], pairs[y])),
        TensorShape::Operator => Matrix::from_fn(n * n, n * n, |x, y| {
            // E_{ij} = e^j (x) e_i
            let (i, j) = (x / n, x % n);
            let (k, l) = (y / n, y % n);
            gi[(j, l)].clone() * g[(i, k)].clone()
        }),
        TensorShape::BracketTensor => Matrix::from_fn(pairs.len() * n, pairs.len() * n, |x, y| {
            let (p1, k1) = (x / n, x % n);
            let (p2, k2) = (y / n, y % n);
            two_form(pairs[p1], pairs[p2]) * g[(k1, k2)].clone()
        }),
    };
    InducedPairing { shape, gram }
}
