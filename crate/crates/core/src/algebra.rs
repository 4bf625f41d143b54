//! Structure tensors and their metric-independent invariants.
//!
//! A [`StructureTensor`] holds the constants `a^k_{ij}` of a bracket
//! `[e_i, e_j] = sum_k a^k_{ij} e_k`. Only pairs `i < j` are stored, so
//! antisymmetry holds by construction.
//!
//! # Text notation
//!
//! Structures are written as tuples `(de^1, ..., de^n)` in which slot `k`
//! lists `de^k` as a sum of terms `c*ij` (two-digit pairs, `n <= 9`) or
//! `c*(i,j)` (any `n`). Indices are 1-based. The exterior derivative and the
//! bracket are related by `de^k(e_i, e_j) = -e^k([e_i, e_j])`, so a term
//! `c*ij` in slot `k` means `a^k_{ij} = -c`. For instance `(0,0,12)` is the
//! Heisenberg algebra with `[e_1, e_2] = -e_3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 16;

#[derive(Clone, PartialEq)]
pub struct StructureTensor<S> {
    n: usize,
    // pair-major: coeffs[pair_index(i, j) * n + k] = a^k_{ij}, i < j
    coeffs: Vec<S>,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl<S: Scalar> fmt::Debug for StructureTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor{}", self.to_salamon())
    }
}

impl<S: Scalar> fmt::Display for StructureTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_salamon())
    }
}

impl<S: Scalar> StructureTensor<S> {
    pub fn zero(n: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::DimensionMismatch(format!("dimension {n} outside 2..={MAX_DIM}")));
        }
        Ok(Self { n, coeffs: vec![S::zero(); pair_count(n) * n] })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `a^k_{ij}`, with `a^k_{ii} = 0` and `a^k_{ji} = -a^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => S::zero(),
            std::cmp::Ordering::Less => self.coeffs[pair_index(self.n, i, j) * self.n + k].clone(),
            std::cmp::Ordering::Greater => -self.coeffs[pair_index(self.n, j, i) * self.n + k].clone(),
        }
    }

    /// Sets `a^k_{ij}` (and therefore `a^k_{ji}`). Panics on `i == j`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: S) {
        assert!(i != j, "a^k_ii is identically zero");
        if i < j {
            let idx = pair_index(self.n, i, j) * self.n + k;
            self.coeffs[idx] = value;
        } else {
            let idx = pair_index(self.n, j, i) * self.n + k;
            self.coeffs[idx] = -value;
        }
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.n).map(|k| self.get(i, j, k)).collect()
    }

    pub fn bracket(&self, v: &[S], w: &[S]) -> Vec<S> {
        let n = self.n;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                // v_i w_j - v_j w_i
                let c = v[i].clone() * w[j].clone() - v[j].clone() * w[i].clone();
                if c.is_zero() && S::EXACT {
                    continue;
                }
                let base = pair_index(n, i, j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    o.add_mul(&c, &self.coeffs[base + k]);
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_i)` acting on column vectors: column `j` is `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        Matrix::from_fn(self.n, self.n, |k, j| self.get(i, j, k))
    }

    pub fn ad_matrices(&self) -> Vec<Matrix<S>> {
        (0..self.n).map(|i| self.ad_basis(i)).collect()
    }

    pub fn ad_traces(&self) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                let mut t = S::zero();
                for j in 0..self.n {
                    t = t + self.get(i, j, j);
                }
                t
            })
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.ad_traces().iter().all(Scalar::is_zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero constants `(i, j, k, a^k_{ij})` with `i < j`, ordered by pair
    /// then by `k`.
    pub fn nonzero_terms(&self) -> Vec<(usize, usize, usize, S)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let base = pair_index(self.n, i, j) * self.n;
                for k in 0..self.n {
                    let c = &self.coeffs[base + k];
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StructureTensor<T> {
        StructureTensor { n: self.n, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_float(&self) -> StructureTensor<crate::Float> {
        self.convert(|x| crate::Float(x.to_f64()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// Coordinates in the basis `e^{ij} (x) e_k`, `i < j`, pair-major.
    pub fn as_vector(&self) -> &[S] {
        &self.coeffs
    }

    pub fn from_vector(n: usize, coeffs: Vec<S>) -> Result<Self> {
        let z = Self::zero(n)?;
        if coeffs.len() != z.coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                z.coeffs.len(),
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    /// Canonical tuple notation; inverse of [`parse_structure`].
    pub fn to_salamon(&self) -> String {
        let n = self.n;
        let mut slots = Vec::with_capacity(n);
        for k in 0..n {
            let mut slot = String::new();
            for i in 0..n {
                for j in i + 1..n {
                    let a = self.get(i, j, k);
                    if a.is_zero() {
                        continue;
                    }
                    let c = -a;
                    let neg = c.sign() < 0;
                    let mag = if neg { -c } else { c };
                    if neg {
                        slot.push('-');
                    } else if !slot.is_empty() {
                        slot.push('+');
                    }
                    if mag != S::one() {
                        slot.push_str(&mag.to_string());
                        slot.push('*');
                    }
                    if n <= 9 {
                        slot.push_str(&format!("{}{}", i + 1, j + 1));
                    } else {
                        slot.push_str(&format!("({},{})", i + 1, j + 1));
                    }
                }
            }
            if slot.is_empty() {
                slot.push('0');
            }
            slots.push(slot);
        }
        format!("({})", slots.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let brackets: Vec<_> = self
            .nonzero_terms()
            .into_iter()
            .map(|(i, j, k, c)| {
                serde_json::json!({ "i": i + 1, "j": j + 1, "k": k + 1, "c": c.to_json() })
            })
            .collect();
        serde_json::json!({ "n": self.n, "brackets": brackets })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: StructureJson = serde_json::from_value(value.clone())?;
        let mut a = Self::zero(doc.n)?;
        for b in doc.brackets {
            let (i, j, k) = (b.i, b.j, b.k);
            if !(1..=doc.n).contains(&i) || !(1..=doc.n).contains(&j) || !(1..=doc.n).contains(&k) || i == j {
                return Err(Error::parse(0, format!("bad bracket indices ({i},{j},{k})")));
            }
            let c = json_scalar::<S>(&b.c).ok_or_else(|| Error::parse(0, format!("bad coefficient {}", b.c)))?;
            a.set(i - 1, j - 1, k - 1, c);
        }
        Ok(a)
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    n: usize,
    brackets: Vec<BracketJson>,
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    k: usize,
    c: serde_json::Value,
}

pub(crate) fn json_scalar<S: Scalar>(v: &serde_json::Value) -> Option<S> {
    match v {
        serde_json::Value::String(s) => S::parse_literal(s),
        serde_json::Value::Number(num) => {
            let text = num.to_string();
            S::parse_literal(&text).or_else(|| num.as_f64().map(S::from_f64))
        }
        _ => None,
    }
}

/// Parses tuple notation; see the module docs for the grammar and the sign
/// convention.
pub fn parse_structure<S: Scalar>(text: &str) -> Result<StructureTensor<S>> {
    let trimmed_start = text.len() - text.trim_start().len();
    let body = text.trim();
    if !body.starts_with('(') || !body.ends_with(')') || body.len() < 2 {
        return Err(Error::parse(trimmed_start, "expected a parenthesized tuple"));
    }
    let inner_start = trimmed_start + 1;
    let inner = &body[1..body.len() - 1];

    // split on top-level commas
    let mut slots: Vec<(usize, &str)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (pos, ch) in inner.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(inner_start + pos, "unbalanced parenthesis"));
                }
            }
            ',' if depth == 0 => {
                slots.push((inner_start + start, &inner[start..pos]));
                start = pos + ch.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse(inner_start + inner.len(), "unbalanced parenthesis"));
    }
    slots.push((inner_start + start, &inner[start..]));

    let n = slots.len();
    let mut a = StructureTensor::<S>::zero(n).map_err(|e| Error::parse(trimmed_start, e.to_string()))?;
    for (k, (offset, slot)) in slots.into_iter().enumerate() {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for term in split_terms(slot, offset)? {
            let (i, j, c) = parse_term::<S>(&term, n)?;
            let (i, j, c) = if i < j { (i, j, c) } else { (j, i, -c) };
            if seen.contains(&(i, j)) {
                return Err(Error::parse(term.pos, format!("repeated pair {}{} in slot {}", i + 1, j + 1, k + 1)));
            }
            seen.push((i, j));
            a.set(i, j, k, -c);
        }
    }
    Ok(a)
}

struct Term {
    pos: usize,
    negative: bool,
    text: String,
}

fn split_terms(slot: &str, offset: usize) -> Result<Vec<Term>> {
    let trimmed = slot.trim();
    if trimmed == "0" {
        return Ok(Vec::new());
    }
    if trimmed.is_empty() {
        return Err(Error::parse(offset, "empty slot (write 0 for a closed form)"));
    }
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut negative = false;
    let mut buf = String::new();
    let mut buf_pos = offset;
    let mut pending_sign_pos: Option<usize> = None;
    for (p, ch) in slot.char_indices() {
        let pos = offset + p;
        match ch {
            '+' | '-' if depth == 0 => {
                if !buf.trim().is_empty() {
                    terms.push(Term { pos: buf_pos, negative, text: std::mem::take(&mut buf) });
                    negative = false;
                } else if !buf.is_empty() {
                    buf.clear();
                }
                if ch == '-' {
                    negative = !negative;
                }
                pending_sign_pos = Some(pos);
                continue;
            }
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && buf.is_empty() {
            continue;
        }
        if buf.is_empty() {
            buf_pos = pos;
        }
        buf.push(ch);
        pending_sign_pos = None;
    }
    if !buf.trim().is_empty() {
        terms.push(Term { pos: buf_pos, negative, text: buf });
    } else if let Some(p) = pending_sign_pos {
        return Err(Error::parse(p, "dangling sign"));
    }
    Ok(terms)
}

fn parse_term<S: Scalar>(term: &Term, n: usize) -> Result<(usize, usize, S)> {
    let text = term.text.trim();
    let (coeff, pair, pair_offset) = match text.find(['*', '·']) {
        Some(idx) => {
            let sep_len = text[idx..].chars().next().map_or(1, char::len_utf8);
            let coeff_text = text[..idx].trim();
            let c = S::parse_literal(coeff_text)
                .ok_or_else(|| Error::parse(term.pos, format!("malformed coefficient '{coeff_text}'")))?;
            (c, text[idx + sep_len..].trim(), idx + sep_len)
        }
        None => (S::one(), text, 0),
    };
    let pair_pos = term.pos + pair_offset;
    let (i, j) = parse_pair(pair, n, pair_pos)?;
    let c = if term.negative { -coeff } else { coeff };
    Ok((i, j, c))
}

fn parse_pair(text: &str, n: usize, pos: usize) -> Result<(usize, usize)> {
    let mut t = text.trim();
    if let Some(rest) = t.strip_prefix('e') {
        t = rest.strip_prefix('^').unwrap_or(rest);
        if let Some(r) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            t = r;
        }
    }
    let (i, j) = if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(pos, format!("malformed pair '{text}'")))?;
        let i: usize = a.trim().parse().map_err(|_| Error::parse(pos, format!("malformed index '{a}'")))?;
        let j: usize = b.trim().parse().map_err(|_| Error::parse(pos, format!("malformed index '{b}'")))?;
        (i, j)
    } else {
        let digits: Vec<u32> = t.chars().filter_map(|c| c.to_digit(10)).collect();
        if t.chars().count() != 2 || digits.len() != 2 {
            return Err(Error::parse(pos, format!("malformed token '{text}'")));
        }
        if n > 9 {
            return Err(Error::parse(pos, format!("two-digit pair '{text}' is ambiguous for n = {n}; use (i,j)")));
        }
        (digits[0] as usize, digits[1] as usize)
    };
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::parse(pos, format!("index out of range 1..={n} in '{text}'")));
    }
    if i == j {
        return Err(Error::parse(pos, format!("pair '{text}' repeats an index")));
    }
    Ok((i - 1, j - 1))
}

/// True if `text` contains a decimal literal with ten or more fractional
/// digits: a truncated irrational that only makes sense on the float backend.
pub fn has_approximate_literals(text: &str) -> bool {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'.' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j - i - 1 >= 10 {
                return true;
            }
            i = j;
        } else {
            i += 1;
        }
    }
    false
}

/// Jacobiator components `J(e_i, e_j, e_k)` for `i < j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiDefect<S> {
    pub n: usize,
    /// `((i, j, k), J(e_i, e_j, e_k))` for every ordered triple `i < j < k`.
    pub components: Vec<((usize, usize, usize), Vec<S>)>,
}

impl<S: Scalar> JacobiDefect<S> {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, v)| v.iter().all(Scalar::is_zero))
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        self.components
            .iter()
            .find(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .map(|(t, _)| *t)
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> Option<&[S]> {
        self.components.iter().find(|(t, _)| *t == (i, j, k)).map(|(_, v)| v.as_slice())
    }
}

/// `[[x,y],z] + [[y,z],x] + [[z,x],y]` on basis triples.
pub fn jacobi_defect<S: Scalar>(a: &StructureTensor<S>) -> JacobiDefect<S> {
    jacobi_polarized(a, a)
}

/// Symmetric bilinear map whose diagonal is the Jacobiator:
/// `J(a, b)(x, y, z) = 1/2 sum_cyclic ([[x,y]_a, z]_b + [[x,y]_b, z]_a)`.
/// Its derivative at `a` in direction `b` is `2 J(a, b)`.
pub fn jacobi_polarized<S: Scalar>(a: &StructureTensor<S>, b: &StructureTensor<S>) -> JacobiDefect<S> {
    assert_eq!(a.n, b.n);
    let n = a.n;
    let half = S::one() / S::from_i64(2);
    let mut components = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut out = vec![S::zero(); n];
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for m in 0..n {
                        let ab = a.get(x, y, m);
                        let bb = b.get(x, y, m);
                        if ab.is_zero() && bb.is_zero() {
                            continue;
                        }
                        for (l, o) in out.iter_mut().enumerate() {
                            o.add_mul(&ab, &b.get(m, z, l));
                            o.add_mul(&bb, &a.get(m, z, l));
                        }
                    }
                }
                let out = out.into_iter().map(|v| v * half.clone()).collect();
                components.push(((i, j, k), out));
            }
        }
    }
    JacobiDefect { n, components }
}

pub fn require_jacobi<S: Scalar>(a: &StructureTensor<S>) -> Result<()> {
    match jacobi_defect(a).first_nonzero() {
        None => Ok(()),
        Some((i, j, k)) => Err(Error::JacobiFails(i, j, k)),
    }
}

/// `B(v, w) = Tr(ad v . ad w)` in the standard basis.
pub fn killing_form<S: Scalar>(a: &StructureTensor<S>) -> Matrix<S> {
    let ads = a.ad_matrices();
    let n = a.n;
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = ads[i].trace_product(&ads[j]);
            b[(i, j)] = v.clone();
            b[(j, i)] = v;
        }
    }
    b
}

/// Matrix of `ad(v)`: column action `w -> [v, w]`.
pub fn ad_matrix<S: Scalar>(a: &StructureTensor<S>, v: &[S]) -> Matrix<S> {
    let n = a.n;
    assert_eq!(v.len(), n);
    let mut m = Matrix::<S>::zeros(n, n);
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..n {
            for k in 0..n {
                let c = a.get(i, j, k);
                m[(k, j)].add_mul(vi, &c);
            }
        }
    }
    m
}

/// Linear subspace of `S^n` stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    pub ambient: usize,
    pub basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn span(ambient: usize, vectors: Vec<Vec<S>>) -> Self {
        if vectors.is_empty() {
            return Self { ambient, basis: Vec::new() };
        }
        let basis = Matrix::from_rows(vectors).row_space_basis();
        Self { ambient, basis }
    }

    pub fn whole(n: usize) -> Self {
        Self { ambient: n, basis: Matrix::<S>::identity(n).to_rows() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, all).dim() == self.dim()
    }
}

/// Decreasing chain of subspaces, e.g. the lower central series.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceFlag<S> {
    pub spaces: Vec<Subspace<S>>,
}

impl<S: Scalar> SubspaceFlag<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }
}

/// `g = g^0 ⊃ g^1 = [g,g] ⊃ g^{i+1} = [g, g^i]`, up to stabilization.
pub fn lower_central_series<S: Scalar>(a: &StructureTensor<S>) -> SubspaceFlag<S> {
    let n = a.n;
    let mut spaces = vec![Subspace::whole(n)];
    loop {
        let last = spaces.last().expect("non-empty");
        let mut gens = Vec::new();
        for i in 0..n {
            let mut e = vec![S::zero(); n];
            e[i] = S::one();
            for w in &last.basis {
                let br = a.bracket(&e, w);
                if br.iter().any(|x| !x.is_zero()) {
                    gens.push(br);
                }
            }
        }
        let next = Subspace::span(n, gens);
        let done = next.dim() == last.dim();
        if done {
            break;
        }
        let zero = next.dim() == 0;
        spaces.push(next);
        if zero {
            break;
        }
    }
    SubspaceFlag { spaces }
}

pub fn derived_algebra<S: Scalar>(a: &StructureTensor<S>) -> Subspace<S> {
    let n = a.n;
    let gens = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| a.bracket_basis(i, j))
        .collect();
    Subspace::span(n, gens)
}

pub fn centre<S: Scalar>(a: &StructureTensor<S>) -> Subspace<S> {
    let n = a.n;
    // v central iff sum_i v_i a^k_{ij} = 0 for all j, k
    let rows: Vec<Vec<S>> = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| (0..n).map(|i| a.get(i, j, k)).collect())
        .collect();
    let null = Matrix::from_rows(rows).nullspace();
    Subspace::span(n, null)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    pub is_lie: bool,
    pub unimodular: Option<bool>,
    pub nilpotent: Option<bool>,
    /// Length of the lower central series; `None` unless nilpotent.
    pub step: Option<usize>,
    pub killing_zero: Option<bool>,
    pub lcs: Option<SubspaceFlag<S>>,
    pub centre: Option<Subspace<S>>,
    pub derived: Option<Subspace<S>>,
    pub centre_in_derived: Option<bool>,
}

impl<S: Scalar> Classification<S> {
    /// `(dim g^1, ..., dim g^k)` over the nonzero terms past `g` itself.
    pub fn lcs_dims(&self) -> Option<Vec<usize>> {
        self.lcs
            .as_ref()
            .map(|f| f.dims().into_iter().skip(1).filter(|&d| d > 0).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis_json = |s: &Subspace<S>| -> serde_json::Value {
            s.basis
                .iter()
                .map(|v| v.iter().map(Scalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into()
        };
        serde_json::json!({
            "is_lie": self.is_lie,
            "unimodular": self.unimodular,
            "nilpotent": self.nilpotent,
            "step": self.step,
            "killing_zero": self.killing_zero,
            "lcs_dims": self.lcs.as_ref().map(|f| f.dims()),
            "centre": self.centre.as_ref().map(basis_json),
            "derived": self.derived.as_ref().map(basis_json),
            "centre_in_derived": self.centre_in_derived,
        })
    }
}

pub fn classify<S: Scalar>(a: &StructureTensor<S>) -> Classification<S> {
    let is_lie = jacobi_defect(a).is_zero();
    if !is_lie {
        return Classification {
            is_lie,
            unimodular: None,
            nilpotent: None,
            step: None,
            killing_zero: None,
            lcs: None,
            centre: None,
            derived: None,
            centre_in_derived: None,
        };
    }
    let lcs = lower_central_series(a);
    let last_dim = lcs.spaces.last().map_or(a.n, Subspace::dim);
    let nilpotent = last_dim == 0;
    let step = nilpotent.then(|| lcs.spaces.len() - 1).map(|s| s.max(1));
    let centre = centre(a);
    let derived = derived_algebra(a);
    Classification {
        is_lie,
        unimodular: Some(a.is_unimodular()),
        nilpotent: Some(nilpotent),
        step,
        killing_zero: Some(killing_form(a).is_zero()),
        centre_in_derived: Some(derived.contains_subspace(&centre)),
        lcs: Some(lcs),
        centre: Some(centre),
        derived: Some(derived),
    }
}

/// Requires `a` to be a unimodular Lie algebra with zero Killing form.
pub(crate) fn require_unimodular_killing_zero<S: Scalar>(a: &StructureTensor<S>, op: &'static str) -> Result<()> {
    require_jacobi(a)?;
    if let Some(index) = a.ad_traces().iter().position(|t| !t.is_zero()) {
        return Err(Error::NotUnimodular { op, index });
    }
    if !killing_form(a).is_zero() {
        return Err(Error::KillingFormNonzero { op });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Float, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn st(text: &str) -> StructureTensor<Rational> {
        parse_structure(text).unwrap()
    }

    #[test]
    fn heisenberg_sign_convention() {
        let a = st("(0,0,12)");
        assert_eq!(a.get(0, 1, 2), q("-1"));
        assert_eq!(a.get(1, 0, 2), q("1"));
        assert_eq!(a.nonzero_terms().len(), 1);
    }

    #[test]
    fn parses_eight_dimensional_example() {
        let a = st("(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)");
        assert_eq!(a.dim(), 8);
        assert_eq!(a.nonzero_terms().len(), 10);
        assert_eq!(a.get(1, 3, 6), q("1")); // -24 in slot 7
        assert_eq!(a.get(1, 2, 5), q("1")); // -23 in slot 6
    }

    #[test]
    fn parses_solvable_example() {
        let a = st("(0,12,-13)");
        assert_eq!(a.get(0, 1, 1), q("-1"));
        assert_eq!(a.get(0, 2, 2), q("1"));
    }

    #[test]
    fn parses_coefficients_and_bracketed_pairs() {
        let a = st("(0,0,-7/3*12,0.5*(1,2)+e^{13})");
        assert_eq!(a.get(0, 1, 2), q("7/3"));
        assert_eq!(a.get(0, 1, 3), q("-1/2"));
        assert_eq!(a.get(0, 2, 3), q("-1"));
        let b = st("(0,0,+-2*21)");
        assert_eq!(b.get(0, 1, 2), q("-2"));
    }

    #[test]
    fn reversed_pair_flips_sign() {
        assert_eq!(st("(0,0,21)").get(0, 1, 2), q("1"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_structure::<Rational>("(0,0,12+12)") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 8);
                assert!(msg.contains("repeated"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_structure::<Rational>("(0,0,14)") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 5);
                assert!(msg.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_structure::<Rational>("(0,0,1x)"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_structure::<Rational>("0,0,12"), Err(Error::Parse { .. })));
        assert!(matches!(parse_structure::<Rational>("(0,0,12+)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_structure::<Rational>("(0,0,11)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_structure::<Rational>("(0,0,a*12)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn large_dimension_needs_bracketed_pairs() {
        let ten = "(0,0,(1,2),0,0,0,0,0,0,(1,10))";
        let a = st(ten);
        assert_eq!(a.get(0, 9, 9), q("-1"));
        assert!(parse_structure::<Rational>("(0,0,12,0,0,0,0,0,0,0)").is_err());
        assert_eq!(st(&a.to_salamon()), a);
    }

    #[test]
    fn canonical_printer() {
        assert_eq!(st("(0,0,21)").to_salamon(), "(0,0,-12)");
        assert_eq!(st("(0, 0, 12 + 2*13, -1/2*(2,3))").to_salamon(), "(0,0,12+2*13,-1/2*23)");
    }

    #[test]
    fn json_round_trip() {
        let a = st("(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)");
        let j = a.to_json();
        assert_eq!(j["brackets"][0]["c"], "-1");
        assert_eq!(StructureTensor::<Rational>::from_json(&j).unwrap(), a);
    }

    #[test]
    fn detects_truncated_irrationals() {
        assert!(has_approximate_literals("(0,0,6.928203230275509*12)"));
        assert!(!has_approximate_literals("(0,0,0.5*12)"));
    }

    #[test]
    fn jacobi_of_lie_algebra_vanishes() {
        assert!(jacobi_defect(&st("(0,0,12,13,23)")).is_zero());
        assert!(jacobi_defect(&StructureTensor::<Rational>::zero(4).unwrap()).is_zero());
    }

    #[test]
    fn perturbed_bracket_breaks_jacobi() {
        let mut a = st("(0,0,12,13,23)");
        a.set(2, 3, 4, q("1"));
        let d = jacobi_defect(&a);
        assert!(!d.is_zero());
        assert!(d.component(0, 1, 3).unwrap().iter().any(|x| !x.is_zero()));
        assert!(require_jacobi(&a).is_err());
    }

    #[test]
    fn killing_forms() {
        let b = killing_form(&st("(0,12,-13)"));
        let mut expected = Matrix::zeros(3, 3);
        expected[(0, 0)] = q("2");
        assert_eq!(b, expected);
        let so3 = st("(-23,13,-12)");
        assert_eq!(killing_form(&so3), Matrix::identity(3).scale(&q("-2")));
        assert!(killing_form(&st("(0,0,12,13,23)")).is_zero());
    }

    #[test]
    fn ad_matrix_convention() {
        let a = st("(0,0,12)");
        let m = ad_matrix(&a, &[q("1"), q("0"), q("0")]);
        let mut expected = Matrix::zeros(3, 3);
        expected[(2, 1)] = q("-1");
        assert_eq!(m, expected);
        assert!(ad_matrix(&a, &[q("0"), q("0"), q("1")]).is_zero());
        assert!(ad_matrix(&a, &[q("0"), q("0"), q("0")]).is_zero());
        assert_eq!(a.ad_basis(0), expected);
    }

    #[test]
    fn classify_heisenberg() {
        let c = classify(&st("(0,0,12)"));
        assert!(c.is_lie);
        assert_eq!(c.nilpotent, Some(true));
        assert_eq!(c.step, Some(2));
        assert_eq!(c.unimodular, Some(true));
        assert_eq!(c.killing_zero, Some(true));
        assert_eq!(c.centre.as_ref().unwrap().basis, vec![vec![q("0"), q("0"), q("1")]]);
        assert_eq!(c.derived.as_ref().unwrap().basis, vec![vec![q("0"), q("0"), q("1")]]);
        assert_eq!(c.centre_in_derived, Some(true));
        assert_eq!(c.lcs_dims(), Some(vec![1]));
    }

    #[test]
    fn classify_direct_sum_with_line() {
        let c = classify(&st("(0,0,12,13,0)"));
        assert_eq!(c.centre_in_derived, Some(false));
        assert_eq!(c.centre.unwrap().dim(), 2);
    }

    #[test]
    fn classify_solvable() {
        let c = classify(&st("(0,12,-13)"));
        assert_eq!(c.nilpotent, Some(false));
        assert_eq!(c.step, None);
        assert_eq!(c.unimodular, Some(true));
        assert_eq!(c.killing_zero, Some(false));
    }

    #[test]
    fn classify_gates_on_jacobi() {
        let mut a = st("(0,0,12,13,23)");
        a.set(2, 3, 4, q("1"));
        let c = classify(&a);
        assert!(!c.is_lie);
        assert!(c.unimodular.is_none() && c.lcs.is_none());
    }

    #[test]
    fn abelian_is_step_one() {
        let c = classify(&StructureTensor::<Rational>::zero(3).unwrap());
        assert_eq!(c.step, Some(1));
        assert_eq!(c.lcs_dims(), Some(vec![]));
    }

    #[test]
    fn filiform_lcs() {
        let c = classify(&st("(0,0,12,13,14,15,16)"));
        assert_eq!(c.lcs_dims(), Some(vec![5, 4, 3, 2, 1]));
        assert_eq!(c.step, Some(6));
    }

    #[test]
    fn float_backend_parses_decimals() {
        let a: StructureTensor<Float> = parse_structure("(0,0,6.928203230275509*12)").unwrap();
        assert!((a.get(0, 1, 2).0 + 6.928203230275509).abs() < 1e-15);
    }
}
