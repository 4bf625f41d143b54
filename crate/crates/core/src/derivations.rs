//! Derivation algebras and the trace obstruction to Einstein metrics with
//! nonzero scalar curvature.
//!
//! A matrix `D` acts on columns; it is a derivation when
//! `D[x, y] = [Dx, y] + [x, Dy]`. If some derivation has nonzero trace, no
//! metric on a unimodular algebra with zero Killing form is Einstein with
//! `s != 0`.

use crate::algebra::{require_jacobi, require_unimodular_killing_zero, StructureTensor};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpace<S> {
    /// Reduced echelon basis, each flattened row-major as an `n x n` matrix.
    pub basis: Vec<Matrix<S>>,
    /// First basis element with nonzero trace.
    pub trace_witness: Option<Matrix<S>>,
}

impl<S: Scalar> DerivationSpace<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn has_nonzero_trace(&self) -> bool {
        self.trace_witness.is_some()
    }

    /// Exact membership of `d` in the span.
    pub fn contains(&self, d: &Matrix<S>) -> bool {
        let mut rows: Vec<Vec<S>> = self.basis.iter().map(|m| m.as_slice().to_vec()).collect();
        let before = rows.len();
        rows.push(d.as_slice().to_vec());
        Matrix::from_rows(rows).rank() == before
    }
}

/// `D[e_i, e_j] - [D e_i, e_j] - [e_i, D e_j]`, all components; zero iff `D`
/// is a derivation.
pub fn leibniz_defect<S: Scalar>(a: &StructureTensor<S>, d: &Matrix<S>) -> Vec<S> {
    let n = a.dim();
    let mut out = Vec::with_capacity(n * n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let br = a.bracket_basis(i, j);
            let lhs = d.mul_vec(&br);
            let r1 = a.bracket(&d.column(i), &unit(n, j));
            let r2 = a.bracket(&unit(n, i), &d.column(j));
            for k in 0..n {
                out.push(lhs[k].clone() - r1[k].clone() - r2[k].clone());
            }
        }
    }
    out
}

pub fn is_derivation<S: Scalar>(a: &StructureTensor<S>, d: &Matrix<S>) -> bool {
    leibniz_defect(a, d).iter().all(Scalar::is_zero)
}

fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut e = vec![S::zero(); n];
    e[i] = S::one();
    e
}

/// Linear system in the `n^2` entries of `D` (row-major).
fn derivation_system<S: Scalar>(a: &StructureTensor<S>) -> Matrix<S> {
    let n = a.dim();
    let cols: Vec<Vec<S>> = (0..n * n)
        .map(|idx| {
            let mut e = Matrix::zeros(n, n);
            e[(idx / n, idx % n)] = S::one();
            leibniz_defect(a, &e)
        })
        .collect();
    let rows = cols[0].len();
    Matrix::from_fn(rows, n * n, |r, c| cols[c][r].clone())
}

pub fn derivation_space<S: Scalar>(a: &StructureTensor<S>) -> Result<DerivationSpace<S>> {
    require_jacobi(a)?;
    let n = a.dim();
    let kernel = derivation_system(a).nullspace();
    let echelon = if kernel.is_empty() { Vec::new() } else { Matrix::from_rows(kernel).row_space_basis() };
    let basis: Vec<Matrix<S>> = echelon
        .into_iter()
        .map(|v| Matrix::from_fn(n, n, |r, c| v[r * n + c].clone()))
        .collect();
    let trace_witness = basis.iter().find(|m| !m.trace().is_zero()).cloned();
    Ok(DerivationSpace { basis, trace_witness })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceObstruction<S> {
    pub has_nonzero_trace_derivation: bool,
    pub witness: Option<Matrix<S>>,
    /// Einstein metrics with nonzero scalar curvature are ruled out.
    pub einstein_nonzero_s_excluded: bool,
}

pub fn trace_obstruction<S: Scalar>(a: &StructureTensor<S>) -> Result<TraceObstruction<S>> {
    require_unimodular_killing_zero(a, "trace_obstruction")?;
    let space = derivation_space(a)?;
    Ok(TraceObstruction {
        has_nonzero_trace_derivation: space.has_nonzero_trace(),
        einstein_nonzero_s_excluded: space.has_nonzero_trace(),
        witness: space.trace_witness,
    })
}

/// Solutions `x` of `diag(x) . a = 0`, written as `x_p = Σ c_f x_f` for each
/// pivot variable `p` in terms of the free variables (the highest indices
/// stay free).
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalDerivations<S> {
    pub n: usize,
    pub free: Vec<usize>,
    /// `(p, [(f, c_f)])`, zero coefficients omitted.
    pub relations: Vec<(usize, Vec<(usize, S)>)>,
    /// A solution with nonzero trace, if one exists.
    pub trace_witness: Option<Vec<S>>,
}

impl<S: Scalar> DiagonalDerivations<S> {
    pub fn trace_can_be_nonzero(&self) -> bool {
        self.trace_witness.is_some()
    }

    /// The solution space as a basis, one vector per free variable.
    pub fn solution_basis(&self) -> Vec<Vec<S>> {
        self.free
            .iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.n];
                v[f] = S::one();
                for (p, terms) in &self.relations {
                    if let Some((_, c)) = terms.iter().find(|(g, _)| *g == f) {
                        v[*p] = c.clone();
                    }
                }
                v
            })
            .collect()
    }

    /// `x1 = x7 - x5, x2 = ...`; an empty relation prints as `0`.
    pub fn to_relation_string(&self) -> String {
        self.relations
            .iter()
            .map(|(p, terms)| format!("x{} = {}", p + 1, linear_form_string(terms)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn linear_form_string<S: Scalar>(terms: &[(usize, S)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (f, c)) in terms.iter().enumerate() {
        let neg = c.sign() < 0;
        let mag = if neg { -c.clone() } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != S::one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&format!("x{}", f + 1));
    }
    out
}

/// Solves `x_k = x_i + x_j` for every nonzero `a^k_{ij}`.
pub fn diagonal_derivation_solve<S: Scalar>(a: &StructureTensor<S>) -> DiagonalDerivations<S> {
    let n = a.dim();
    let rows: Vec<Vec<S>> = a
        .nonzero_terms()
        .into_iter()
        .map(|(i, j, k, _)| {
            let mut r = vec![S::zero(); n];
            r[k] = r[k].clone() + S::one();
            r[i] = r[i].clone() - S::one();
            r[j] = r[j].clone() - S::one();
            r
        })
        .collect();
    let (rref, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, n), Vec::new())
    } else {
        Matrix::from_rows(rows).rref()
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let relations = pivots
        .iter()
        .enumerate()
        .map(|(row, &p)| {
            let terms = free
                .iter()
                .filter_map(|&f| {
                    let c = -rref[(row, f)].clone();
                    (!c.is_zero()).then_some((f, c))
                })
                .collect();
            (p, terms)
        })
        .collect();
    let mut out = DiagonalDerivations { n, free, relations, trace_witness: None };
    out.trace_witness = out.solution_basis().into_iter().find(|v| {
        let t = v.iter().fold(S::zero(), |acc, x| acc + x.clone());
        !t.is_zero()
    });
    out
}

/// Parses relations such as `x1 = x7 - x5, x2 = 1/3*x6` (also `1/3 x6`).
pub fn parse_relations<S: Scalar>(text: &str, n: usize) -> Result<Vec<(usize, Vec<(usize, S)>)>> {
    use crate::error::Error;
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::parse(0, format!("missing '=' in '{part}'")))?;
        let p = parse_var(lhs.trim(), n)?;
        let mut terms: Vec<(usize, S)> = Vec::new();
        let mut neg = false;
        let mut buf = String::new();
        let flush = |buf: &mut String, neg: bool, terms: &mut Vec<(usize, S)>| -> Result<()> {
            let t = buf.trim().to_string();
            buf.clear();
            if t.is_empty() {
                return Ok(());
            }
            if t == "0" {
                return Ok(());
            }
            let x_at = t.find('x').ok_or_else(|| Error::parse(0, format!("missing variable in '{t}'")))?;
            let coeff = t[..x_at].trim().trim_end_matches('*').trim();
            let c = if coeff.is_empty() {
                S::one()
            } else {
                S::parse_literal(coeff).ok_or_else(|| Error::parse(0, format!("bad coefficient '{coeff}'")))?
            };
            let f = parse_var(&t[x_at..], n)?;
            terms.push((f, if neg { -c } else { c }));
            Ok(())
        };
        for ch in rhs.chars() {
            if ch == '+' || ch == '-' {
                flush(&mut buf, neg, &mut terms)?;
                neg = ch == '-';
            } else {
                buf.push(ch);
            }
        }
        flush(&mut buf, neg, &mut terms)?;
        terms.sort_by_key(|(f, _)| *f);
        out.push((p, terms));
    }
    Ok(out)
}

fn parse_var(text: &str, n: usize) -> Result<usize> {
    use crate::error::Error;
    let idx: usize = text
        .trim()
        .strip_prefix('x')
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::parse(0, format!("bad variable '{text}'")))?;
    if idx == 0 || idx > n {
        return Err(Error::DimensionMismatch(format!("variable x{idx} outside 1..={n}")));
    }
    Ok(idx - 1)
}
