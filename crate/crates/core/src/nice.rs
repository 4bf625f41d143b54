//! Nice bases, diagonal Ricci tensors and a diagonal Einstein search.
//!
//! A basis is nice when every `e_i ∧ e_j` feeds at most one `e_k`, and the
//! source pairs of each `e_k` are pairwise disjoint. Diagonal metrics on a
//! nice basis of a nilpotent algebra have diagonal Ricci tensor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{require_unimodular_killing_zero, StructureTensor};
use crate::curvature::ricci_killing_zero;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::{rationalize, Float, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceViolation {
    /// `e_i ∧ e_j` has components along two targets (0-based).
    SharedPair { pair: (usize, usize), targets: (usize, usize) },
    /// Two distinct source pairs of the same target share an index.
    OverlappingPairs { target: usize, first: (usize, usize), second: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceReport {
    pub is_nice: bool,
    pub violations: Vec<NiceViolation>,
}

pub fn nice_basis_check<S: Scalar>(a: &StructureTensor<S>) -> NiceReport {
    let terms = a.nonzero_terms();
    let mut violations = Vec::new();
    for (x, &(i, j, k, _)) in terms.iter().enumerate() {
        for &(l, m, h, _) in &terms[x + 1..] {
            if (i, j) == (l, m) && k != h {
                violations.push(NiceViolation::SharedPair { pair: (i, j), targets: (k, h) });
            } else if k == h && (i, j) != (l, m) && [l, m].iter().any(|p| *p == i || *p == j) {
                violations.push(NiceViolation::OverlappingPairs { target: k, first: (i, j), second: (l, m) });
            }
        }
    }
    NiceReport { is_nice: violations.is_empty(), violations }
}

fn require_nice<S: Scalar>(a: &StructureTensor<S>) -> Result<()> {
    let report = nice_basis_check(a);
    if report.is_nice {
        Ok(())
    } else {
        Err(Error::NotNice(format!("{:?}", report.violations[0])))
    }
}

fn require_nonzero_diagonal<S: Scalar>(a: &StructureTensor<S>, diag: &[S]) -> Result<()> {
    if diag.len() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} diagonal entries for dimension {}",
            diag.len(),
            a.dim()
        )));
    }
    if let Some(i) = diag.iter().position(Scalar::is_zero) {
        return Err(Error::precondition("diagonal_ricci", format!("diagonal entry g{} is zero", i + 1)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalRicci<S> {
    /// Diagonal of the Ricci operator.
    pub entries: Vec<S>,
    pub off_diagonal_max: f64,
}

pub fn diagonal_ricci<S: Scalar>(a: &StructureTensor<S>, diag: &[S]) -> Result<DiagonalRicci<S>> {
    require_nice(a)?;
    require_nonzero_diagonal(a, diag)?;
    let ric = ricci_killing_zero(a, &Metric::diagonal(diag)?)?;
    let n = a.dim();
    let mut off = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                off = off.max(ric.ric_op[(r, c)].abs_f64());
            }
        }
    }
    Ok(DiagonalRicci { entries: (0..n).map(|i| ric.ric_op[(i, i)].clone()).collect(), off_diagonal_max: off })
}

/// `ric_k = Σ_t c_t Π_i g_i^{e_ti}` for a diagonal metric.
#[derive(Clone, Debug)]
struct RicciMonomials {
    rows: Vec<Vec<(f64, Vec<i32>)>>,
}

impl RicciMonomials {
    fn new<S: Scalar>(a: &StructureTensor<S>) -> Self {
        let n = a.dim();
        let mut rows = vec![Vec::new(); n];
        for (i, j, k, c) in a.nonzero_terms() {
            let c2 = c.to_f64() * c.to_f64();
            let mut e = vec![0; n];
            e[k] += 1;
            e[i] -= 1;
            e[j] -= 1;
            rows[k].push((0.5 * c2, e));
            // (ad e_i)_{kj} = c and (ad e_j)_{ki} = -c
            for (src, other) in [(i, j), (j, i)] {
                let mut e = vec![0; n];
                e[k] += 1;
                e[other] -= 1;
                e[src] -= 1;
                rows[src].push((-0.5 * c2, e));
            }
        }
        Self { rows }
    }

    /// Values and log-derivatives at `g_i = s_i exp(y_i)`.
    fn eval(&self, signs: &[f64], y: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = y.len();
        let mut f = vec![0.0; n];
        let mut jac = vec![vec![0.0; n]; n];
        for (k, row) in self.rows.iter().enumerate() {
            for (c, e) in row {
                let mut v = *c;
                let mut log = 0.0;
                for m in 0..n {
                    if e[m] != 0 {
                        log += e[m] as f64 * y[m];
                        if e[m] % 2 != 0 {
                            v *= signs[m];
                        }
                    }
                }
                v *= log.exp();
                f[k] += v;
                for m in 0..n {
                    if e[m] != 0 {
                        jac[k][m] += e[m] as f64 * v;
                    }
                }
            }
        }
        (f, jac)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub max_denominator: u64,
    pub residual_tolerance: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 200, max_iterations: 100, seed: 0, max_denominator: 1_000_000, residual_tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalEinstein<S> {
    pub pattern: Vec<i8>,
    pub diag: Vec<S>,
    pub lambda: S,
    pub scalar: S,
    /// Verified in the exact backend after rationalization.
    pub exact: bool,
}

/// All patterns with `g_1 > 0`; negating a metric negates its Ricci operator.
pub fn all_sign_patterns(n: usize) -> Vec<Vec<i8>> {
    (0..1u64 << (n - 1))
        .map(|bits| {
            (0..n).map(|i| if i > 0 && bits >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect()
        })
        .collect()
}

pub fn diagonal_einstein_search<S: Scalar>(
    a: &StructureTensor<S>,
    patterns: Option<&[Vec<i8>]>,
    opts: &SearchOptions,
) -> Result<Vec<DiagonalEinstein<S>>> {
    require_unimodular_killing_zero(a, "diagonal_einstein_search")?;
    require_nice(a)?;
    let n = a.dim();
    let owned;
    let patterns = match patterns {
        Some(p) => p,
        None => {
            owned = all_sign_patterns(n);
            &owned
        }
    };
    if let Some(p) = patterns.iter().find(|p| p.len() != n || p.iter().any(|s| *s != 1 && *s != -1)) {
        return Err(Error::DimensionMismatch(format!("sign pattern {p:?} for dimension {n}")));
    }
    let mono = RicciMonomials::new(a);
    let jobs: Vec<(usize, usize)> =
        (0..patterns.len()).flat_map(|p| (0..opts.restarts).map(move |r| (p, r))).collect();
    let raw: Vec<(usize, Vec<f64>)> = jobs
        .par_iter()
        .filter_map(|&(p, r)| {
            let signs: Vec<f64> = patterns[p].iter().map(|s| *s as f64).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(
                opts.seed ^ (p as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (r as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9),
            );
            let target = if r % 2 == 0 { 1.0 } else { -1.0 };
            newton(&mono, &signs, target, &mut rng, opts).map(|g| (p, g))
        })
        .collect();

    let mut out: Vec<(usize, DiagonalEinstein<S>)> = Vec::new();
    for (p, g) in raw {
        if let Some(found) = verify_candidate(a, &patterns[p], &g, opts)? {
            let dup = out.iter().any(|(q, e)| *q == p && same_metric(&e.diag, &found.diag));
            if !dup {
                out.push((p, found));
            }
        }
    }
    out.sort_by(|(p, x), (q, y)| {
        p.cmp(q).then(y.exact.cmp(&x.exact)).then_with(|| {
            let xs: Vec<f64> = x.diag.iter().map(Scalar::to_f64).collect();
            let ys: Vec<f64> = y.diag.iter().map(Scalar::to_f64).collect();
            xs.partial_cmp(&ys).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

fn same_metric<S: Scalar>(x: &[S], y: &[S]) -> bool {
    x.iter().zip(y).all(|(u, v)| {
        let (u, v) = (u.to_f64(), v.to_f64());
        (u - v).abs() <= 1e-7 * u.abs().max(v.abs()).max(1.0)
    })
}

/// Damped Gauss-Newton on `ric_k(g) = target` in `y = log|g|`; returns the
/// solution rescaled to `|g_1| = 1`.
fn newton(mono: &RicciMonomials, signs: &[f64], target: f64, rng: &mut ChaCha8Rng, opts: &SearchOptions) -> Option<Vec<f64>> {
    let n = signs.len();
    let mut y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let residual = |y: &[f64]| {
        let (f, jac) = mono.eval(signs, y);
        let r: Vec<f64> = f.iter().map(|v| v - target).collect();
        (r, jac)
    };
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let (mut r, mut jac) = residual(&y);
    let mut cost = norm(&r);
    let mut damping = 1e-3;
    for _ in 0..opts.max_iterations {
        if !cost.is_finite() {
            return None;
        }
        if cost.sqrt() < 1e-13 {
            break;
        }
        let jt = Matrix::from_fn(n, n, |m, k| Float(jac[k][m]));
        let jtj = jt.mul(&jt.transpose());
        let rhs: Vec<Float> = jt.mul_vec(&r.iter().map(|v| Float(-v)).collect::<Vec<_>>());
        let mut stepped = false;
        for _ in 0..12 {
            let sys = Matrix::from_fn(n, n, |i, j| {
                let d = if i == j { Float(damping * (1.0 + jtj[(i, i)].0)) } else { Float(0.0) };
                jtj[(i, j)] + d
            });
            let Some(delta) = solve(&sys, &rhs) else {
                damping *= 10.0;
                continue;
            };
            let len = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
            let scale = if len > 2.0 { 2.0 / len } else { 1.0 };
            let trial: Vec<f64> = y.iter().zip(&delta).map(|(a, d)| a + scale * d).collect();
            let (tr, tj) = residual(&trial);
            let tc = norm(&tr);
            if tc.is_finite() && tc < cost {
                y = trial;
                r = tr;
                jac = tj;
                cost = tc;
                damping = (damping / 3.0).max(1e-15);
                stepped = true;
                break;
            }
            damping *= 4.0;
        }
        if !stepped {
            break;
        }
    }
    if cost.sqrt() > opts.residual_tolerance {
        return None;
    }
    let shift = y[0];
    Some((0..n).map(|i| signs[i] * (y[i] - shift).exp()).collect())
}

fn solve(m: &Matrix<Float>, rhs: &[Float]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| {
        let mut row: Vec<f64> = (0..n).map(|j| m[(i, j)].0).collect();
        row.push(rhs[i].0);
        row
    }).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn verify_candidate<S: Scalar>(
    a: &StructureTensor<S>,
    pattern: &[i8],
    g: &[f64],
    opts: &SearchOptions,
) -> Result<Option<DiagonalEinstein<S>>> {
    if S::EXACT {
        let rational: Option<Vec<S>> = g
            .iter()
            .map(|x| {
                rationalize(*x, opts.max_denominator)
                    .filter(|q| (Float::from_rational(q).0 - x).abs() <= 1e-8 * x.abs().max(1.0))
                    .map(|q| S::from_rational(&q))
            })
            .collect();
        if let Some(diag) = rational {
            let ric = ricci_killing_zero(a, &Metric::diagonal(&diag)?)?;
            if let Some(lambda) = ric.einstein.filter(|l| !l.is_zero()) {
                return Ok(Some(DiagonalEinstein {
                    pattern: pattern.to_vec(),
                    diag,
                    lambda,
                    scalar: ric.scalar,
                    exact: true,
                }));
            }
        }
    }
    let af = a.to_float();
    let gf: Vec<Float> = g.iter().map(|x| Float(*x)).collect();
    let ric = ricci_killing_zero(&af, &Metric::diagonal(&gf)?)?;
    let lambda = ric.ric_op[(0, 0)].0;
    let n = g.len();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let want = if r == c { lambda } else { 0.0 };
            worst = worst.max((ric.ric_op[(r, c)].0 - want).abs());
        }
    }
    if worst > opts.residual_tolerance || lambda.abs() < 1e-8 {
        return Ok(None);
    }
    Ok(Some(DiagonalEinstein {
        pattern: pattern.to_vec(),
        diag: g.iter().map(|x| S::from_f64(*x)).collect(),
        lambda: S::from_f64(lambda),
        scalar: S::from_f64(ric.scalar.0),
        exact: false,
    }))
}

impl<S: Scalar> DiagonalEinstein<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pattern": self.pattern,
            "diag": self.diag.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "lambda": self.lambda.to_json(),
            "scalar": self.scalar.to_json(),
            "exact": self.exact,
        })
    }
}
