//! The Ricci operator as a moment map.
//!
//! A bracket `a` is handled as `e^i (x) a_i` with `a_i = ad(e_i)`; a dual
//! tensor `b = e_k (x) b_k` holds matrices `b_k` with entries
//! `b_k[j][l] = b^{kj}_l` (so `b(e^k)` maps `e_l` to `b^{kj}_l e_j`).
//!
//! * `c1(a, b) = Σ a_i b_i`, `c2(a, b) = Σ b_i a_i`
//! * `<a, b> = Tr c1 = Tr c2`
//! * `μ(a, b) = c1 - 2 c2`, paired with `X ∈ gl(n)` by `<μ, X> = Tr(μ X)`
//! * `q(a, S)_k = Σ_i g^{ki} g^{-1} a_i^T g`
//! * `g . a = Σ_i (g^{-T} e^i) (x) g a_i g^{-1}`, i.e. `(g.a)(x, y) = g[g^{-1}x, g^{-1}y]`
//! * `g . b = Σ_k (g e_k) (x) g b_k g^{-1}`, `g . S = g^{-T} S g^{-1}`
//! * infinitesimally `(Xa)_k = [X, a_k] - Σ_i X_{ik} a_i`,
//!   `(Xb)_k = [X, b_k] + Σ_j X_{kj} b_j`, `X.S = -X^T S - S X`

use crate::algebra::{jacobi_polarized, require_unimodular_killing_zero, StructureTensor};
use crate::curvature::RicciData;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::Scalar;

/// An element of `T (x) End T`, antisymmetric in its two upper indices.
#[derive(Clone, Debug, PartialEq)]
pub struct DualStructureTensor<S> {
    mats: Vec<Matrix<S>>,
}

impl<S: Scalar> DualStructureTensor<S> {
    pub fn zero(n: usize) -> Self {
        Self { mats: vec![Matrix::zeros(n, n); n] }
    }

    pub fn from_matrices(mats: Vec<Matrix<S>>) -> Result<Self> {
        let n = mats.len();
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("dual tensor needs n matrices of size n x n".into()));
        }
        let b = Self { mats };
        if !b.is_antisymmetric() {
            return Err(Error::precondition("dual_tensor", "b^{kj}_l must be antisymmetric in (k, j)"));
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    /// `b^{kj}_l`.
    pub fn get(&self, k: usize, j: usize, l: usize) -> S {
        self.mats[k][(j, l)].clone()
    }

    pub fn matrix(&self, k: usize) -> &Matrix<S> {
        &self.mats[k]
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(Matrix::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|k| (0..n).all(|j| (0..n).all(|l| (self.get(k, j, l) + self.get(j, k, l)).is_zero())))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { mats: self.mats.iter().zip(&other.mats).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { mats: self.mats.iter().zip(&other.mats).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { mats: self.mats.iter().map(|x| x.scale(s)).collect() }
    }

    /// Nonzero components `(k, j, l, b^{kj}_l)`, 0-based.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DualStructureTensor<T> {
        DualStructureTensor { mats: self.mats.iter().map(|m| m.map(&f)).collect() }
    }

    pub fn nonzero_terms(&self) -> Vec<(usize, usize, usize, S)> {
        let n = self.dim();
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let c = self.get(k, j, l);
                    if !c.is_zero() {
                        out.push((k, j, l, c));
                    }
                }
            }
        }
        out
    }

    /// `{"n", "components": [{"k","j","l","c"}]}` listing `b^{kj}_l` for
    /// `k < j` (1-based; the `k > j` half follows by antisymmetry).
    pub fn to_json(&self) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .nonzero_terms()
            .into_iter()
            .filter(|(k, j, _, _)| k < j)
            .map(|(k, j, l, c)| serde_json::json!({"k": k + 1, "j": j + 1, "l": l + 1, "c": c.to_json()}))
            .collect();
        serde_json::json!({ "n": self.dim(), "components": comps })
    }

    /// Human-readable sum `c e_k⊗e^l⊗e_j` over all nonzero components.
    pub fn to_tensor_string(&self) -> String {
        let mut out = String::new();
        for (k, j, l, c) in self.nonzero_terms() {
            let negative = c.sign() < 0;
            let mag = if negative { -c } else { c };
            let coeff = if mag == S::one() { String::new() } else { format!("{mag} ") };
            let sep = match (out.is_empty(), negative) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            out += &format!("{sep}{coeff}e{}⊗e^{}⊗e{}", k + 1, l + 1, j + 1);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// An element `X ∈ gl(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeDirection<S> {
    pub x: Matrix<S>,
    pub traceless: bool,
}

impl<S: Scalar> GaugeDirection<S> {
    pub fn new(x: Matrix<S>) -> Self {
        let traceless = x.trace().is_zero();
        Self { x, traceless }
    }
}

fn check_pair<S: Scalar>(a: &StructureTensor<S>, n: usize) -> Result<()> {
    if a.dim() != n {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {n}", a.dim())));
    }
    Ok(())
}

fn require_unimodular<S: Scalar>(a: &StructureTensor<S>, op: &'static str) -> Result<()> {
    match a.ad_traces().iter().position(|t| !t.is_zero()) {
        Some(index) => Err(Error::NotUnimodular { op, index }),
        None => Ok(()),
    }
}

/// Structure tensor with the given `ad` matrices.
pub fn from_ad_matrices<S: Scalar>(mats: &[Matrix<S>]) -> Result<StructureTensor<S>> {
    let n = mats.len();
    let mut a = StructureTensor::zero(n)?;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                a.set(i, j, k, mats[i][(k, j)].clone());
            }
        }
    }
    Ok(a)
}

/// Removes the `T*` component: `a - ι(t / (n-1))` where `ι(θ)(x, y) =
/// θ(x) y - θ(y) x` and `t_i = Tr ad(e_i)`.
pub fn project_unimodular<S: Scalar>(a: &StructureTensor<S>) -> StructureTensor<S> {
    let n = a.dim();
    let t = a.ad_traces();
    let d = S::from_i64(n as i64 - 1);
    let mut out = a.clone();
    for i in 0..n {
        for j in i + 1..n {
            let ti = t[i].clone() / d.clone();
            let tj = t[j].clone() / d.clone();
            out.set(i, j, j, a.get(i, j, j) - ti);
            out.set(i, j, i, a.get(i, j, i) + tj);
        }
    }
    out
}

/// `q(a, S)` without the unimodularity check.
pub fn q_map_raw<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> DualStructureTensor<S> {
    let n = a.dim();
    let g = metric.gram();
    let gi = metric.inverse_gram();
    let conj: Vec<Matrix<S>> = a.ad_matrices().iter().map(|m| gi.mul(&m.transpose()).mul(g)).collect();
    let mats = (0..n)
        .map(|k| {
            let mut acc = Matrix::zeros(n, n);
            for (i, c) in conj.iter().enumerate() {
                if !gi[(k, i)].is_zero() {
                    acc = acc.add(&c.scale(&gi[(k, i)]));
                }
            }
            acc
        })
        .collect();
    DualStructureTensor { mats }
}

/// `q(e^i (x) a_i, S) = S^{-1} e^i (x) S^{-1} a_i^T S`.
pub fn q_map<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<DualStructureTensor<S>> {
    check_pair(a, metric.dim())?;
    require_unimodular(a, "q_map")?;
    Ok(q_map_raw(a, metric))
}

/// Derivative of `q` at `(a, S)` in the direction `(a', δS)`, with `δS` a
/// symmetric matrix. Computed exactly by the product rule on
/// `g^{-1}`, `g^{-1} a_i^T g`.
pub fn dq<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>, a_dir: &StructureTensor<S>, delta: &Matrix<S>) -> Result<DualStructureTensor<S>> {
    let n = a.dim();
    check_pair(a, metric.dim())?;
    check_pair(a_dir, n)?;
    let g = metric.gram();
    let gi = metric.inverse_gram();
    let dgi = gi.mul(delta).mul(gi).scale(&-S::one());
    let ads = a.ad_matrices();
    let mut mats = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Matrix::zeros(n, n);
        for (i, ai) in ads.iter().enumerate() {
            let at = ai.transpose();
            let inner = gi.mul(&at).mul(g);
            let d_inner = dgi.mul(&at).mul(g).add(&gi.mul(&at).mul(delta));
            if !dgi[(k, i)].is_zero() {
                acc = acc.add(&inner.scale(&dgi[(k, i)]));
            }
            if !gi[(k, i)].is_zero() {
                acc = acc.add(&d_inner.scale(&gi[(k, i)]));
            }
        }
        mats.push(acc);
    }
    Ok(DualStructureTensor { mats }.add(&q_map_raw(a_dir, metric)))
}

/// `(c1, c2)`.
pub fn contractions<S: Scalar>(a: &StructureTensor<S>, b: &DualStructureTensor<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    check_pair(a, b.dim())?;
    let n = a.dim();
    let mut c1 = Matrix::zeros(n, n);
    let mut c2 = Matrix::zeros(n, n);
    for (i, ai) in a.ad_matrices().iter().enumerate() {
        c1 = c1.add(&ai.mul(&b.mats[i]));
        c2 = c2.add(&b.mats[i].mul(ai));
    }
    Ok((c1, c2))
}

/// `<a, b> = Σ Tr(a_i b_i)`.
pub fn pairing<S: Scalar>(a: &StructureTensor<S>, b: &DualStructureTensor<S>) -> Result<S> {
    check_pair(a, b.dim())?;
    let mut acc = S::zero();
    for (i, ai) in a.ad_matrices().iter().enumerate() {
        acc = acc + ai.trace_product(&b.mats[i]);
    }
    Ok(acc)
}

/// `<X, Y> = Tr(X Y)` on `gl(n)`.
pub fn gl_pairing<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> S {
    x.trace_product(y)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentData<S> {
    pub c1: Matrix<S>,
    pub c2: Matrix<S>,
    pub mu: Matrix<S>,
    pub pairing: S,
}

impl<S: Scalar> MomentData<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "c1": self.c1.to_json(),
            "c2": self.c2.to_json(),
            "mu": self.mu.to_json(),
            "pairing": self.pairing.to_json(),
        })
    }
}

/// `μ(a, b) = c1 - 2 c2` and `<a, b> = Tr c1`.
pub fn moment<S: Scalar>(a: &StructureTensor<S>, b: &DualStructureTensor<S>) -> Result<MomentData<S>> {
    let (c1, c2) = contractions(a, b)?;
    let mu = c1.sub(&c2.scale(&S::from_i64(2)));
    let pairing = c1.trace();
    Ok(MomentData { c1, c2, mu, pairing })
}

/// `ric = 1/4 c1(a, q(a,S)) - 1/2 c2(a, q(a,S))`.
pub fn ricci_via_moment<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<RicciData<S>> {
    check_pair(a, metric.dim())?;
    require_unimodular_killing_zero(a, "ricci_via_moment")?;
    let b = q_map_raw(a, metric);
    let (c1, c2) = contractions(a, &b)?;
    let ric_op = c1.scale(&(S::one() / S::from_i64(4))).sub(&c2.scale(&(S::one() / S::from_i64(2))));
    Ok(RicciData::from_form(metric.gram().mul(&ric_op), metric))
}

/// `g . a`, i.e. `(g.a)(x, y) = g[g^{-1} x, g^{-1} y]`.
pub fn act_structure<S: Scalar>(g: &Matrix<S>, a: &StructureTensor<S>) -> Result<StructureTensor<S>> {
    check_pair(a, g.rows())?;
    let n = a.dim();
    let gi = g.inverse()?;
    let conj: Vec<Matrix<S>> = a.ad_matrices().iter().map(|m| g.mul(m).mul(&gi)).collect();
    let mats: Vec<Matrix<S>> = (0..n)
        .map(|k| {
            let mut acc = Matrix::zeros(n, n);
            for (i, c) in conj.iter().enumerate() {
                if !gi[(i, k)].is_zero() {
                    acc = acc.add(&c.scale(&gi[(i, k)]));
                }
            }
            acc
        })
        .collect();
    from_ad_matrices(&mats)
}

/// `g . b = Σ_k (g e_k) (x) g b_k g^{-1}`.
pub fn act_dual<S: Scalar>(g: &Matrix<S>, b: &DualStructureTensor<S>) -> Result<DualStructureTensor<S>> {
    let n = b.dim();
    let gi = g.inverse()?;
    let conj: Vec<Matrix<S>> = b.mats.iter().map(|m| g.mul(m).mul(&gi)).collect();
    let mats = (0..n)
        .map(|k| {
            let mut acc = Matrix::zeros(n, n);
            for (j, c) in conj.iter().enumerate() {
                if !g[(k, j)].is_zero() {
                    acc = acc.add(&c.scale(&g[(k, j)]));
                }
            }
            acc
        })
        .collect();
    Ok(DualStructureTensor { mats })
}

/// `X a`: the derivative of `exp(tX) . a` at `t = 0`.
pub fn infinitesimal_structure<S: Scalar>(x: &Matrix<S>, a: &StructureTensor<S>) -> Result<StructureTensor<S>> {
    check_pair(a, x.rows())?;
    let ads = a.ad_matrices();
    let n = a.dim();
    let mats: Vec<Matrix<S>> = (0..n)
        .map(|k| {
            let mut acc = x.commutator(&ads[k]);
            for (i, ai) in ads.iter().enumerate() {
                if !x[(i, k)].is_zero() {
                    acc = acc.sub(&ai.scale(&x[(i, k)]));
                }
            }
            acc
        })
        .collect();
    from_ad_matrices(&mats)
}

/// `X b`.
pub fn infinitesimal_dual<S: Scalar>(x: &Matrix<S>, b: &DualStructureTensor<S>) -> DualStructureTensor<S> {
    let n = b.dim();
    let mats = (0..n)
        .map(|k| {
            let mut acc = x.commutator(&b.mats[k]);
            for j in 0..n {
                if !x[(k, j)].is_zero() {
                    acc = acc.add(&b.mats[j].scale(&x[(k, j)]));
                }
            }
            acc
        })
        .collect();
    DualStructureTensor { mats }
}

/// `X . S = -X^T S - S X` as a symmetric matrix.
pub fn infinitesimal_metric<S: Scalar>(x: &Matrix<S>, metric: &Metric<S>) -> Matrix<S> {
    let g = metric.gram();
    x.transpose().mul(g).add(&g.mul(x)).scale(&-S::one())
}

/// Target of [`gauge_action`].
#[derive(Clone)]
pub enum GaugeTarget<S> {
    Structure(StructureTensor<S>),
    Metric(Metric<S>),
    Dual(DualStructureTensor<S>),
}

/// Finite action of an invertible `g`. The infinitesimal versions are
/// [`infinitesimal_structure`], [`infinitesimal_dual`] and
/// [`infinitesimal_metric`].
pub fn gauge_action<S: Scalar>(g: &Matrix<S>, target: &GaugeTarget<S>) -> Result<GaugeTarget<S>> {
    Ok(match target {
        GaugeTarget::Structure(a) => GaugeTarget::Structure(act_structure(g, a)?),
        GaugeTarget::Metric(m) => GaugeTarget::Metric(m.act(g)?),
        GaugeTarget::Dual(b) => GaugeTarget::Dual(act_dual(g, b)?),
    })
}

/// `s(a, S) = -1/4 <a, q(a, S)>`.
pub fn scalar_functional<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<S> {
    let b = q_map(a, metric)?;
    Ok(pairing(a, &b)? * (-S::one() / S::from_i64(4)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeDerivative<S> {
    /// `(X^+ s)(a, S) = ds(Xa, 0)`.
    pub x_plus_s: S,
    /// `<ric, X> = Tr(ric X)`.
    pub ric_pairing: S,
    /// `1/4 <Xa, q(a, S)>`.
    pub moment_pairing: S,
    /// `<ric, X> = 1/4 <Xa, q> = -1/2 X^+ s`.
    pub identities_hold: bool,
}

pub fn gauge_derivative<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>, x: &GaugeDirection<S>) -> Result<GaugeDerivative<S>> {
    let ric = ricci_via_moment(a, metric)?;
    let b = q_map_raw(a, metric);
    let xa = infinitesimal_structure(&x.x, a)?;
    let quarter = S::one() / S::from_i64(4);
    let xa_b = pairing(&xa, &b)?;
    let a_qxa = pairing(a, &q_map_raw(&xa, metric))?;
    let x_plus_s = -(xa_b.clone() * quarter.clone()) - a_qxa * quarter.clone();
    let ric_pairing = gl_pairing(&ric.ric_op, &x.x);
    let moment_pairing = xa_b * quarter;
    let identities_hold = ric_pairing == moment_pairing && ric_pairing == x_plus_s.clone() * (-S::one() / S::from_i64(2));
    Ok(GaugeDerivative { x_plus_s, ric_pairing, moment_pairing, identities_hold })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    /// Dimension of the tangent space cut out by the linearized Jacobi
    /// identity inside the unimodular module.
    pub tangent_dim: usize,
    /// `<a', q(a, S)> = 0` on that tangent space.
    pub critical: bool,
    /// Same, additionally linearizing the zero-Killing-form condition.
    pub tangent_dim_killing: usize,
    pub critical_killing: bool,
}

/// Coordinates are those of `StructureTensor::as_vector`.
fn pairing_functional<S: Scalar>(n: usize, b: &DualStructureTensor<S>) -> Vec<S> {
    let mut f = Vec::with_capacity(n * n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                // a'^k_{ij} sits in ad(e_i)[k][j] and, negated, in ad(e_j)[k][i]
                f.push(b.mats[i][(j, k)].clone() - b.mats[j][(i, k)].clone());
            }
        }
    }
    f
}

fn basis_tensor<S: Scalar>(n: usize, coord: usize) -> StructureTensor<S> {
    let mut v = vec![S::zero(); n * n * (n - 1) / 2];
    v[coord] = S::one();
    StructureTensor::from_vector(n, v).expect("valid size")
}

/// Decides `<a', q(a, S)> = 0` for all `a'` tangent at `a` to the Lie
/// algebras in the unimodular module, with and without the linearized
/// Killing-form condition.
pub fn jacobi_tangent_critical<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<CriticalReport> {
    check_pair(a, metric.dim())?;
    require_unimodular_killing_zero(a, "jacobi_tangent_critical")?;
    let n = a.dim();
    let dim = n * n * (n - 1) / 2;
    let ads = a.ad_matrices();

    // columns of the linear constraint system, one per coordinate
    let mut jac_cols: Vec<Vec<S>> = Vec::with_capacity(dim);
    let mut kill_cols: Vec<Vec<S>> = Vec::with_capacity(dim);
    for c in 0..dim {
        let e = basis_tensor::<S>(n, c);
        let mut col: Vec<S> = jacobi_polarized(a, &e).components.into_iter().flat_map(|(_, v)| v).collect();
        col.extend(e.ad_traces());
        let ead = e.ad_matrices();
        let mut kcol = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                kcol.push(ead[x].trace_product(&ads[y]) + ads[x].trace_product(&ead[y]));
            }
        }
        jac_cols.push(col);
        kill_cols.push(kcol);
    }
    let rows_j = jac_cols[0].len();
    let jac = Matrix::from_fn(rows_j, dim, |r, c| jac_cols[c][r].clone());
    let rows_k = kill_cols[0].len();
    let both = Matrix::from_fn(rows_j + rows_k, dim, |r, c| {
        if r < rows_j {
            jac_cols[c][r].clone()
        } else {
            kill_cols[c][r - rows_j].clone()
        }
    });

    let f = pairing_functional(n, &q_map_raw(a, metric));
    let verdict = |m: &Matrix<S>| -> (usize, bool) {
        let kernel = m.nullspace();
        let critical = kernel.iter().all(|v| {
            let mut acc = S::zero();
            for (x, y) in v.iter().zip(&f) {
                acc.add_mul(x, y);
            }
            acc.is_zero()
        });
        (kernel.len(), critical)
    };
    let (tangent_dim, critical) = verdict(&jac);
    let (tangent_dim_killing, critical_killing) = verdict(&both);
    Ok(CriticalReport { tangent_dim, critical, tangent_dim_killing, critical_killing })
}
