//! Levi-Civita connection, Riemann and Ricci tensors of left-invariant
//! metrics, the six invariant bilinear forms `B1..B6`, and the tests built on
//! them.
//!
//! Everything exact is computed in the given basis with `g` and `g^{-1}`; the
//! only frame-based computation is [`ricci_index_oracle`], which works in
//! floating point.

use crate::algebra::{centre, derived_algebra, lower_central_series, require_jacobi, require_unimodular_killing_zero, StructureTensor};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SpanTracker};
use crate::metric::{pseudo_orthonormal_frame, Metric};
use crate::scalar::{Float, Scalar};

fn check_dims<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<()> {
    if a.dim() != metric.dim() {
        return Err(Error::DimensionMismatch(format!(
            "structure has dimension {}, metric {}",
            a.dim(),
            metric.dim()
        )));
    }
    Ok(())
}

/// `C_{ijk} = <[e_i, e_j], e_k>`.
fn lowered_brackets<S: Scalar>(a: &StructureTensor<S>, g: &Matrix<S>) -> Vec<S> {
    let n = a.dim();
    let mut c = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let br = a.bracket_basis(i, j);
            for k in 0..n {
                let mut acc = S::zero();
                for (m, b) in br.iter().enumerate() {
                    acc.add_mul(b, &g[(m, k)]);
                }
                c[(i * n + j) * n + k] = acc;
            }
        }
    }
    c
}

/// Christoffel symbols `Γ^k_{ij}` with `∇_{e_i} e_j = Γ^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCoefficients<S> {
    n: usize,
    gamma: Vec<S>,
}

impl<S: Scalar> ConnectionCoefficients<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.gamma[(i * self.n + j) * self.n + k].clone()
    }

    /// `∇_{e_i}` as a matrix acting on columns.
    pub fn operator(&self, i: usize) -> Matrix<S> {
        Matrix::from_fn(self.n, self.n, |k, j| self.get(i, j, k))
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Scalar::is_zero)
    }

    /// Torsion `Γ^k_{ij} - Γ^k_{ji} - a^k_{ij}` and metric compatibility
    /// `<∇_i e_j, e_k> + <e_j, ∇_i e_k>` vanish on all basis triples.
    pub fn is_levi_civita_of(&self, a: &StructureTensor<S>, metric: &Metric<S>) -> bool {
        let n = self.n;
        let g = metric.gram();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let torsion = self.get(i, j, k) - self.get(j, i, k) - a.get(i, j, k);
                    if !torsion.is_zero() {
                        return false;
                    }
                    let mut compat = S::zero();
                    for m in 0..n {
                        compat.add_mul(&self.get(i, j, m), &g[(m, k)]);
                        compat.add_mul(&self.get(i, k, m), &g[(m, j)]);
                    }
                    if !compat.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Koszul formula:
/// `2<∇_{e_i}e_j, e_k> = <[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>`.
pub fn levi_civita<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<ConnectionCoefficients<S>> {
    check_dims(a, metric)?;
    require_jacobi(a)?;
    Ok(koszul(a, metric))
}

fn koszul<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> ConnectionCoefficients<S> {
    let n = a.dim();
    let c = lowered_brackets(a, metric.gram());
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let half = S::one() / S::from_i64(2);
    let gi = metric.inverse_gram();
    let mut gamma = vec![S::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let lower: Vec<S> = (0..n)
                .map(|k| (c[idx(i, j, k)].clone() - c[idx(j, k, i)].clone() + c[idx(k, i, j)].clone()) * half.clone())
                .collect();
            for m in 0..n {
                let mut acc = S::zero();
                for (k, l) in lower.iter().enumerate() {
                    acc.add_mul(&gi[(m, k)], l);
                }
                gamma[idx(i, j, m)] = acc;
            }
        }
    }
    ConnectionCoefficients { n, gamma }
}

/// `R_{ijhl} = <R(e_i, e_j) e_h, e_l>` with
/// `R(x, y) = ∇_x ∇_y - ∇_y ∇_x - ∇_{[x,y]}`.
///
/// Sectional curvature of a nondegenerate plane is
/// `R_{ijji} / (g_ii g_jj - g_ij^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<S> {
    n: usize,
    /// `R(e_i, e_j)` as matrices acting on columns, `i < j`.
    operators: Vec<Matrix<S>>,
    lowered: Vec<S>,
}

impl<S: Scalar> CurvatureTensor<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, h: usize, l: usize) -> S {
        let n = self.n;
        self.lowered[((i * n + j) * n + h) * n + l].clone()
    }

    /// The operator `R(e_i, e_j)`.
    pub fn operator(&self, i: usize, j: usize) -> Matrix<S> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Matrix::zeros(self.n, self.n),
            std::cmp::Ordering::Less => self.operators[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.operators[pair_index(self.n, j, i)].scale(&-S::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lowered.iter().all(Scalar::is_zero)
    }

    /// Antisymmetry in both pairs, first Bianchi identity and pair symmetry.
    pub fn symmetry_violations(&self) -> usize {
        let n = self.n;
        let mut bad = 0;
        for i in 0..n {
            for j in 0..n {
                for h in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, h, l);
                        if !(r.clone() + self.get(j, i, h, l)).is_zero() {
                            bad += 1;
                        }
                        if !(r.clone() + self.get(i, j, l, h)).is_zero() {
                            bad += 1;
                        }
                        if r.clone() != self.get(h, l, i, j) {
                            bad += 1;
                        }
                        let bianchi = r + self.get(j, h, i, l) + self.get(h, i, j, l);
                        if !bianchi.is_zero() {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad
    }

    /// `Ric(e_j, e_h) = Tr(x -> R(x, e_j) e_h)`.
    pub fn ricci_form(&self) -> Matrix<S> {
        let n = self.n;
        Matrix::from_fn(n, n, |j, h| {
            let mut acc = S::zero();
            for i in 0..n {
                acc = acc + self.operator(i, j)[(i, h)].clone();
            }
            acc
        })
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn riemann<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<CurvatureTensor<S>> {
    let conn = levi_civita(a, metric)?;
    Ok(riemann_from(a, metric, &conn))
}

fn riemann_from<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>, conn: &ConnectionCoefficients<S>) -> CurvatureTensor<S> {
    let n = a.dim();
    let nabla: Vec<Matrix<S>> = (0..n).map(|i| conn.operator(i)).collect();
    let mut operators = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut r = nabla[i].commutator(&nabla[j]);
            for (m, nm) in nabla.iter().enumerate() {
                let c = a.get(i, j, m);
                if !c.is_zero() {
                    r = r.sub(&nm.scale(&c));
                }
            }
            operators.push(r);
        }
    }
    let mut tensor = CurvatureTensor { n, operators, lowered: Vec::new() };
    let g = metric.gram();
    let mut lowered = vec![S::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let lr = g.mul(&tensor.operator(i, j));
            for h in 0..n {
                for l in 0..n {
                    lowered[((i * n + j) * n + h) * n + l] = lr[(l, h)].clone();
                }
            }
        }
    }
    tensor.lowered = lowered;
    tensor
}

#[derive(Clone, Debug, PartialEq)]
pub struct RicciData<S> {
    /// The symmetric tensor `Ric(e_i, e_j)`.
    pub ric_form: Matrix<S>,
    /// The operator `ric = g^{-1} Ric`.
    pub ric_op: Matrix<S>,
    pub scalar: S,
    /// `Some(λ)` when `ric = λ Id`.
    pub einstein: Option<S>,
}

impl<S: Scalar> RicciData<S> {
    pub fn from_form(ric_form: Matrix<S>, metric: &Metric<S>) -> Self {
        let ric_op = metric.raise_form(&ric_form);
        let scalar = ric_op.trace();
        let n = ric_op.rows();
        let lambda = scalar.clone() / S::from_i64(n as i64);
        let einstein = (ric_op.sub(&Matrix::identity(n).scale(&lambda)).is_zero()).then_some(lambda);
        Self { ric_form, ric_op, scalar, einstein }
    }

    pub fn is_ricci_flat(&self) -> bool {
        self.ric_form.is_zero()
    }

    pub fn to_float(&self) -> RicciData<Float> {
        let f = |x: &S| Float(x.to_f64());
        RicciData {
            ric_form: self.ric_form.map(f),
            ric_op: self.ric_op.map(f),
            scalar: f(&self.scalar),
            einstein: self.einstein.as_ref().map(f),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ric_form": self.ric_form.to_json(),
            "ric_op": self.ric_op.to_json(),
            "scalar": self.scalar.to_json(),
            "einstein": self.einstein.as_ref().map(Scalar::to_json),
        })
    }
}

/// The six invariant bilinear forms as `n x n` matrices in the given basis,
/// plus the traces of `B2`, `B3`, `B4` (with respect to the metric).
///
/// * `B1(v,w) = Tr ad((v ⌟ dw♭ + w ⌟ dv♭)♯) = -<w, [v,Z]> - <v, [w,Z]>`
/// * `B2(v,w) = Tr ad(v) Tr ad(w)`
/// * `B3(v,w) = <ad v, ad w>`
/// * `B4(v,w) = Tr(ad v ∘ ad w)`
/// * `B5(v,w) = <dv♭, dw♭>`
/// * `B6(v,w) = <ad(v)♭, dw♭> + <ad(w)♭, dv♭>`, pairing in `T* ⊗ T*`
///
/// with `dα(x, y) = -α([x, y])`.
#[derive(Clone, Debug, PartialEq)]
pub struct BForms<S> {
    pub b: [Matrix<S>; 6],
    pub trace_b2: S,
    pub trace_b3: S,
    pub trace_b4: S,
}

impl<S: Scalar> BForms<S> {
    pub fn get(&self, k: usize) -> &Matrix<S> {
        &self.b[k - 1]
    }

    /// `-1/2 B1 + 1/2 B5 - 1/2 B3 - 1/2 B4`.
    pub fn ricci(&self) -> Matrix<S> {
        let half = S::one() / S::from_i64(2);
        self.b[4].sub(&self.b[0]).sub(&self.b[2]).sub(&self.b[3]).scale(&half)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "B1": self.b[0].to_json(),
            "B2": self.b[1].to_json(),
            "B3": self.b[2].to_json(),
            "B4": self.b[3].to_json(),
            "B5": self.b[4].to_json(),
            "B6": self.b[5].to_json(),
            "trace_B2": self.trace_b2.to_json(),
            "trace_B3": self.trace_b3.to_json(),
            "trace_B4": self.trace_b4.to_json(),
        })
    }
}

/// `de_j♭` as the antisymmetric matrix `(x, y) -> -<e_j, [x, y]>`.
fn d_flat<S: Scalar>(a: &StructureTensor<S>, g: &Matrix<S>, j: usize) -> Matrix<S> {
    let n = a.dim();
    Matrix::from_fn(n, n, |x, y| {
        let mut acc = S::zero();
        for m in 0..n {
            acc.add_mul(&a.get(x, y, m), &g[(m, j)]);
        }
        -acc
    })
}

pub fn b_forms<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<BForms<S>> {
    check_dims(a, metric)?;
    let n = a.dim();
    let g = metric.gram();
    let ads = a.ad_matrices();
    let traces = a.ad_traces();
    let z = metric.sharp(&traces);
    let ds: Vec<Matrix<S>> = (0..n).map(|j| d_flat(a, g, j)).collect();
    // metric transposes g^{-1} A^T g
    let adjoints: Vec<Matrix<S>> = ads.iter().map(|m| metric.inverse_gram().mul(&m.transpose()).mul(g)).collect();
    // lowered ad: (x, y) -> <[v, x], y>, i.e. (g A)^T
    let ad_flat: Vec<Matrix<S>> = ads.iter().map(|m| g.mul(m).transpose()).collect();
    let g_ad_z: Vec<Vec<S>> = ads.iter().map(|m| g.mul_vec(&m.mul_vec(&z))).collect();

    let b1 = Matrix::from_fn(n, n, |j, h| -(g_ad_z[j][h].clone() + g_ad_z[h][j].clone()));
    let b2 = Matrix::from_fn(n, n, |j, h| traces[j].clone() * traces[h].clone());
    let b3 = Matrix::from_fn(n, n, |j, h| ads[j].trace_product(&adjoints[h]));
    let b4 = Matrix::from_fn(n, n, |j, h| ads[j].trace_product(&ads[h]));
    let b5 = Matrix::from_fn(n, n, |j, h| metric.pair_two_forms(&ds[j], &ds[h]));
    let half6 = Matrix::from_fn(n, n, |j, h| metric.pair_bilinear_forms(&ad_flat[j], &ds[h]));
    let b6 = half6.add(&half6.transpose());
    Ok(BForms {
        trace_b2: metric.trace_form(&b2),
        trace_b3: metric.trace_form(&b3),
        trace_b4: metric.trace_form(&b4),
        b: [b1, b2, b3, b4, b5, b6],
    })
}

/// `Ric = -1/2 B1 + 1/2 B5 - 1/2 B3 - 1/2 B4`, valid for every Lie algebra.
pub fn ricci_general<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<RicciData<S>> {
    check_dims(a, metric)?;
    require_jacobi(a)?;
    let forms = b_forms(a, metric)?;
    Ok(RicciData::from_form(forms.ricci(), metric))
}

/// `Ric(v, w) = 1/2 <dv♭, dw♭> - 1/2 <ad v, ad w>`; refuses algebras that are
/// not unimodular with zero Killing form.
pub fn ricci_killing_zero<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<RicciData<S>> {
    check_dims(a, metric)?;
    require_unimodular_killing_zero(a, "ricci_killing_zero")?;
    Ok(RicciData::from_form(killing_zero_form(a, metric), metric))
}

pub(crate) fn killing_zero_form<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Matrix<S> {
    let n = a.dim();
    let g = metric.gram();
    let half = S::one() / S::from_i64(2);
    let ads = a.ad_matrices();
    let adjoints: Vec<Matrix<S>> = ads.iter().map(|m| metric.inverse_gram().mul(&m.transpose()).mul(g)).collect();
    let ds: Vec<Matrix<S>> = (0..n).map(|j| d_flat(a, g, j)).collect();
    Matrix::from_fn(n, n, |j, h| {
        (metric.pair_two_forms(&ds[j], &ds[h]) - ads[j].trace_product(&adjoints[h])) * half.clone()
    })
}

/// Ricci tensor from the orthonormal-frame index formula
///
/// `Ric(e_j,e_h) = 1/2 ε_k ε_i c_iki (c_kjh + c_khj) + 1/4 ε_k ε_i c_ikh c_ikj
///   - 1/2 ε_k ε_i c_ijk c_khi + 1/2 ε_k ε_i c_iki c_jhk - 1/2 ε_k ε_i c_ijk c_ihk`
///
/// evaluated in a pseudo-orthonormal frame and transformed back to the given
/// basis. Independent of every exact code path.
pub fn ricci_index_oracle<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<RicciData<Float>> {
    check_dims(a, metric)?;
    let n = a.dim();
    let (frame, eps) = pseudo_orthonormal_frame(metric)?;
    let af = a.to_float();
    let gf = metric.gram().map(|x| Float(x.to_f64()));
    let cols: Vec<Vec<Float>> = (0..n).map(|i| frame.column(i)).collect();
    let mut c = vec![0.0f64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let br = af.bracket(&cols[i], &cols[j]);
            let gbr = gf.mul_vec(&br);
            for k in 0..n {
                c[(i * n + j) * n + k] = gbr.iter().zip(&cols[k]).map(|(x, y)| x.0 * y.0).sum();
            }
        }
    }
    let cc = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    let e: Vec<f64> = eps.iter().map(|&x| x as f64).collect();
    let mut ric = Matrix::<Float>::zeros(n, n);
    for j in 0..n {
        for h in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    let w = e[i] * e[k];
                    acc += w
                        * (0.5 * cc(i, k, i) * (cc(k, j, h) + cc(k, h, j)) + 0.25 * cc(i, k, h) * cc(i, k, j)
                            - 0.5 * cc(i, j, k) * cc(k, h, i)
                            + 0.5 * cc(i, k, i) * cc(j, h, k)
                            - 0.5 * cc(i, j, k) * cc(i, h, k));
                }
            }
            ric[(j, h)] = Float(acc);
        }
    }
    // Ric in the frame is F^T Ric F, so back-transform with F^{-1}
    let finv = frame.inverse().map_err(|_| Error::DegenerateMetric)?;
    let form = finv.transpose().mul(&ric).mul(&finv);
    let sym = form.add(&form.transpose()).scale(&Float(0.5));
    Ok(RicciData::from_form(sym, &metric.to_float()))
}

/// The vector `Z` with `<Z, v> = Tr ad(v)`.
pub fn trace_vector<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<Vec<S>> {
    check_dims(a, metric)?;
    Ok(metric.sharp(&a.ad_traces()))
}

/// `Ric(v, v)` from the Ricci lemma and from
/// `-1/2 Σ <[v,e_i],[v,e_i]> - 1/2 B(v,v) + 1/4 Σ <[e_i,e_j],v>^2 - <[Z,v],v>`,
/// where the sums run over dual bases (`g^{ij}` contractions).
pub fn besse_check<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>, v: &[S]) -> Result<(S, S)> {
    check_dims(a, metric)?;
    let n = a.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {n}", v.len())));
    }
    let ric = ricci_general(a, metric)?;
    let rv = ric.ric_form.mul_vec(v);
    let lemma = v.iter().zip(&rv).fold(S::zero(), |mut acc, (x, y)| {
        acc.add_mul(x, y);
        acc
    });
    let gv = metric.flat(v);

    let gi = metric.inverse_gram();
    let basis = |i: usize| {
        let mut e = vec![S::zero(); n];
        e[i] = S::one();
        e
    };
    let brackets_v: Vec<Vec<S>> = (0..n).map(|i| a.bracket(v, &basis(i))).collect();
    let mut t1 = S::zero();
    let mut t3 = S::zero();
    for i in 0..n {
        for l in 0..n {
            if gi[(i, l)].is_zero() {
                continue;
            }
            t1.add_mul(&gi[(i, l)], &metric.inner(&brackets_v[i], &brackets_v[l]));
        }
    }
    // 1/4 Σ g^{ia} g^{jb} <[e_i,e_j],v> <[e_a,e_b],v>
    let pv: Vec<S> = (0..n * n)
        .map(|x| {
            let (i, j) = (x / n, x % n);
            let br = a.bracket_basis(i, j);
            br.iter().zip(&gv).fold(S::zero(), |mut acc, (b, w)| {
                acc.add_mul(b, w);
                acc
            })
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            let pij = &pv[i * n + j];
            if pij.is_zero() {
                continue;
            }
            for x in 0..n {
                for y in 0..n {
                    let w = gi[(i, x)].clone() * gi[(j, y)].clone();
                    if w.is_zero() {
                        continue;
                    }
                    t3.add_mul(&(w * pij.clone()), &pv[x * n + y]);
                }
            }
        }
    }
    let adv = crate::algebra::ad_matrix(a, v);
    let killing = adv.trace_product(&adv);
    let z = metric.sharp(&a.ad_traces());
    let zv = a.bracket(&z, v);
    let t4 = metric.inner(&zv, v);
    let half = S::one() / S::from_i64(2);
    let quarter = S::one() / S::from_i64(4);
    let besse = -(t1 * half.clone()) - killing * half + t3 * quarter - t4;
    Ok((lemma, besse))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MnReport {
    pub dim_m: usize,
    pub dim_n: usize,
    pub dim_derived: usize,
    pub dim_centre: usize,
    /// `dim M + dim N >= dim g^1 - dim Z`: the metric is not Einstein unless
    /// Ricci-flat.
    pub excluded: bool,
}

/// Null spaces of the induced pairings restricted to `ad(g) ⊂ Z°⊗g^1` and
/// `d(g*) ⊂ Λ²Z°`.
pub fn mn_criterion<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>) -> Result<MnReport> {
    check_dims(a, metric)?;
    require_jacobi(a)?;
    if lower_central_series(a).spaces.last().is_some_and(|s| s.dim() > 0) {
        return Err(Error::NotNilpotent { op: "mn_criterion" });
    }
    let n = a.dim();
    let dim_centre = centre(a).dim();
    let dim_derived = derived_algebra(a).dim();

    // images: ad(e_j) and d(e^j); restricted Gram matrices on a basis of each
    let ads: Vec<Vec<S>> = a.ad_matrices().into_iter().map(|m| m.as_slice().to_vec()).collect();
    let ad_basis = Matrix::from_rows(ads).row_space_basis();
    let ad_gram = Matrix::from_fn(ad_basis.len(), ad_basis.len(), |x, y| {
        let u = Matrix::from_rows(ad_basis[x].chunks(n).map(<[S]>::to_vec).collect());
        let w = Matrix::from_rows(ad_basis[y].chunks(n).map(<[S]>::to_vec).collect());
        metric.pair_operators(&u, &w)
    });
    // d(e^j) for the dual basis covector e^j: (x, y) -> -a^j_{xy}
    let ds: Vec<Vec<S>> = (0..n)
        .map(|j| Matrix::from_fn(n, n, |x, y| -a.get(x, y, j)).as_slice().to_vec())
        .collect();
    let d_basis = Matrix::from_rows(ds).row_space_basis();
    let d_gram = Matrix::from_fn(d_basis.len(), d_basis.len(), |x, y| {
        let u = Matrix::from_rows(d_basis[x].chunks(n).map(<[S]>::to_vec).collect());
        let w = Matrix::from_rows(d_basis[y].chunks(n).map(<[S]>::to_vec).collect());
        metric.pair_two_forms(&u, &w)
    });
    let dim_m = ad_basis.len() - if ad_basis.is_empty() { 0 } else { ad_gram.rank() };
    let dim_n = d_basis.len() - if d_basis.is_empty() { 0 } else { d_gram.rank() };
    Ok(MnReport {
        dim_m,
        dim_n,
        dim_derived,
        dim_centre,
        excluded: dim_m + dim_n + dim_centre >= dim_derived,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyReport {
    pub span_dim: usize,
    pub full: bool,
    pub locally_symmetric: bool,
    /// Dimension after each derivative order, starting with the curvature
    /// operators themselves.
    pub dims_by_order: Vec<usize>,
}

pub const DEFAULT_HOLONOMY_ORDER: usize = 3;

/// Span of the curvature operators `R(x, y)` and of `(∇^m R)(z_1..z_m; x, y)`
/// for `m <= max_order`, as a subspace of `gl(n)`. Derivatives stop early once
/// an order adds nothing or the span fills `so(g)`; the first derivative is
/// always computed to decide local symmetry.
pub fn holonomy_span<S: Scalar>(a: &StructureTensor<S>, metric: &Metric<S>, max_order: usize) -> Result<HolonomyReport> {
    let conn = levi_civita(a, metric)?;
    let curv = riemann_from(a, metric, &conn);
    let n = a.dim();
    let full_dim = n * (n - 1) / 2;
    let nabla: Vec<Matrix<S>> = (0..n).map(|i| conn.operator(i)).collect();

    let mut tracker = SpanTracker::<S>::new(n * n);
    // order-m tensor: components indexed by (k_1..k_m, i, j), row-major
    let mut current: Vec<Matrix<S>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            current.push(curv.operator(i, j));
        }
    }
    for m in &current {
        if !tracker.is_full() {
            tracker.insert(m.as_slice().to_vec());
        }
    }
    let mut dims = vec![tracker.dim()];
    let mut locally_symmetric = true;
    let mut slots = 2;
    for order in 1..=max_order.max(1) {
        let next = covariant_derivative(&current, slots, &nabla, &conn, n);
        if order == 1 {
            locally_symmetric = next.iter().all(Matrix::is_zero);
        }
        if order > max_order || tracker.dim() >= full_dim {
            break;
        }
        let before = tracker.dim();
        for m in &next {
            if tracker.dim() >= full_dim {
                break;
            }
            if !m.is_zero() {
                tracker.insert(m.as_slice().to_vec());
            }
        }
        dims.push(tracker.dim());
        if tracker.dim() == before {
            break;
        }
        current = next;
        slots += 1;
    }
    let span_dim = tracker.dim();
    Ok(HolonomyReport {
        span_dim,
        full: span_dim == full_dim,
        locally_symmetric,
        dims_by_order: dims,
    })
}

/// `(∇_{e_k} T)(e_{i_1}, .., e_{i_s}) = [∇_{e_k}, T(..)] - Σ_p T(.., ∇_{e_k} e_{i_p}, ..)`
/// for an operator-valued tensor with `slots` vector arguments.
fn covariant_derivative<S: Scalar>(
    t: &[Matrix<S>],
    slots: usize,
    nabla: &[Matrix<S>],
    conn: &ConnectionCoefficients<S>,
    n: usize,
) -> Vec<Matrix<S>> {
    let len = t.len();
    let mut out = Vec::with_capacity(len * n);
    for k in 0..n {
        for idx in 0..len {
            let mut m = nabla[k].commutator(&t[idx]);
            let mut stride = 1;
            for _ in 0..slots {
                let digit = (idx / stride) % n;
                for l in 0..n {
                    let c = conn.get(k, digit, l);
                    if c.is_zero() {
                        continue;
                    }
                    let other = idx - digit * stride + l * stride;
                    m = m.sub(&t[other].scale(&c));
                }
                stride *= n;
            }
            out.push(m);
        }
    }
    out
}
