mod common;

use common::*;
use ricci_moment::curvature::b_forms;
use ricci_moment::metric::{induced_pairing, pseudo_orthonormal_frame, TensorShape};
use ricci_moment::scalar::Rational;
use ricci_moment::{signature, Matrix, Metric, Scalar, StructureTensor};

#[test]
fn signature_is_congruence_invariant() {
    let mut r = rng(21);
    for case in 0..100 {
        let n = 2 + case % 6;
        let g = random_metric(&mut r, n);
        let a = random_invertible(&mut r, n);
        let moved = Metric::new(a.transpose().mul(g.gram()).mul(&a)).unwrap();
        assert_eq!(signature(&g).unwrap(), signature(&moved).unwrap(), "case {case}");
    }
}

#[test]
fn orthonormal_frames_are_orthonormal() {
    let mut r = rng(22);
    for case in 0..100 {
        let n = 2 + case % 7;
        let g = random_metric(&mut r, n);
        let (f, eps) = pseudo_orthonormal_frame(&g).unwrap();
        let gf = g.to_float();
        let m = f.transpose().mul(gf.gram()).mul(&f);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { eps[i] as f64 } else { 0.0 };
                worst = worst.max((m[(i, j)].0 - want).abs());
            }
        }
        assert!(worst <= 1e-9, "case {case}: {worst}");
        let sig = signature(&g).unwrap();
        assert_eq!(eps.iter().filter(|e| **e > 0).count(), sig.p);
    }
}

/// `⟨f, f⟩` on `V* ⊗ W` as the index sum `g_V^{kj} ⟨f e_k, f e_j⟩_W`.
fn pair_maps(gv_inv: &Matrix<Rational>, gw: &Matrix<Rational>, f1: &Matrix<Rational>, f2: &Matrix<Rational>) -> Rational {
    let (m, n) = (f1.rows(), f1.cols());
    let mut acc = Rational::zero();
    for k in 0..n {
        for j in 0..n {
            if gv_inv[(k, j)].is_zero() {
                continue;
            }
            let mut w = Rational::zero();
            for a in 0..m {
                for b in 0..m {
                    w = w + gw[(a, b)].clone() * f1[(a, k)].clone() * f2[(b, j)].clone();
                }
            }
            acc = acc + gv_inv[(k, j)].clone() * w;
        }
    }
    acc
}

#[test]
fn trace_lemma() {
    let mut r = rng(23);
    for case in 0..50 {
        let n = 2 + case % 5;
        let m = 1 + case % 4;
        let gv = random_metric(&mut r, n);
        // possibly degenerate scalar product on W
        let half = random_matrix(&mut r, m, 0.5);
        let gw = half.transpose().add(&half);
        let f = Matrix::from_fn(m, n, |_, _| sparse_entry(&mut r, 0.6));
        // h(u) = g^{ij} <f u, f e_j> e_i
        let gram_f = f.transpose().mul(&gw).mul(&f);
        let h = gv.inverse_gram().mul(&gram_f);
        assert_eq!(h.trace(), pair_maps(gv.inverse_gram(), &gw, &f, &f), "case {case}");

        // U spanned by random columns, π_U a left inverse
        let l = 1 + case % n;
        let inv = random_invertible(&mut r, n);
        let u = Matrix::from_fn(n, l, |i, j| inv[(i, j)].clone());
        let p_full = inv.inverse().unwrap();
        let p = Matrix::from_fn(l, n, |i, j| p_full[(i, j)].clone());
        assert_eq!(p.mul(&u), Matrix::identity(l));
        let lhs = p.mul(&h).mul(&u).trace();
        let restricted = f.mul(&u).mul(&p);
        assert_eq!(lhs, pair_maps(gv.inverse_gram(), &gw, &restricted, &f), "case {case}");
    }
}

#[test]
fn operator_pairing_is_the_trace_lemma_pairing() {
    let mut r = rng(24);
    for _ in 0..50 {
        let n = 3;
        let g = random_metric(&mut r, n);
        let u1 = random_matrix(&mut r, n, 0.6);
        let u2 = random_matrix(&mut r, n, 0.6);
        assert_eq!(g.pair_operators(&u1, &u2), pair_maps(g.inverse_gram(), g.gram(), &u1, &u2));
        let p = induced_pairing(&g, TensorShape::Operator);
        assert_eq!(p.pair(u1.as_slice(), u2.as_slice()), g.pair_operators(&u1, &u2));
    }
}

fn ad_ad(a: &StructureTensor<Rational>, g: &Metric<Rational>) -> Rational {
    let ads = a.ad_matrices();
    let gi = g.inverse_gram();
    let mut acc = Rational::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if !gi[(i, j)].is_zero() {
                acc = acc + gi[(i, j)].clone() * g.pair_operators(&ads[i], &ads[j]);
            }
        }
    }
    acc
}

fn d_d(a: &StructureTensor<Rational>, g: &Metric<Rational>) -> Rational {
    let n = a.dim();
    let de: Vec<Matrix<Rational>> = (0..n).map(|k| Matrix::from_fn(n, n, |i, j| -a.get(i, j, k))).collect();
    let mut acc = Rational::zero();
    for k in 0..n {
        for l in 0..n {
            if !g.gram()[(k, l)].is_zero() {
                acc = acc + g.gram()[(k, l)].clone() * g.pair_two_forms(&de[k], &de[l]);
            }
        }
    }
    acc
}

#[test]
fn b3_b5_traces() {
    let two = Rational::from_i64(2);
    for (name, a, g) in catalog_pairs(25, 2) {
        let b = b_forms(&a, &g).unwrap();
        let dd = d_d(&a, &g);
        assert_eq!(b.trace_b3, ad_ad(&a, &g), "{name}");
        assert_eq!(b.trace_b3, two.clone() * dd.clone(), "{name}");
        assert_eq!(g.trace_form(b.get(5)), dd, "{name}");
    }
}
