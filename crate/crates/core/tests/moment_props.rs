mod common;

use common::*;
use rand::Rng;
use ricci_moment::moment::{
    act_dual, act_structure, dq, gl_pairing, infinitesimal_dual, infinitesimal_metric, infinitesimal_structure, moment, pairing,
    project_unimodular, q_map_raw, scalar_functional, DualStructureTensor,
};
use ricci_moment::scalar::{Float, Rational};
use ricci_moment::{Matrix, Scalar};

const CASES: usize = 500;

fn dim(r: &mut impl Rng) -> usize {
    r.gen_range(2..=5)
}

#[test]
fn moment_identity() {
    let mut r = rng(41);
    for case in 0..CASES {
        let n = dim(&mut r);
        let a = random_tensor(&mut r, n, 0.3);
        let b = random_dual(&mut r, n, 0.3);
        assert!(b.is_antisymmetric());
        let x = random_matrix(&mut r, n, 0.4);
        let mu = moment(&a, &b).unwrap().mu;
        let xa = infinitesimal_structure(&x, &a).unwrap();
        assert_eq!(gl_pairing(&mu, &x), pairing(&xa, &b).unwrap(), "case {case}");
    }
}

#[test]
fn moment_map_condition() {
    let mut r = rng(42);
    for case in 0..CASES {
        let n = dim(&mut r);
        let a = random_tensor(&mut r, n, 0.3);
        let b = random_dual(&mut r, n, 0.3);
        let v = random_tensor(&mut r, n, 0.3);
        let w = random_dual(&mut r, n, 0.3);
        let x = random_matrix(&mut r, n, 0.4);
        // μ is bilinear, so dμ(v, w) = μ(v, b) + μ(a, w)
        let dmu = moment(&v, &b).unwrap().mu.add(&moment(&a, &w).unwrap().mu);
        let xa = infinitesimal_structure(&x, &a).unwrap();
        let xb = infinitesimal_dual(&x, &b);
        let omega = pairing(&xa, &w).unwrap() - pairing(&v, &xb).unwrap();
        assert_eq!(gl_pairing(&dmu, &x), omega, "case {case}");
    }
}

#[test]
fn q_is_symmetric() {
    let mut r = rng(43);
    for case in 0..CASES {
        let n = dim(&mut r);
        let a1 = random_tensor(&mut r, n, 0.3);
        let a2 = random_tensor(&mut r, n, 0.3);
        let g = random_metric(&mut r, n);
        let lhs = pairing(&a1, &q_map_raw(&a2, &g)).unwrap();
        let rhs = pairing(&a2, &q_map_raw(&a1, &g)).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn q_is_equivariant() {
    let mut r = rng(44);
    for case in 0..CASES {
        let n = dim(&mut r);
        let a = random_tensor(&mut r, n, 0.3);
        let g = random_metric(&mut r, n);
        let h = random_invertible(&mut r, n);
        let lhs = q_map_raw(&act_structure(&h, &a).unwrap(), &g.act(&h).unwrap());
        let rhs = act_dual(&h, &q_map_raw(&a, &g)).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn dq_expansion() {
    let mut r = rng(45);
    for case in 0..CASES {
        let n = dim(&mut r);
        let a = random_tensor(&mut r, n, 0.3);
        let a_dir = random_tensor(&mut r, n, 0.3);
        let g = random_metric(&mut r, n);
        let x = random_matrix(&mut r, n, 0.4);
        let lhs = dq(&a, &g, &a_dir, &infinitesimal_metric(&x, &g)).unwrap();
        let xa = infinitesimal_structure(&x, &a).unwrap();
        let rhs = q_map_raw(&a_dir.sub(&xa), &g).add(&infinitesimal_dual(&x, &q_map_raw(&a, &g)));
        assert_eq!(lhs, rhs, "case {case}");
    }
}

fn max_diff(x: &DualStructureTensor<Float>, y: &DualStructureTensor<Float>) -> f64 {
    (0..x.dim()).map(|k| x.matrix(k).max_abs_diff(y.matrix(k))).fold(0.0, f64::max)
}

#[test]
fn dq_matches_finite_differences() {
    let mut r = rng(46);
    let h = 1e-6;
    for case in 0..CASES {
        let n = dim(&mut r);
        let a = random_tensor(&mut r, n, 0.3);
        let a_dir = random_tensor(&mut r, n, 0.3);
        let g = tame_metric(&mut r, n);
        let x = random_matrix(&mut r, n, 0.4);
        let xa = infinitesimal_structure(&x, &a).unwrap();
        let exact = q_map_raw(&a_dir.sub(&xa), &g)
            .add(&infinitesimal_dual(&x, &q_map_raw(&a, &g)))
            .convert(|s| Float(s.to_f64()));

        let af = a.to_float();
        let dirf = a_dir.to_float();
        let gf = g.to_float();
        let xf = x.map(|s| Float(s.to_f64()));
        let id = Matrix::<Float>::identity(n);
        // exp(tX) . S, to second order in t
        let step = |t: f64| {
            let e = id.add(&xf.scale(&Float(t))).add(&xf.mul(&xf).scale(&Float(t * t / 2.0)));
            q_map_raw(&af.add(&dirf.scale(&Float(t))), &gf.act(&e).unwrap())
        };
        let fd = step(h).sub(&step(-h)).scale(&Float(1.0 / (2.0 * h)));
        let scale = (0..n).map(|k| exact.matrix(k).max_abs()).fold(1.0, f64::max);
        assert!(max_diff(&fd, &exact) <= 1e-6 * scale, "case {case}: {}", max_diff(&fd, &exact));
    }
}

#[test]
fn scale_covariance() {
    let mut r = rng(47);
    for case in 0..200 {
        let n = dim(&mut r);
        let a = project_unimodular(&random_tensor(&mut r, n, 0.4));
        let g = random_metric(&mut r, n);
        let c = small_nonzero(&mut r);
        let s = scalar_functional(&a, &g).unwrap();
        assert_eq!(scalar_functional(&a, &g.scaled(&c)).unwrap(), s.clone() / c.clone(), "case {case}");
        // s(g.a, S) = s(a, g^{-1}.S) for g = c Id
        let cid = Matrix::<Rational>::identity(n).scale(&c);
        let lhs = scalar_functional(&act_structure(&cid, &a).unwrap(), &g).unwrap();
        let rhs = scalar_functional(&a, &g.act(&cid.inverse().unwrap()).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
        assert_eq!(lhs, s / (c.clone() * c), "case {case}");
    }
}
