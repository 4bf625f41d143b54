#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_moment::catalog::{builtin_catalog, Backend};
use ricci_moment::moment::DualStructureTensor;
use ricci_moment::scalar::{parse_rational, Rational};
use ricci_moment::{parse_metric, parse_structure, Matrix, Metric, Scalar, StructureTensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

/// Uniform in `{-3, ..., 3} \ {0}`.
pub fn small_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let v = rng.gen_range(1..=3i64);
    Rational::from_i64(if rng.gen_bool(0.5) { v } else { -v })
}

pub fn sparse_entry(rng: &mut ChaCha8Rng, density: f64) -> Rational {
    if rng.gen_bool(density) {
        small_nonzero(rng)
    } else {
        Rational::zero()
    }
}

pub fn random_tensor(rng: &mut ChaCha8Rng, n: usize, density: f64) -> StructureTensor<Rational> {
    let len = n * n * (n - 1) / 2;
    StructureTensor::from_vector(n, (0..len).map(|_| sparse_entry(rng, density)).collect()).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix<Rational> {
    Matrix::from_fn(n, n, |_, _| sparse_entry(rng, density))
}

/// Antisymmetric in the two upper indices: `b^{kj}_l = -b^{jk}_l`.
pub fn random_dual(rng: &mut ChaCha8Rng, n: usize, density: f64) -> DualStructureTensor<Rational> {
    let raw: Vec<Matrix<Rational>> = (0..n).map(|_| random_matrix(rng, n, density)).collect();
    let mats = (0..n)
        .map(|k| Matrix::from_fn(n, n, |j, l| raw[k][(j, l)].clone() - raw[j][(k, l)].clone()))
        .collect();
    DualStructureTensor::from_matrices(mats).unwrap()
}

/// Unit lower triangular times a signed diagonal times unit upper triangular.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    let lower = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Greater => sparse_entry(rng, 0.3),
        std::cmp::Ordering::Less => Rational::zero(),
    });
    let upper = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => sparse_entry(rng, 0.3),
        std::cmp::Ordering::Greater => Rational::zero(),
    });
    let d: Vec<Rational> = (0..n)
        .map(|_| {
            let v = Rational::from_i64(rng.gen_range(1..=2));
            if rng.gen_bool(0.5) { v } else { -v }
        })
        .collect();
    lower.mul(&Matrix::diagonal(&d)).mul(&upper)
}

/// `Aᵀ D A` with `D` a random signed diagonal.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Metric<Rational> {
    let a = random_invertible(rng, n);
    let d: Vec<Rational> = (0..n).map(|_| small_nonzero(rng)).collect();
    Metric::new(a.transpose().mul(&Matrix::diagonal(&d)).mul(&a)).unwrap()
}

/// Diagonally dominant, so float routes stay well conditioned.
pub fn tame_metric(rng: &mut ChaCha8Rng, n: usize) -> Metric<Rational> {
    let mut m = Matrix::from_fn(n, n, |_, _| Rational::zero());
    for i in 0..n {
        let d = Rational::from_i64(rng.gen_range(n as i64 + 1..=n as i64 + 3));
        m[(i, i)] = if rng.gen_bool(0.5) { d } else { -d };
        for j in 0..i {
            let v = Rational::from_i64(rng.gen_range(-1..=1));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    Metric::new(m).unwrap()
}

pub fn random_diagonal_metric(rng: &mut ChaCha8Rng, n: usize) -> Metric<Rational> {
    let d: Vec<Rational> = (0..n).map(|_| small_nonzero(rng)).collect();
    Metric::diagonal(&d).unwrap()
}

/// Exact catalog algebras, with the metrics the catalog lists.
pub fn catalog_algebras() -> Vec<(String, StructureTensor<Rational>, Vec<Metric<Rational>>)> {
    builtin_catalog()
        .into_iter()
        .filter(|e| e.backend == Backend::Exact)
        .map(|e| {
            let a: StructureTensor<Rational> = parse_structure(&e.structure).unwrap();
            let metrics = e.metrics.iter().map(|m| parse_metric(&m.metric, a.dim()).unwrap()).collect();
            (e.name, a, metrics)
        })
        .collect()
}

/// Catalog algebras paired with their own metrics plus `extra` random
/// well-conditioned ones.
pub fn catalog_pairs(seed: u64, extra: usize) -> Vec<(String, StructureTensor<Rational>, Metric<Rational>)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for (name, a, metrics) in catalog_algebras() {
        for g in metrics {
            out.push((name.clone(), a.clone(), g));
        }
        for _ in 0..extra {
            let g = tame_metric(&mut r, a.dim());
            out.push((name.clone(), a.clone(), g));
        }
    }
    out
}
