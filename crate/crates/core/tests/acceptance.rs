//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` or just `cargo test`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ricci_moment::catalog::{builtin_catalog, Backend, CatalogEntry};
use ricci_moment::curvature::{holonomy_span, mn_criterion, ricci_general, ricci_index_oracle, ricci_killing_zero};
use ricci_moment::derivations::{derivation_space, diagonal_derivation_solve, parse_relations};
use ricci_moment::metric::signature;
use ricci_moment::moment::{
    act_dual, act_structure, contractions, dq, gl_pairing, infinitesimal_dual, infinitesimal_metric, infinitesimal_structure, moment,
    pairing, q_map, q_map_raw, ricci_via_moment,
};
use ricci_moment::nice::{diagonal_einstein_search, SearchOptions};
use ricci_moment::scalar::{Float, Rational};
use ricci_moment::{classify, parse_metric, parse_structure, Error, Matrix, Metric, Scalar, StructureTensor};

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Self {
        Failure(s.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if cond { Ok(()) } else { Err(Failure(msg())) }
}

fn entry(name: &str) -> CatalogEntry {
    builtin_catalog().into_iter().find(|e| e.name == name).unwrap_or_else(|| panic!("catalog entry {name}"))
}

fn entries_named(prefix: &str) -> Vec<CatalogEntry> {
    builtin_catalog().into_iter().filter(|e| e.name.starts_with(prefix)).collect()
}

fn exact(e: &CatalogEntry) -> StructureTensor<Rational> {
    parse_structure(&e.structure).unwrap()
}

fn einstein_exact() -> Outcome {
    let e = entry("einstein-8");
    let a = exact(&e);
    ensure(e.metrics.len() == 4, || format!("{} metrics", e.metrics.len()))?;
    let lambda = q("7/15");
    let s = q("56/15");
    for m in &e.metrics {
        let g: Metric<Rational> = parse_metric(&m.metric, 8)?;
        let r = ricci_general(&a, &g)?;
        ensure(r.ric_op == Matrix::identity(8).scale(&lambda), || format!("{}: ric = {:?}", m.metric, r.ric_op))?;
        ensure(r.scalar == s, || format!("{}: s = {}", m.metric, r.scalar))?;
    }
    Ok("ric = 7/15 Id, s = 56/15 on all four metrics".into())
}

fn signature_holonomy() -> Outcome {
    let e = entry("einstein-8");
    let a = exact(&e);
    let want = [[6, 2], [3, 5], [5, 3], [4, 4]];
    let mut seen = Vec::new();
    for m in &e.metrics {
        let g: Metric<Rational> = parse_metric(&m.metric, 8)?;
        let sig = signature(&g)?;
        seen.push([sig.p, sig.q]);
        ensure(m.claims.signature == Some([sig.p, sig.q]), || format!("{}: signature {sig}", m.metric))?;
        let h = holonomy_span(&a, &g, 1)?;
        ensure(h.dims_by_order[0] == 28 && h.full, || format!("{}: {:?}", m.metric, h.dims_by_order))?;
        ensure(!h.locally_symmetric, || format!("{}: nabla R = 0", m.metric))?;
    }
    ensure(seen == want, || format!("{seen:?}"))?;
    Ok("signatures (6,2) (3,5) (5,3) (4,4); span 28; nabla R != 0".into())
}

fn lorentzian_float() -> Outcome {
    let e = entry("lorentzian-8");
    ensure(e.backend == Backend::Float, || "catalog backend".into())?;
    let a: StructureTensor<Float> = parse_structure(&e.structure)?;
    let g: Metric<Float> = parse_metric("diag(1,1,1,1,1,-1,1,1)", 8)?;
    let r = ricci_general(&a, &g)?;
    let dev = r.ric_op.max_abs_diff(&Matrix::identity(8).scale(&Float(0.5)));
    let ds = (r.scalar.0 - 4.0).abs();
    ensure(dev <= 1e-9 && ds <= 1e-9, || format!("|ric - Id/2| = {dev:e}, |s - 4| = {ds:e}"))?;
    let sig = signature(&g)?;
    ensure([sig.p, sig.q] == [7, 1], || format!("signature {sig}"))?;
    Ok(format!("|ric - Id/2| = {dev:.1e}, |s - 4| = {ds:.1e}"))
}

fn ricci_flat_q() -> Outcome {
    let e = entry("ricci-flat-6");
    let a = exact(&e);
    let m = &e.metrics[0];
    let g: Metric<Rational> = parse_metric(&m.metric, 6)?;
    let r = ricci_general(&a, &g)?;
    ensure(r.ric_form.is_zero(), || format!("Ric = {:?}", r.ric_form))?;
    let b = q_map(&a, &g)?;
    let want = m.claims.q_components.as_ref().ok_or("no q claim")?;
    // the displayed tensor, expanded by antisymmetry in (k, j)
    let mut expected = vec![Matrix::<Rational>::zeros(6, 6); 6];
    for c in want {
        let v = q(&c.c);
        expected[c.k - 1][(c.j - 1, c.l - 1)] = v.clone();
        expected[c.j - 1][(c.k - 1, c.l - 1)] = -v;
    }
    for (k, exp) in expected.iter().enumerate() {
        ensure(b.matrix(k) == exp, || format!("q component {}: {:?}", k + 1, b.matrix(k)))?;
    }
    Ok(format!("Ric = 0, q has {} independent components as displayed", want.len()))
}

fn c1_c2() -> Outcome {
    let samples = entries_named("a-lambda");
    ensure(samples.len() == 3, || format!("{} samples", samples.len()))?;
    let mut lambdas = Vec::new();
    for e in &samples {
        let lambda = q(e.sample.as_deref().ok_or("no sample")?);
        let a = exact(e);
        let g: Metric<Rational> = parse_metric(&e.metrics[0].metric, 6)?;
        let (c1, c2) = contractions(&a, &q_map(&a, &g)?)?;
        let two_l = lambda.clone() * Rational::from_i64(2);
        let z = Rational::zero();
        let want1 = Matrix::diagonal(&[z.clone(), z.clone(), two_l.clone(), z.clone(), z.clone(), two_l]);
        let want2 = Matrix::diagonal(&[lambda.clone(), lambda.clone(), z.clone(), lambda.clone(), lambda.clone(), z]);
        ensure(c1 == want1, || format!("lambda = {lambda}: c1 = {c1:?}"))?;
        ensure(c2 == want2, || format!("lambda = {lambda}: c2 = {c2:?}"))?;
        lambdas.push(lambda.to_string());
    }
    Ok(format!("lambda in {{{}}}", lambdas.join(", ")))
}

fn obstruction_sweep() -> Outcome {
    let catalog = builtin_catalog();
    let mut low = 0;
    let mut table = 0;
    let mut families = 0;
    for e in catalog.iter().filter(|e| e.backend == Backend::Exact) {
        let a = exact(e);
        if !classify(&a).is_lie {
            continue;
        }
        if a.dim() <= 6 && !a.is_abelian() {
            let d = derivation_space(&a)?;
            ensure(d.has_nonzero_trace(), || format!("{}: Der in sl", e.name))?;
            low += 1;
        }
        if e.group.as_deref() == Some("einstein-candidates") {
            let d = derivation_space(&a)?;
            ensure(!d.has_nonzero_trace(), || format!("{}: trace witness", e.name))?;
            table += 1;
        }
        if let Some(text) = &e.claims.diagonal_relations {
            let sol = diagonal_derivation_solve(&a);
            let want = parse_relations::<Rational>(text, a.dim())?;
            ensure(sol.relations == want, || format!("{}: {} vs {text}", e.name, sol.to_relation_string()))?;
            families += 1;
        }
    }
    ensure(low >= 8 && table >= 10 && families >= 15, || format!("coverage {low}/{table}/{families}"))?;
    Ok(format!("{low} algebras of dim <= 6 excluded, {table} Einstein candidates with Der in sl, {families} relation lists"))
}

fn formula_equivalence() -> Outcome {
    let mut count = 0;
    for (name, a, g) in catalog_pairs(71, 2) {
        let c = classify(&a);
        if c.unimodular != Some(true) || c.killing_zero != Some(true) {
            continue;
        }
        let general = ricci_general(&a, &g)?;
        ensure(ricci_killing_zero(&a, &g)? == general, || format!("{name}: killing-zero route"))?;
        ensure(ricci_via_moment(&a, &g)? == general, || format!("{name}: moment route"))?;
        let oracle = ricci_index_oracle(&a, &g)?;
        let f = general.to_float();
        let scale = f.ric_op.max_abs().max(1.0);
        let dev = oracle.ric_op.max_abs_diff(&f.ric_op);
        ensure(dev <= 1e-8 * scale, || format!("{name}: oracle deviation {dev:e}"))?;
        // Tr ric = -1/2 <d,d>, with <d,d> from the pairing of 2-forms
        let ds: Vec<Matrix<Rational>> = (0..a.dim())
            .map(|m| Matrix::from_fn(a.dim(), a.dim(), |x, y| -(0..a.dim()).fold(Rational::zero(), |acc, t| acc + a.get(x, y, t) * g.gram()[(t, m)].clone())))
            .collect();
        let mut dd = Rational::zero();
        for (m, dm) in ds.iter().enumerate() {
            for (l, dl) in ds.iter().enumerate() {
                dd = dd + g.inverse_gram()[(m, l)].clone() * g.pair_two_forms(dm, dl);
            }
        }
        ensure(general.scalar == -(dd / Rational::from_i64(2)), || format!("{name}: trace identity"))?;
        count += 1;
    }
    Ok(format!("{count} pairs"))
}

fn moment_suite() -> Outcome {
    let mut r = rng(81);
    let cases = 500;
    for case in 0..cases {
        let n = 2 + case % 4;
        let a = random_tensor(&mut r, n, 0.3);
        let a2 = random_tensor(&mut r, n, 0.3);
        let b = random_dual(&mut r, n, 0.3);
        let x = random_matrix(&mut r, n, 0.4);
        let g = random_metric(&mut r, n);
        let h = random_invertible(&mut r, n);
        let xa = infinitesimal_structure(&x, &a)?;

        let mu = moment(&a, &b)?.mu;
        ensure(gl_pairing(&mu, &x) == pairing(&xa, &b)?, || format!("moment identity, case {case}"))?;

        let sym = pairing(&a, &q_map_raw(&a2, &g))? == pairing(&a2, &q_map_raw(&a, &g))?;
        ensure(sym, || format!("symmetry, case {case}"))?;

        let lhs = q_map_raw(&act_structure(&h, &a)?, &g.act(&h)?);
        ensure(lhs == act_dual(&h, &q_map_raw(&a, &g))?, || format!("equivariance, case {case}"))?;

        let d = dq(&a, &g, &a2, &infinitesimal_metric(&x, &g))?;
        let rhs = q_map_raw(&a2.sub(&xa), &g).add(&infinitesimal_dual(&x, &q_map_raw(&a, &g)));
        ensure(d == rhs, || format!("dq expansion, case {case}"))?;
    }
    Ok(format!("{cases} instances x 4 identities, 0 failures"))
}

fn einstein_search() -> Outcome {
    let a = exact(&entry("einstein-8"));
    let pattern: Vec<i8> = vec![1, 1, 1, 1, -1, -1, 1, 1];
    let found = diagonal_einstein_search(&a, Some(&[pattern]), &SearchOptions::default())?;
    let want: Vec<Rational> = ["1", "1", "1", "1", "-7/3", "-7/3", "98/15", "98/15"].iter().map(|s| q(s)).collect();
    let hit = found.iter().find(|s| s.diag == want).ok_or_else(|| Failure(format!("{} candidates, target missing", found.len())))?;
    ensure(hit.exact && hit.lambda == q("7/15") && hit.scalar == q("56/15"), || "exact verification".into())?;
    Ok(format!("{} exact solution(s), lambda = {}", found.len(), hit.lambda))
}

fn negative_controls() -> Outcome {
    let mut r = rng(91);
    let mut step_two = 0;
    for (name, a, metrics) in catalog_algebras() {
        let c = classify(&a);
        if c.nilpotent != Some(true) || c.step != Some(2) {
            continue;
        }
        let mut all = metrics;
        all.push(random_metric(&mut r, a.dim()));
        for g in &all {
            let m = mn_criterion(&a, g)?;
            ensure(m.excluded, || format!("{name}: mn not excluded"))?;
        }
        step_two += 1;
    }
    ensure(step_two >= 3, || format!("{step_two} step-two algebras"))?;

    let heis: StructureTensor<Rational> = parse_structure("(0,0,12)")?;
    let found = diagonal_einstein_search(&heis, None, &SearchOptions::default())?;
    ensure(found.is_empty(), || format!("(0,0,12): {} solutions", found.len()))?;

    let solv: StructureTensor<Rational> = parse_structure("(0,12,-13)")?;
    let g = Metric::euclidean(3);
    match ricci_killing_zero(&solv, &g) {
        Err(Error::KillingFormNonzero { .. }) => {}
        other => return Err(format!("(0,12,-13): {other:?}").into()),
    }
    Ok(format!("{step_two} step-two algebras excluded, (0,0,12) search empty, (0,12,-13) refused"))
}

fn main() {
    let criteria: Vec<(&str, Option<u64>, fn() -> Outcome)> = vec![
        ("einstein-exact", Some(1), einstein_exact),
        ("signature-holonomy", Some(10), signature_holonomy),
        ("lorentzian-float", Some(1), lorentzian_float),
        ("ricci-flat-q", Some(1), ricci_flat_q),
        ("c1-c2", Some(1), c1_c2),
        ("obstruction-sweep", Some(30), obstruction_sweep),
        ("formula-equivalence", None, formula_equivalence),
        ("moment-properties", None, moment_suite),
        ("einstein-search", Some(60), einstein_search),
        ("negative-controls", None, negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(Failure(format!("panicked: {}", msg.unwrap_or_default())))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(l) => Err(Failure(format!("over the {l} s limit"))),
            (o, _) => o,
        };
        let budget = limit.map_or(String::new(), |l| format!(" < {l} s"));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{:.2} s{budget}] {detail}", i + 1, elapsed.as_secs_f64()),
            Err(Failure(detail)) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{:.2} s{budget}] {detail}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
