//! An 8-dimensional nilpotent Lie algebra with four Einstein metrics of
//! nonzero scalar curvature, their signatures and holonomy.

use ricci_moment::catalog::builtin_catalog;
use ricci_moment::curvature::{holonomy_span, ricci_general};
use ricci_moment::{parse_metric, parse_structure, signature, Metric, Rational, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let entry = builtin_catalog().into_iter().find(|e| e.name == "einstein-8").expect("catalog entry");
    let a: StructureTensor<Rational> = parse_structure(&entry.structure)?;
    println!("{}", entry.structure);
    for m in &entry.metrics {
        let text = &m.metric;
        let g: Metric<Rational> = parse_metric(text, 8)?;
        let r = ricci_general(&a, &g)?;
        let h = holonomy_span(&a, &g, 1)?;
        match &r.einstein {
            Some(l) => println!("{text}\n  Einstein, λ = {l}, s = {}", r.scalar),
            None => println!("{text}\n  not Einstein"),
        }
        println!("  signature {}, holonomy span {}, locally symmetric {}", signature(&g)?, h.span_dim, h.locally_symmetric);
    }
    Ok(())
}
