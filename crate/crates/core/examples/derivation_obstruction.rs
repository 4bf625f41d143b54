//! Nonzero-trace derivations rule out Einstein metrics with nonzero scalar
//! curvature.

use ricci_moment::derivations::{derivation_space, diagonal_derivation_solve, trace_obstruction};
use ricci_moment::{parse_structure, Rational, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let cases = [
        ("(0,0,12,13,23)", "dimension five"),
        ("(0,0,0,12,23,-13,2*26-15-34)", "147E at 2"),
        ("(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)", "Einstein example"),
    ];
    for (text, label) in cases {
        let a: StructureTensor<Rational> = parse_structure(text)?;
        let der = derivation_space(&a)?;
        let t = trace_obstruction(&a)?;
        println!("{label}: {text}");
        println!("  dim Der = {}", der.dim());
        match &t.witness {
            Some(w) => println!("  witness with trace {}: {w}", w.trace()),
            None => println!("  Der is contained in sl"),
        }
        println!("  excluded: {}", t.einstein_nonzero_s_excluded);
        println!("  diagonal derivations: {}", diagonal_derivation_solve(&a).to_relation_string());
    }
    Ok(())
}
