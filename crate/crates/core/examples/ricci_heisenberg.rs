//! Ricci curvature of the Heisenberg algebra by every available route.

use ricci_moment::curvature::{b_forms, ricci_general, ricci_index_oracle, ricci_killing_zero};
use ricci_moment::moment::ricci_via_moment;
use ricci_moment::{parse_metric, parse_structure, Metric, Rational, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let a: StructureTensor<Rational> = parse_structure("(0,0,12)")?;
    for text in ["diag(1,1,1)", "diag(1,-1,1)", "e1.e3 + e2.e2"] {
        let g: Metric<Rational> = parse_metric(text, 3)?;
        let r = ricci_general(&a, &g)?;
        println!("{text}: ric = {}, s = {}", r.ric_op, r.scalar);
        assert_eq!(ricci_killing_zero(&a, &g)?, r);
        assert_eq!(ricci_via_moment(&a, &g)?, r);
        let oracle = ricci_index_oracle(&a, &g)?;
        println!("  oracle deviation {:.1e}", oracle.ric_op.max_abs_diff(&r.to_float().ric_op));
        println!("  B-form decomposition agrees: {}", b_forms(&a, &g)?.ricci() == r.ric_form);
    }
    Ok(())
}
