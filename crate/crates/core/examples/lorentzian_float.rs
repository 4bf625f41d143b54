//! A Lorentzian Einstein nilmanifold whose structure constants are
//! irrational, handled by the float backend.

use ricci_moment::curvature::ricci_general;
use ricci_moment::scalar::set_float_tolerance;
use ricci_moment::{parse_metric, parse_structure, signature, Float, Matrix, Metric, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    set_float_tolerance(1e-9);
    let (s3, s5, s21) = (3f64.sqrt(), 2.5f64.sqrt(), 21f64.sqrt());
    let text = format!(
        "(0,0,{}*12,{}*13,{}*23,{}*24-{}*15,{}*34+{}*25+{}*16,{}*26+{}*35+{}*14)",
        4.0 * s3,
        -s5,
        s5,
        31.5f64.sqrt(),
        31.5f64.sqrt(),
        s21,
        2.0 * s3,
        32f64.sqrt(),
        32f64.sqrt(),
        s21,
        2.0 * s3,
    );
    let a: StructureTensor<Float> = parse_structure(&text)?;
    let g: Metric<Float> = parse_metric("diag(1,1,1,1,1,-1,1,1)", 8)?;
    let r = ricci_general(&a, &g)?;
    let dev = r.ric_op.max_abs_diff(&Matrix::identity(8).scale(&Float(0.5)));
    println!("signature {}", signature(&g)?);
    println!("|ric - Id/2| = {dev:.2e}, s = {}", r.scalar);
    Ok(())
}
