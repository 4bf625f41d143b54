//! Scalar curvature as a function on Lie brackets: gauge derivatives and
//! critical points.

use ricci_moment::moment::{gauge_derivative, jacobi_tangent_critical, scalar_functional, GaugeDirection};
use ricci_moment::{parse_metric, parse_structure, Matrix, Metric, Rational, Scalar, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let g: Metric<Rational> = parse_metric("e1.e4+e2.e5+e3.e6", 6)?;
    for text in ["(24,0,0,0,0,35)", "(0,0,0,0,0,45)"] {
        let a: StructureTensor<Rational> = parse_structure(text)?;
        let c = jacobi_tangent_critical(&a, &g)?;
        println!("{text}: s = {}", scalar_functional(&a, &g)?);
        println!("  tangent dim {}, critical {}", c.tangent_dim, c.critical);
        println!("  with Killing condition: tangent dim {}, critical {}", c.tangent_dim_killing, c.critical_killing);
        let x = Matrix::from_fn(6, 6, |r, c| Rational::from_i64(if c == (r + 3) % 6 { 1 } else { 0 }));
        let d = gauge_derivative(&a, &g, &GaugeDirection::new(x))?;
        println!("  X+ s = {}, <ric,X> = {}, identities hold: {}", d.x_plus_s, d.ric_pairing, d.identities_hold);
    }
    Ok(())
}
