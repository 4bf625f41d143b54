//! The map q, the contractions c1, c2 and the moment map on a family of
//! two-step algebras.

use ricci_moment::moment::{gl_pairing, infinitesimal_structure, moment, pairing, q_map};
use ricci_moment::{parse_metric, parse_structure, Matrix, Metric, Rational, Scalar, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let g: Metric<Rational> = parse_metric("e1.e4+e2.e5+e3.e6", 6)?;
    for lambda in ["1", "2", "-3"] {
        let a: StructureTensor<Rational> = parse_structure(&format!("(0,0,{lambda}*12,0,0,45)"))?;
        let b = q_map(&a, &g)?;
        let m = moment(&a, &b)?;
        println!("λ = {lambda}");
        println!("  q(a,S) = {}", b.to_tensor_string());
        println!("  c1 = {}", m.c1);
        println!("  c2 = {}", m.c2);
        println!("  μ = {}, <a,q> = {}", m.mu, m.pairing);

        let x = Matrix::from_fn(6, 6, |r, c| Rational::from_i64(if r == c { r as i64 + 1 } else { (r + 2 * c) as i64 % 3 }));
        let lhs = gl_pairing(&m.mu, &x);
        let rhs = pairing(&infinitesimal_structure(&x, &a)?, &b)?;
        println!("  <μ,X> = {lhs} = <Xa,q> = {rhs}");
    }
    Ok(())
}
