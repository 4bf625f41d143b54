//! Nice bases, diagonal Ricci tensors and the diagonal Einstein search.

use ricci_moment::nice::{diagonal_einstein_search, diagonal_ricci, nice_basis_check, SearchOptions};
use ricci_moment::{parse_structure, Rational, Scalar, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let non_nice: StructureTensor<Rational> = parse_structure("(0,0,0,12,14,15+23+24)")?;
    println!("(0,0,0,12,14,15+23+24) nice: {}", nice_basis_check(&non_nice).is_nice);

    let a: StructureTensor<Rational> = parse_structure("(0,0,0,0,12+34,14-23,-24+35+16,-13+26+45)")?;
    println!("8-dim example nice: {}", nice_basis_check(&a).is_nice);
    let d: Vec<Rational> = (1..=8).map(Rational::from_i64).collect();
    println!("ric for diag(1..8) = {:?}", diagonal_ricci(&a, &d)?.entries.iter().map(ToString::to_string).collect::<Vec<_>>());

    let opts = SearchOptions { restarts: 50, ..SearchOptions::default() };
    let pattern = vec![1, 1, 1, 1, -1, -1, 1, 1];
    for sol in diagonal_einstein_search(&a, Some(&[pattern]), &opts)? {
        let diag: Vec<String> = sol.diag.iter().map(ToString::to_string).collect();
        println!("Einstein: diag({}), λ = {}, s = {}, exact = {}", diag.join(", "), sol.lambda, sol.scalar, sol.exact);
    }
    Ok(())
}
