//! Parse structure equations in several notations and classify them.

use ricci_moment::{classify, parse_structure, Rational, StructureTensor};

fn main() -> ricci_moment::Result<()> {
    let inputs = [
        "(0,0,12)",
        "(0,0,12,13,23)",
        "(0,12,-13)",
        "(23,-13,12)",
        "(0,0,0,12,14,15+23+24)",
    ];
    for text in inputs {
        let a: StructureTensor<Rational> = parse_structure(text)?;
        let c = classify(&a);
        println!("{text}");
        println!("  lie: {}, unimodular: {:?}, nilpotent: {:?}", c.is_lie, c.unimodular, c.nilpotent);
        println!("  step: {:?}, killing form zero: {:?}", c.step, c.killing_zero);
        println!("  lower central series: {:?}", c.lcs_dims());
    }

    // JSON round trip
    let a: StructureTensor<Rational> = parse_structure("(0,0,1/2*12,13)")?;
    let back = StructureTensor::<Rational>::from_json(&a.to_json())?;
    assert_eq!(a, back);
    println!("{} survives JSON as {}", a.to_salamon(), back.to_salamon());
    Ok(())
}
