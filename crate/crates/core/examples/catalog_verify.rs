//! Verify the built-in catalog, or a JSON-lines file given as argument.

use ricci_moment::catalog::{builtin_catalog, load_catalog, verify_catalog};

fn main() -> ricci_moment::Result<()> {
    let entries = match std::env::args().nth(1) {
        Some(path) => load_catalog(path)?,
        None => builtin_catalog(),
    };
    let reports = verify_catalog(&entries, None);
    let mut failed = 0;
    for r in &reports {
        if r.passed() {
            println!("PASS {} ({} claims)", r.name, r.results.len());
        } else {
            failed += 1;
            println!("FAIL {}", r.name);
            for f in r.failures() {
                println!("  {}: expected {}, computed {}", f.claim, f.expected, f.computed);
            }
        }
    }
    println!("{} entries, {failed} failed", reports.len());
    Ok(())
}
