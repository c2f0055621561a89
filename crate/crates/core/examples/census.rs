//! Orbit census of a tuple of leaf permutations: each orbit's isomorphism
//! type as a transitive permutation action, with counts and masses.

use fullgroup::census::{census, en_surrogate_check, enumerate_types};
use fullgroup::perm::Perm;
use fullgroup::rational::{format_rational, Lambda};
use fullgroup::table::LeafPerm;

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    let a = LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1, 2], &[4, 5]])?)?;
    let b = LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1], &[6, 7]])?)?;
    let tuple = [a, b];

    let c = census(&tuple, &lam)?;
    println!("{:<18} {:>5} {:>10}  blocks", "type", "count", "mass");
    for e in &c.entries {
        println!("{:<18} {:>5} {:>10}  {:?}", e.ty.encoding(), e.count, format_rational(&e.mass), e.blocks);
    }
    println!("{}", serde_json::to_string(&c).expect("census serializes"));

    println!("transitive pairs on at most 2 points:");
    for ty in enumerate_types(2, 2)? {
        println!("  {ty}");
    }
    let report = en_surrogate_check(&tuple, 2, 1)?;
    println!("every type present once: {}", report.passes);
    for m in &report.missing {
        println!("  missing {} ({} of {})", m.ty, m.have, m.need);
    }
    Ok(())
}
