//! Change a tuple on a light invariant set so that every small transitive
//! type occurs at least N times, moving each coordinate by less than epsilon.

use fullgroup::census::census;
use fullgroup::densify::{densify, psi_embed, psi_shifts};
use fullgroup::perm::Perm;
use fullgroup::rational::{format_rational, ratio, Lambda};
use fullgroup::table::LeafPerm;

fn main() -> fullgroup::error::Result<()> {
    let sigma = Perm::from_images(vec![2, 0, 3, 1])?;
    println!("psi shifts {:?} give {}", psi_shifts(&sigma), psi_embed(&sigma)?.to_table());

    let lam = Lambda::from_ratio(2, 3)?;
    let input = [LeafPerm::successor(2), LeafPerm::identity(2)];
    let r = densify(&input, &lam, &ratio(1, 16), 2, 2)?;
    println!(
        "level {}, changed on {} (mass {})",
        r.level,
        r.invariant_set,
        format_rational(&r.invariant_mass)
    );
    for (i, d) in r.du.iter().enumerate() {
        println!("du(out_{i}, in_{i}) = {}", format_rational(d));
    }
    println!("every type twice: {}", r.check.passes);
    for e in census(&r.tuple, &lam)?.entries {
        println!("  {:<12} x{}", e.ty.encoding(), e.count);
    }
    Ok(())
}
