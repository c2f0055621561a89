//! A leaf permutation T at level L becomes a step function with values in
//! the symmetric group on 2^L points. The map is a homomorphism, and the
//! measure of the set where point 0 moves equals the measure of supp T.

use fullgroup::l0::{gauge_on_points, l0_product, phi_embed, StepFn};
use fullgroup::perm::Perm;
use fullgroup::rational::{format_rational, Lambda};
use fullgroup::table::LeafPerm;

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    let t = LeafPerm::new(2, Perm::from_cycles(4, &[&[0, 1]])?)?;
    let u = LeafPerm::successor(2);

    let phi = phi_embed(&t)?;
    for (piece, p) in phi.pieces() {
        println!("{piece:<3} {p}");
    }

    let lhs = phi_embed(&t.compose(&u)?)?;
    let rhs = l0_product(&phi, &phi_embed(&u)?)?;
    println!("homomorphism holds: {}", lhs == rhs);

    let id = StepFn::constant(Perm::identity(4));
    for x in [&t, &u] {
        let supp = x.to_full_map().support().mu(&lam);
        let gauge = gauge_on_points(&phi_embed(x)?, &id, &[0], &lam);
        println!(
            "mu(supp) = {}, gauge at point 0 = {}",
            format_rational(&supp),
            format_rational(&gauge)
        );
    }
    Ok(())
}
