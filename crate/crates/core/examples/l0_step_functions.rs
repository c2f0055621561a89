//! Measurable maps into finite sets, kept as step functions on cylinders:
//! pointwise products, contractions, orbit membership and pointwise
//! simultaneous conjugation.

use fullgroup::l0::{
    act_pointwise, contraction, cyclic_block_conjugate, l0_product, orbit_member, FiniteGroupSpec,
    OrbitMembership, StepFn,
};
use fullgroup::perm::Perm;
use fullgroup::rational::ratio;
use fullgroup::word::w;

fn main() -> fullgroup::error::Result<()> {
    let r = Perm::from_images(vec![1, 2, 0])?;
    let s = Perm::from_images(vec![1, 0, 2])?;
    let f = StepFn::from_pieces(vec![(w("0"), r.clone()), (w("1"), s.clone())])?;
    let g = StepFn::from_pieces(vec![(w("00"), s.clone()), (w("01"), r.clone()), (w("1"), r.clone())])?;
    println!("f·g pieces:");
    for (piece, p) in l0_product(&f, &g)?.pieces() {
        println!("  {piece:<3} {p}");
    }

    // f_t agrees with f left of t and is constant to the right.
    let points = StepFn::from_pieces(vec![(w("0"), 1usize), (w("1"), 2)])?;
    for t in [ratio(1, 1), ratio(3, 4), ratio(1, 4), ratio(0, 1)] {
        let ft = contraction(&points, &t, 0)?;
        println!("t = {t}: {:?}", ft.pieces());
    }

    let c3 = FiniteGroupSpec::generated(3, std::slice::from_ref(&r))?;
    if let OrbitMembership::Member { witness } = orbit_member(&points, &c3, 0) {
        println!("witness: {:?}", witness.pieces());
        println!("witness · 0 = {:?}", act_pointwise(&witness, &c3, &StepFn::constant(0)).pieces());
    }
    let trivial = FiniteGroupSpec::trivial(3);
    println!("trivial group: {:?}", orbit_member(&points, &trivial, 0));

    // Two piecewise 3-cycles are pointwise conjugate through the least conjugator.
    let tau = [r.clone()];
    let t = [StepFn::from_pieces(vec![(w("0"), r.clone()), (w("1"), r.inverse())])?];
    let u = [StepFn::constant(r.inverse())];
    let g = cyclic_block_conjugate(&u, &t, &tau)?;
    println!("conjugator: {:?}", g.pieces());
    Ok(())
}
