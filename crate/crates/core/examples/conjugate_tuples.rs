//! Conjugating one tuple of leaf permutations onto another. Equal censuses
//! give an exact conjugator; unequal counts at lambda != 1/2 give one with
//! a small, exactly reported defect.

use fullgroup::conjugate::conjugate_tuples;
use fullgroup::perm::Perm;
use fullgroup::rational::{format_rational, ratio, Lambda};
use fullgroup::table::LeafPerm;

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    let lp = |cycles: &[&[usize]]| LeafPerm::new(2, Perm::from_cycles(4, cycles).unwrap()).unwrap();

    let s = [lp(&[&[0, 1]])];
    let t = [lp(&[&[2, 3]])];
    let r = conjugate_tuples(&s, &t, &lam, &ratio(1, 16))?;
    println!("exact: {}, C = {}", r.exact, r.map);

    // One transposition against two: the counts differ.
    let s = [LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1]])?)?];
    let t = [LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1], &[2, 3]])?)?];
    for eps in [ratio(1, 4), ratio(1, 16)] {
        let r = conjugate_tuples(&s, &t, &lam, &eps)?;
        println!(
            "eps {}: {} pairs, defect {}",
            format_rational(&eps),
            r.map.len(),
            format_rational(&r.defects[0])
        );
    }
    match conjugate_tuples(&s, &t, &Lambda::half(), &ratio(1, 16)) {
        Ok(_) => unreachable!("counts are invariant at 1/2"),
        Err(e) => println!("lambda = 1/2: {e}"),
    }
    Ok(())
}
