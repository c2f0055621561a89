//! Map one clopen set onto another, exactly when their Kraft sums agree and
//! up to a small uncovered remainder otherwise.

use fullgroup::cylinder::CylinderSet;
use fullgroup::equidecompose::{equidecompose_onto, leftover_profile, prec};
use fullgroup::rational::{format_rational, ratio, Lambda};

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;

    // Equal Kraft sums: an exact piecewise-translation bijection.
    let a = CylinderSet::parse(&["0"])?;
    let b = CylinderSet::parse(&["10", "11"])?;
    let r = equidecompose_onto(&a, &b, &lam, &ratio(1, 8))?;
    println!("{a} onto {b}: {}", r.map);

    // Unequal sums: the lightest leaves of the heavier side stay uncovered.
    let b = CylinderSet::parse(&["10"])?;
    println!("A ≺ B? {}", prec(&a, &b)?.holds);
    for eps in [ratio(1, 8), ratio(1, 32)] {
        let r = equidecompose_onto(&a, &b, &lam, &eps)?;
        println!(
            "eps {}: level {}, {} pairs, leftover {}",
            format_rational(&eps),
            r.level,
            r.map.len(),
            format_rational(&r.leftover(&lam))
        );
    }

    println!("level  leftover");
    for (level, mass) in leftover_profile(&a, &b, &lam, 2..=32)? {
        println!("{level:>5}  {:.6}", num_traits::ToPrimitive::to_f64(&mass).unwrap());
    }

    // At lambda = 1/2 the Kraft sum is invariant, so no map exists at all.
    let err = equidecompose_onto(&a, &b, &Lambda::half(), &ratio(1, 8)).unwrap_err();
    println!("lambda = 1/2: {err}");
    Ok(())
}
