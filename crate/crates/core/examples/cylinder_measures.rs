//! Clopen subsets of Cantor space as canonical sets of cylinders, measured
//! exactly under Bernoulli product measures.

use fullgroup::cylinder::CylinderSet;
use fullgroup::rational::{format_rational, Lambda};

fn main() -> fullgroup::error::Result<()> {
    let a = CylinderSet::parse(&["0", "10"])?;
    let b = CylinderSet::parse(&["01", "11"])?;

    // Siblings merge, prefixes absorb their extensions.
    println!("{}", CylinderSet::parse(&["00", "01", "0110"])?);

    for lam in [Lambda::half(), Lambda::from_ratio(2, 3)?] {
        println!("lambda = {lam}");
        for (name, s) in [
            ("A", a.clone()),
            ("B", b.clone()),
            ("A ∪ B", a.union(&b)),
            ("A ∩ B", a.intersect(&b)),
            ("X \\ A", a.complement()),
        ] {
            println!("  {name:<6} {s:<24} mu = {}", format_rational(&s.mu(&lam)));
        }
    }

    // The Kraft sum is the measure at lambda = 1/2 and does not depend on lambda.
    println!("kraft(A) = {}", format_rational(&a.kraft()));
    Ok(())
}
