//! The binary adding machine cut at a finite depth. It adds one with carry,
//! least significant digit first; the cut leaves `1^d` unmapped.

use fullgroup::rational::{format_rational, Lambda};
use fullgroup::table::odometer;
use fullgroup::word::w;

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    for d in 1..=5 {
        let o = odometer(d)?;
        println!(
            "depth {d}: {} pairs, defect {} with mass {}",
            o.table.len(),
            o.defect_dom,
            format_rational(&o.defect_mass(&lam))
        );
    }
    let o = odometer(3)?;
    println!("{}", o.table);
    for x in ["000", "100", "010", "110", "001", "101", "011"] {
        println!("  {x} -> {}", o.table.apply_prefix(&w(x))?);
    }
    println!("  111 -> {}", o.table.apply_prefix(&w("111")).unwrap_err());
    Ok(())
}
