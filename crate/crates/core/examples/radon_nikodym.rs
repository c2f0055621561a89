//! The Radon-Nikodym cocycle of a table map: on a pair `u ↦ v` it is the
//! ratio of cylinder masses. At lambda = 1/2 every value is 1; at 2/3 the
//! values are powers of two.

use fullgroup::rational::{format_rational, Lambda};
use fullgroup::table::{cocycle_product, FullMap, TableMap};
use fullgroup::word::w;

fn main() -> fullgroup::error::Result<()> {
    let f = FullMap::new(TableMap::parse(&[("00", "11"), ("01", "01"), ("10", "00"), ("11", "10")])?)?;
    let g = FullMap::new(TableMap::parse(&[("0", "1"), ("1", "0")])?)?;

    for lam in [Lambda::half(), Lambda::from_ratio(2, 3)?] {
        println!("lambda = {lam}");
        for (piece, value) in f.rn_cocycle(&lam) {
            println!("  {piece:<4} {}", format_rational(&value));
        }
    }

    // Chain rule at one point.
    let lam = Lambda::from_ratio(2, 3)?;
    let x = w("001");
    let fg = f.compose(&g)?;
    let gx = g.apply_prefix(&x)?;
    let product = cocycle_product(&[f.rn_at(&gx, &lam)?, g.rn_at(&x, &lam)?]);
    println!(
        "rn(f∘g)({x}) = {} = rn(f)({gx}) · rn(g)({x}) = {}",
        format_rational(&fg.rn_at(&x, &lam)?),
        format_rational(&product)
    );
    Ok(())
}
