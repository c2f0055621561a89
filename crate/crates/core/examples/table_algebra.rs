//! Full-group elements as finite tables `u·w ↦ v·w`: composition, inverses,
//! supports and the uniform distance.

use fullgroup::rational::{format_rational, Lambda};
use fullgroup::table::{glue, FullMap, TableMap};

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    let swap = FullMap::new(TableMap::parse(&[("0", "1"), ("1", "0")])?)?;
    let inner = FullMap::new(TableMap::parse(&[("00", "01"), ("01", "00"), ("1", "1")])?)?;

    let h = swap.compose(&inner)?;
    println!("swap ∘ inner = {}", h.table());
    println!("inverse      = {}", h.inverse().table());
    println!("h ∘ h⁻¹ is identity: {}", h.compose(&h.inverse())?.is_identity());

    println!("support(inner) = {}", inner.support());
    println!("du(swap, id)   = {}", format_rational(&swap.du(&FullMap::identity(), &lam)));
    println!("du(inner, id)  = {}", format_rational(&inner.du(&FullMap::identity(), &lam)));

    // du is invariant on the left but not on the right.
    let left = swap.compose(&inner)?.du(&swap, &lam);
    let right = inner.compose(&swap)?.du(&swap, &lam);
    println!("du(s∘i, s∘id) = {}, du(i∘s, id∘s) = {}", format_rational(&left), format_rational(&right));

    // Partial maps with disjoint sources and targets glue into one.
    let g = glue(&[TableMap::parse(&[("00", "11")])?, TableMap::parse(&[("11", "00")])?])?;
    println!("glued: {g}, total: {}", g.is_total());
    Ok(())
}
