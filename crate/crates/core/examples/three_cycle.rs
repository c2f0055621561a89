//! From a pre-3-cycle (phi, psi) to the 3-cycle
//! `phi ∪ psi ∪ (psi ∘ phi)⁻¹`, identity elsewhere.

use fullgroup::equidecompose::{check_pre_three_cycle, pre_three_cycle, three_cycle};
use fullgroup::rational::Lambda;
use fullgroup::table::TableMap;

fn main() -> fullgroup::error::Result<()> {
    let lam = Lambda::from_ratio(2, 3)?;
    let (phi, psi) = pre_three_cycle(&lam);
    check_pre_three_cycle(&phi, &psi, &lam)?;
    let c = three_cycle(&phi, &psi)?;
    println!("C  = {}", c.table());
    println!("C³ = id: {}", c.compose(&c)?.compose(&c)?.is_identity());
    println!("supp C = {}", c.support());

    let phi = TableMap::parse(&[("000", "110"), ("001", "101")])?;
    let psi = TableMap::parse(&[("110", "011"), ("101", "010")])?;
    let c = three_cycle(&phi, &psi)?;
    println!("C  = {}", c.table());

    let bad = TableMap::parse(&[("01", "00")])?;
    println!("invalid pair refused: {}", three_cycle(&phi, &bad).unwrap_err());
    Ok(())
}
