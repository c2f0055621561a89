//! Run the property suites from code and print the pass/fail matrix.
//!
//! `cargo run --release --example selftest -- 4` runs one suite.

use fullgroup::selftest::{run_all, run_suite, DEFAULT_SEED};

fn main() {
    let reports = match std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        Some(id) => vec![run_suite(id, DEFAULT_SEED).expect("suite number 1-9")],
        None => run_all(DEFAULT_SEED),
    };
    for r in &reports {
        println!("{r}");
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("    {}: {}", c.name, c.detail);
        }
    }
}
