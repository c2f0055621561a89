//! The nine property suites at their stated sizes and time limits.
//!
//! Each test prints one PASS/FAIL line for its suite. Checks flagged as
//! unattainable are reported as failures and must stay failing for the
//! documented reason; everything else must pass.

use std::io::Write;

use fullgroup::selftest::{run_suite, SuiteReport, DEFAULT_SEED};

fn run(id: u8) -> SuiteReport {
    let report = run_suite(id, DEFAULT_SEED).unwrap();
    let mut text = format!("{report}\n");
    for c in &report.checks {
        text += &format!(
            "    {} {:<36} {}{}\n",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail,
            if c.unattainable { " [unattainable]" } else { "" }
        );
    }
    // Written past the test harness's capture so the matrix always shows.
    std::io::stdout().lock().write_all(text.as_bytes()).unwrap();
    report
}

fn assert_attainable(report: &SuiteReport) {
    for c in &report.checks {
        assert!(c.passed || c.unattainable, "{}: {}", c.name, c.detail);
    }
    assert!(report.within_time(), "{} ms over {} ms", report.elapsed_ms, report.limit_ms);
}

#[test]
fn criterion_1_group_algebra() {
    let r = run(1);
    assert!(r.passed());
}

#[test]
fn criterion_2_cocycle() {
    let r = run(2);
    assert!(r.passed());
}

#[test]
fn criterion_3_phi_embedding() {
    let r = run(3);
    assert!(r.passed());
}

#[test]
fn criterion_4_tuple_conjugation() {
    let r = run(4);
    assert!(r.passed());
}

/// The 1/128 target and the ratio-2/3 envelope fail; see the notes in
/// `README.md`. Both are asserted to fail for exactly that reason.
#[test]
fn criterion_5_equidecomposition() {
    let r = run(5);
    assert_attainable(&r);
    let unattainable: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.unattainable)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(unattainable, ["leftover within 1/128", "geometric envelope 2/3"]);
    let eps = r.checks.iter().find(|c| c.name == "leftover within 1/128").unwrap();
    assert!(eps.detail.starts_with("depth exhausted"), "{}", eps.detail);
}

#[test]
fn criterion_6_densification() {
    let r = run(6);
    assert!(r.passed());
}

#[test]
fn criterion_7_three_cycles() {
    let r = run(7);
    assert!(r.passed());
}

#[test]
fn criterion_8_step_functions() {
    let r = run(8);
    assert!(r.passed());
}

#[test]
fn criterion_9_census_invariance() {
    let r = run(9);
    assert!(r.passed());
}
