//! One test per acceptance criterion. Each prints a PASS/FAIL line with its margins.

use index_defect_cli::suite::{run_criterion, CriterionResult};

fn check(id: u8) {
    let r: CriterionResult = run_criterion(id);
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_eta_closed_form() {
    check(1);
}

#[test]
fn criterion_02_hurwitz_continuation() {
    check(2);
}

#[test]
fn criterion_03_spectral_symmetry() {
    check(3);
}

#[test]
fn criterion_04_flow_engine_vs_oracle() {
    check(4);
}

#[test]
fn criterion_05_flow_theorem() {
    check(5);
}

#[test]
fn criterion_06_zeta_vanishing() {
    check(6);
}

#[test]
fn criterion_07_parity_vanishing() {
    check(7);
}

#[test]
fn criterion_08_relative_eta_on_covers() {
    check(8);
}

#[test]
fn criterion_09_index_defect_invariance() {
    check(9);
}

#[test]
fn criterion_10_dimension_functional() {
    check(10);
}

#[test]
fn criterion_11_eta_decomposition() {
    check(11);
}
