//! The acceptance suite: runs each verification criterion at its stated
//! budget and prints one pass/fail line per criterion. Criteria carry both a
//! correctness verdict and a wall-clock budget; both must hold.

use hypermoduli::verify::{run_criterion, VerifyConfig};

fn run(id: u32) {
    let cfg = VerifyConfig::default();
    let outcome = run_criterion(id, &cfg);
    println!("{}", outcome.summary_line());
    assert!(
        outcome.passed,
        "criterion {} failed: {}",
        outcome.id, outcome.details
    );
    assert!(
        outcome.within_budget(),
        "criterion {} exceeded budget: {:?} > {:?}",
        outcome.id,
        outcome.elapsed,
        outcome.budget
    );
}

#[test]
fn criterion_01_discriminant_homogeneity() {
    run(1);
}

#[test]
fn criterion_02_discriminant_invariance() {
    run(2);
}

#[test]
fn criterion_03_stabilizer_orders() {
    run(3);
}

#[test]
fn criterion_04_fiber_characters_descent() {
    run(4);
}

#[test]
fn criterion_05_group_order_table() {
    run(5);
}

#[test]
fn criterion_06_hodge_class() {
    run(6);
}

#[test]
fn criterion_07_four_subset_lemma() {
    run(7);
}

#[test]
fn criterion_08_stratum_dimensions() {
    run(8);
}

#[test]
fn criterion_09_involution_solver() {
    run(9);
}

#[test]
fn criterion_10_twist_dichotomy() {
    run(10);
}

#[test]
fn criterion_11_singular_point() {
    run(11);
}

#[test]
fn criterion_12_elliptic_family() {
    run(12);
}
