//! The eleven acceptance checks, one test per criterion so the harness
//! prints one pass/fail line each. The wide-family sweep behind checks 3, 4,
//! 8 and 9 runs once and is shared; expect several minutes on one core.

use resonant_blocks::verify::run_criterion;

fn check(index: usize) {
    let outcome = run_criterion(index);
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn acceptance_01_printed_pair_polynomials() {
    check(1);
}

#[test]
fn acceptance_02_printed_three_vertex_block_and_translation() {
    check(2);
}

#[test]
fn acceptance_03_root_elimination_across_the_wide_family() {
    check(3);
}

#[test]
fn acceptance_04_specialization_factorization_across_the_wide_family() {
    check(4);
}

#[test]
fn acceptance_05_characteristic_polynomial_separation() {
    check(5);
}

#[test]
fn acceptance_06_certificate_base_cases() {
    check(6);
}

#[test]
fn acceptance_07_irreducibility_sweep() {
    check(7);
}

#[test]
fn acceptance_08_degenerate_resonant_realization_classes() {
    check(8);
}

#[test]
fn acceptance_09_color_rank_bound() {
    check(9);
}

#[test]
fn acceptance_10_common_elliptic_frequency_point() {
    check(10);
}

#[test]
fn acceptance_11_homogeneity_and_translation_covariance() {
    check(11);
}
