//! End-to-end acceptance run: one test per suite criterion, each printing a
//! single PASS/FAIL line (run with --nocapture to see them) and asserting
//! the criterion holds. All randomized criteria use the default seed so the
//! run is reproducible.

use daha_core::serial::{fixtures_from_json, Fixture};
use daha_core::suite::{
    criterion_bernstein, criterion_generator_relations, criterion_intertwiners,
    criterion_lattice, criterion_membership, criterion_mellin, criterion_rank1,
    criterion_rho_bridge, criterion_roots_weyl, CriterionResult, DEFAULT_SEED,
};

fn fixtures() -> Vec<Fixture> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/membership.json");
    let data = std::fs::read_to_string(path).expect("fixture file is present");
    fixtures_from_json(&data).expect("fixture file parses")
}

fn assert_criterion(result: CriterionResult) {
    let status = if result.passed { "PASS" } else { "FAIL" };
    println!("{status} {}", result.name);
    for line in &result.details {
        println!("    {line}");
    }
    assert!(result.passed, "criterion '{}' failed", result.name);
}

#[test]
fn criterion_1_roots_and_weyl_layer() {
    assert_criterion(criterion_roots_weyl());
}

#[test]
fn criterion_2_generator_relations() {
    assert_criterion(criterion_generator_relations());
}

#[test]
fn criterion_3_bernstein_relations() {
    assert_criterion(criterion_bernstein());
}

#[test]
fn criterion_4_membership_soundness() {
    assert_criterion(criterion_membership(DEFAULT_SEED, &fixtures()));
}

#[test]
fn criterion_5_intertwiner_algebra() {
    assert_criterion(criterion_intertwiners(DEFAULT_SEED));
}

#[test]
fn criterion_6_lattice_preservation() {
    assert_criterion(criterion_lattice(DEFAULT_SEED));
}

#[test]
fn criterion_7_mellin_cone_layer() {
    assert_criterion(criterion_mellin(DEFAULT_SEED));
}

#[test]
fn criterion_8_rank1_oracle() {
    assert_criterion(criterion_rank1());
}

#[test]
fn criterion_9_straight_star_bridge() {
    assert_criterion(criterion_rho_bridge(DEFAULT_SEED));
}
