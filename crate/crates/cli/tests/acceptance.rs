//! Acceptance gate: each test replays one acceptance criterion at its stated
//! tolerance (all exact) over the small corpus and prints a PASS/FAIL line.
//! The expensive suite runs once and is shared across criteria.

use std::sync::OnceLock;

use centrex_cli::report::Report;
use centrex_cli::suite::{run_property_suite, SuiteOptions};
use centrex_core::galois::EngineFault;

fn suite() -> &'static Report {
    static REPORT: OnceLock<Report> = OnceLock::new();
    REPORT.get_or_init(|| run_property_suite(&SuiteOptions::default()))
}

fn check_criterion(label: &str, claim_ids: &[&str]) {
    let report = suite();
    let mut failures = Vec::new();
    for id in claim_ids {
        let claim = report
            .claims
            .iter()
            .find(|c| c.id == *id)
            .unwrap_or_else(|| panic!("claim `{}` is not registered", id));
        assert!(claim.instances > 0, "claim `{}` ran zero instances", id);
        if !claim.passed {
            failures.push(format!(
                "{}: {} failures, first: {:?}",
                claim.id,
                claim.failures.len(),
                claim.failures.first()
            ));
        }
    }
    if failures.is_empty() {
        println!("[PASS] {}", label);
    } else {
        println!("[FAIL] {}", label);
    }
    assert!(failures.is_empty(), "{} failed: {}", label, failures.join("; "));
}

#[test]
fn criterion_01_group_formula_oracle() {
    check_criterion(
        "criterion-01 centralization matches the relative-commutator quotient, exactly",
        &["centralize-group-formula"],
    );
}

#[test]
fn criterion_02_central_extension_oracle() {
    check_criterion(
        "criterion-02 covering verdicts match the kernel-in-center oracle, exactly",
        &["covering-central-oracle"],
    );
}

#[test]
fn criterion_03_trivial_covering_oracle() {
    check_criterion(
        "criterion-03 trivial-covering verdicts match the derived-subgroup oracle, exactly",
        &["trivial-covering-oracle"],
    );
}

#[test]
fn criterion_04_universal_property() {
    check_criterion(
        "criterion-04 slice morphisms into coverings factor uniquely through the unit, exactly",
        &["universal-property"],
    );
}

#[test]
fn criterion_05_lemma_replays() {
    check_criterion(
        "criterion-05 lemma replays: stability, split-epi triviality, units, class closure, strong Birkhoff",
        &[
            "trivial-pullback-stability",
            "covering-pullback-stability",
            "split-epi-coverings-trivial",
            "unit-in-e1",
            "e1-closure",
            "strong-birkhoff-level0",
            "strong-birkhoff-level1",
        ],
    );
}

#[test]
fn criterion_06_commutator_cross_check() {
    check_criterion(
        "criterion-06 kernel-bracket identity blocks and both centralization routes agree, exactly",
        &["commutator-kernel-oracle", "centralize-commutator-agreement"],
    );
}

#[test]
fn criterion_07_depth_two_witnesses() {
    check_criterion(
        "criterion-07 the Klein square is accepted and the dihedral square rejected at depth two, twice over",
        &["double-witnesses"],
    );
}

#[test]
fn criterion_08_degenerate_structure() {
    check_criterion(
        "criterion-08 under the identity reflector every surjection is a trivial covering and centralization is the identity",
        &["identity-degenerate"],
    );
}

#[test]
fn criterion_09_boolean_instance() {
    check_criterion(
        "criterion-09 Boolean reflection is idempotent, lands in Boolean rings and is strongly Birkhoff",
        &["boolean-instance"],
    );
}

#[test]
fn criterion_10_mutation_sensitivity() {
    let mut all_ok = true;
    for fault in EngineFault::all() {
        let opts = SuiteOptions { mutation: Some(fault), ..Default::default() };
        let report = run_property_suite(&opts);
        let failed: Vec<_> = report.claims.iter().filter(|c| !c.passed).collect();
        if failed.is_empty() {
            println!("[FAIL] criterion-10 fault `{}` went undetected", fault.name());
            all_ok = false;
            continue;
        }
        for claim in &failed {
            for failure in &claim.failures {
                assert!(
                    !failure.witness.is_empty(),
                    "failure under `{}` lacks a witness",
                    fault.name()
                );
            }
        }
    }
    if all_ok {
        println!("[PASS] criterion-10 every injected engine fault is caught with concrete witnesses");
    }
    assert!(all_ok, "some injected fault went undetected");
}
