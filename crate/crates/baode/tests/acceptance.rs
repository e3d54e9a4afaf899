//! The acceptance gate: one test per criterion, each printing a single
//! pass/fail line with its pinned instance counts and time bound.

use baode::campaign::{
    dilation_campaign, distributivity_campaign, duality_campaign, morphism_campaign,
    positivity_campaign, supap_campaign, surjection_campaign, witness_campaign,
    CampaignOutcome,
};
use std::time::{Duration, Instant};

fn gate(name: &str, outcome: &CampaignOutcome, min_cases: usize, started: Instant, bound: Duration) {
    let elapsed = started.elapsed();
    let pass = outcome.report.passed() && outcome.cases >= min_cases && elapsed <= bound;
    println!(
        "{} {name}: {} cases in {:.2?} (bound {:.0?})",
        if pass { "pass" } else { "FAIL" },
        outcome.cases,
        elapsed,
        bound
    );
    if !outcome.report.passed() {
        println!("{}", outcome.report);
    }
    assert!(
        outcome.report.passed(),
        "{name}: report failed\n{}",
        outcome.report
    );
    assert!(
        outcome.cases >= min_cases,
        "{name}: only {} cases, pinned minimum {min_cases}",
        outcome.cases
    );
    assert!(
        elapsed <= bound,
        "{name}: took {elapsed:.2?}, pinned bound {bound:.0?}"
    );
}

#[test]
fn criterion_1_duality_round_trip() {
    let t = Instant::now();
    let outcome = duality_campaign(20260825, 500, 4).unwrap();
    gate("duality-round-trip", &outcome, 500, t, Duration::from_secs(60));
}

#[test]
fn criterion_2_hom_iff_bounded() {
    let t = Instant::now();
    let outcome = morphism_campaign(20260825, 200, 3).unwrap();
    gate("hom-iff-bounded", &outcome, 200, t, Duration::from_secs(30));
}

#[test]
fn criterion_3_insep_zigzag() {
    let t = Instant::now();
    let outcome = surjection_campaign(20260825, 200).unwrap();
    gate("insep-zigzag", &outcome, 200, t, Duration::from_secs(30));
}

#[test]
fn criterion_4_superamalgamation() {
    let t = Instant::now();
    let outcome = supap_campaign(20260825, 100, 3).unwrap();
    gate("superamalgamation", &outcome, 100, t, Duration::from_secs(300));
}

#[test]
fn criterion_5_dilated_cylindrifier() {
    let t = Instant::now();
    let outcome = dilation_campaign(20260825, 100, true).unwrap();
    gate(
        "dilated-cylindrifier",
        &outcome,
        100,
        t,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_distributivity_toolkit() {
    let t = Instant::now();
    let outcome = distributivity_campaign(4).unwrap();
    gate("distributivity", &outcome, 4, t, Duration::from_secs(30));
}

#[test]
fn criterion_7_witness_systems() {
    let t = Instant::now();
    let outcome = witness_campaign().unwrap();
    gate("witness-systems", &outcome, 20, t, Duration::from_secs(60));
}

#[test]
fn criterion_8_positivity_classifier() {
    let t = Instant::now();
    let outcome = positivity_campaign().unwrap();
    gate("positivity", &outcome, 10, t, Duration::from_secs(1));
}
