//! End-to-end runs of the binary: output shapes, exit codes, determinism,
//! and the grammar round trip through a full command pipeline.

use std::process::{Command, Output};

fn pec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pec"))
        .args(args)
        .env_remove("PEC_WINDOW")
        .output()
        .expect("binary runs")
}

fn pec_env(args: &[&str], window: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pec"))
        .args(args)
        .env("PEC_WINDOW", window)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn classifies_the_three_full_scopes() {
    let split = pec(&["classify", "--epsilon", "t"]);
    assert!(split.status.success(), "{}", stderr(&split));
    assert!(stdout(&split).starts_with("split, 1-based, value-group\n"));

    let good = pec(&["classify", "--epsilon", "1/2"]);
    assert!(good.status.success());
    assert!(stdout(&good).starts_with("good, non-1-based, residue-field\n"));

    let nonsplit = pec(&["classify", "--epsilon", "1 - t"]);
    assert!(nonsplit.status.success());
    assert!(stdout(&nonsplit).starts_with("nonsplit, non-1-based, residue-field\n"));
}

#[test]
fn classifies_truncations_by_the_abscissa_valuation() {
    let far = pec(&["classify", "--epsilon", "t", "--trunc-x", "t^(-1)"]);
    assert!(far.status.success());
    let text = stdout(&far);
    assert!(text.starts_with("split, non-1-based, residue-field\n"), "{text}");
    assert!(text.contains("case: trunc-near-identity"), "{text}");

    let deep = pec(&["classify", "--epsilon", "t", "--trunc-x", "t^(1/4)"]);
    assert!(deep.status.success());
    let text = stdout(&deep);
    assert!(text.contains("case: trunc-split-deep"), "{text}");
    assert!(text.contains("1-based"), "{text}");
}

#[test]
fn classify_json_report_is_machine_readable() {
    let out = pec(&["classify", "--epsilon", "t", "--json", "--depth", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["epsilon"], "t");
    assert_eq!(v["reduction_type"], "split");
    assert_eq!(v["case_label"], "full-split");
    assert_eq!(v["one_based"], true);
    assert_eq!(v["internality"], "value-group");
    assert_eq!(v["scope"], "full");
    assert_eq!(v["torsion_valuations"][0], "1/2");
    assert_eq!(v["torsion_valuations"][1], "1/4");
}

#[test]
fn torsion_chain_verify_prints_the_halving_valuations() {
    let out = pec(&["verify", "torsion-chain", "--epsilon", "t", "--depth", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "valuations [1/2,1/4,1/8,1/16,1/32], pass\n");
}

#[test]
fn focused_suites_pass_on_their_published_curves() {
    let hom = pec(&[
        "verify", "reduction-hom", "--epsilon", "1/2+t", "--trials", "20", "--seed", "7",
    ]);
    assert!(hom.status.success(), "{}", stderr(&hom));
    assert_eq!(stdout(&hom), "pass\n");

    let rem = pec(&[
        "verify", "remminus", "--epsilon", "t^2", "--trials", "20", "--seed", "7",
    ]);
    assert!(rem.status.success(), "{}", stderr(&rem));
    assert_eq!(stdout(&rem), "pass\n");
}

#[test]
fn sampled_verify_is_deterministic_per_seed() {
    let args = ["verify", "valuation-axioms", "--trials", "40", "--seed", "11", "--json"];
    let a = pec(&args);
    let b = pec(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["suite"], "valuation-axioms");
    assert_eq!(v["scope"], "sampled");
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn focused_verify_is_deterministic_per_seed() {
    let args = ["verify", "group-law", "--epsilon", "t", "--trials", "8", "--seed", "9"];
    let a = pec(&args);
    let b = pec(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), "pass\n");
}

#[test]
fn the_sum_round_trips_as_input() {
    let first = pec(&["add", "--epsilon", "t", "(t^(-1), +)", "(t^(-2), +)"]);
    assert!(first.status.success());
    let sum = stdout(&first).trim().to_string();
    assert!(sum.starts_with('('), "{sum}");
    // Feeding the printed sum back as explicit coordinates re-checks the
    // curve equation and must reproduce the same point.
    let again = pec(&["add", "--epsilon", "t", &sum, "O"]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(stdout(&again).trim(), sum);
}

#[test]
fn reduce_reports_the_residue_point() {
    let out = pec(&["reduce", "--epsilon", "1/2+t", "--json", "(5/4, +)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["reduced"].as_str().unwrap(), "(5/4, (3/8*sqrt(5))*sqrt(7))");
    assert_eq!(v["smooth"], true);

    let ident = pec(&["reduce", "--epsilon", "1/2+t", "O"]);
    assert!(ident.status.success());
    assert!(stdout(&ident).contains("reduced: O"));
}

#[test]
fn parse_errors_carry_offsets_and_exit_2() {
    let out = pec(&["classify", "--epsilon", "t^"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error at byte 2"), "{}", stderr(&out));

    let json = pec(&["classify", "--epsilon", "t^", "--json"]);
    assert_eq!(json.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("byte 2"));
}

#[test]
fn domain_errors_exit_2_with_a_diagnostic() {
    let big = pec(&["classify", "--epsilon", "2"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(stderr(&big).contains("between 0 and 1"));

    let unknown = pec(&["verify", "no-such-suite"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("unknown suite"));

    let pinned = pec(&["verify", "valuation-axioms", "--epsilon", "t"]);
    assert_eq!(pinned.status.code(), Some(2));
    assert!(stderr(&pinned).contains("drop --epsilon"));

    let off_curve = pec(&["add", "--epsilon", "t", "(t, t)", "O"]);
    assert_eq!(off_curve.status.code(), Some(2));
    assert!(stderr(&off_curve).contains("curve equation"));
}

#[test]
fn window_env_is_validated_and_applied() {
    let bad = pec_env(&["classify", "--epsilon", "t"], "zero");
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("PEC_WINDOW"));

    // A narrow explicit window shortens the horizon of printed series.
    let narrow = pec_env(&["add", "--epsilon", "t", "(t^(-1), +)", "O"], "3");
    assert!(narrow.status.success());
    assert!(stdout(&narrow).contains("t^(-1)"));
}
