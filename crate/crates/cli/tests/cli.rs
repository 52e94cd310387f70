//! End-to-end tests for the `g2moduli` binary: exit codes, output shapes,
//! determinism of the JSON report, and the catalog override.

use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_g2moduli");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn reproduce_succeeds_with_expected_summary() {
    let out = run(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("302 matched, 4 upper bounds, 8 flagged, 0 mismatched"),
        "summary line missing:\n{text}"
    );
    assert!(text.contains("247Q: skipped"));
    assert!(text.contains("357A: skipped"));
}

#[test]
fn reproduce_json_is_byte_identical_across_runs() {
    let a = run(&["reproduce", "--json"]);
    let b = run(&["reproduce", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&a)).expect("valid JSON");
    assert_eq!(parsed["schema_version"], 1);
    assert!(parsed["entries"].as_array().unwrap().len() >= 40);
}

#[test]
fn reproduce_only_restricts_entries() {
    let out = run(&["reproduce", "--json", "--only", "n4,n10"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = parsed["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["n4", "n10"]);
}

#[test]
fn list_shows_capabilities() {
    let out = run(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("n4") && l.contains("closed, coclosed")));
    assert!(text.lines().any(|l| l.starts_with("247Q") && l.contains("expected values only")));
}

#[test]
fn compute_prints_moduli_dimension() {
    let out = run(&["compute", "n4", "--kind", "coclosed"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dim V          = 29"), "{text}");
    assert!(text.contains("dim Aut        = 27"), "{text}");
    assert!(text.contains("moduli dim     = 2"), "{text}");
}

#[test]
fn compute_reports_upper_bound_when_stabilizer_remains() {
    let out = run(&["compute", "n3", "--kind", "coclosed"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("moduli dim     <= 2"), "{}", stdout(&out));
}

#[test]
fn betti_single_and_all() {
    let out = run(&["betti", "n10", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "b3(n10) = 20");

    let out = run(&["betti", "n10"]);
    let text = stdout(&out);
    assert!(text.contains("b0 = 1"));
    assert!(text.contains("b7 = 1"));
}

#[test]
fn parse_form_prints_canonical_rendering() {
    let out = run(&["parse", "--form", "e^{347} + e127 - 2*e567"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "e127+e347-2*e567");
}

#[test]
fn parse_salamon_prints_summary() {
    let out = run(&["parse", "--salamon", "(0,0,0,12,13,23,0)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(0,0,0,12,13,23,0)"));
    assert!(text.contains("nilpotency step: 2"));
    assert!(text.contains("dim Der: 25"));
}

#[test]
fn parse_error_reports_offset_and_exits_2() {
    let out = run(&["parse", "--salamon", "(0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error at offset"), "{}", stderr(&out));
}

#[test]
fn unknown_entry_exits_2() {
    let out = run(&["info", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown entry"));
}

#[test]
fn missing_catalog_file_exits_3() {
    let out = run(&["--catalog", "/nonexistent/catalog.json", "list"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("cannot read catalog"));
}

#[test]
fn invalid_catalog_exits_3() {
    let path = format!("{}/invalid.json", env!("CARGO_TARGET_TMPDIR"));
    std::fs::write(&path, r#"{"schema_version": 99, "entries": []}"#).unwrap();
    let out = run(&["--catalog", &path, "list"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("invalid catalog"));
}

#[test]
fn catalog_override_with_mismatching_expectation_exits_1() {
    let path = format!("{}/mismatch.json", env!("CARGO_TARGET_TMPDIR"));
    std::fs::write(
        &path,
        r#"{
  "schema_version": 1,
  "entries": [
    {
      "name": "n4",
      "salamon": "(0,0,0,0,12,13,0)",
      "expected": { "b3": { "value": 99, "source": "table2" } }
    }
  ]
}"#,
    )
    .unwrap();
    let out = run(&["--catalog", &path, "reproduce"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("MISMATCH b3 computed 21 vs published 99"), "{text}");
}

#[test]
fn catalog_override_with_consistent_expectation_exits_0() {
    let path = format!("{}/consistent.json", env!("CARGO_TARGET_TMPDIR"));
    std::fs::write(
        &path,
        r#"{
  "schema_version": 1,
  "entries": [
    {
      "name": "n4",
      "salamon": "(0,0,0,0,12,13,0)",
      "expected": { "b3": { "value": 21, "source": "table2" } }
    }
  ]
}"#,
    )
    .unwrap();
    let out = run(&["--catalog", &path, "reproduce"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn info_lists_expected_values() {
    let out = run(&["info", "n2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("structure equations: (0,0,0,0,0,12,0)"));
    assert!(text.contains("expected moduli_coclosed = 1 (upper bound)"), "{text}");
}

#[test]
fn search_is_deterministic_for_a_fixed_seed() {
    let args = &["search", "n3", "--kind", "coclosed", "--trials", "50", "--seed", "7"];
    let a = run(args);
    let b = run(args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_environment_variable_matches_explicit_flag() {
    let flagged = run(&["search", "n3", "--kind", "coclosed", "--trials", "50", "--seed", "11"]);
    let env = Command::new(BIN)
        .args(["search", "n3", "--kind", "coclosed", "--trials", "50"])
        .env("G2MODULI_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flagged.status.code(), Some(0));
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(flagged.stdout, env.stdout);
}

#[test]
fn search_finds_the_published_improvement() {
    // n10's published perturbation kills the one-dimensional stabilizer.
    let out = run(&["search", "n10", "--kind", "closed", "--trials", "10", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("stab (given)   = 1"), "{text}");
    assert!(text.contains("stab (best)    = 0"), "{text}");
    assert!(text.contains("moduli dim     = 2"), "{text}");
}
