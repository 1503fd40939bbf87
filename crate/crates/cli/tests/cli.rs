//! End-to-end runs of the `nonloc` binary against the bundled fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn nonloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonloc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn run_with_report(args: &[&str]) -> (Output, Value) {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let report_str = report.to_str().unwrap().to_string();
    all.extend(["--output", &report_str]);
    let out = nonloc(&all);
    let text = std::fs::read_to_string(&report).unwrap_or_else(|_| {
        panic!("no report; stderr: {}", String::from_utf8_lossy(&out.stderr))
    });
    (out, serde_json::from_str(&text).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_eight_state_set() {
    let (out, report) = run_with_report(&["certify", "--input", path(&fixture("s8.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["verdict"], "certified");
    assert_eq!(report["betas"]["A|BC"], "7/8");
    assert_eq!(report["betas"]["B|CA"], "7/8");
    assert_eq!(report["betas"]["C|AB"], "3/4");
}

#[test]
fn certify_distinguishable_quadruple_gives_protocol_hint() {
    let (out, report) = run_with_report(&["certify", "--input", path(&fixture("ghz_basis_4subset_0734.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(report["verdict"], "not-certified");
    assert_eq!(report["protocol_hint"]["cut"], "B|CA");
    assert_eq!(report["betas"]["A|BC"], "1/2");
    assert_eq!(report["betas"]["B|CA"], "1");
}

#[test]
fn certify_with_solutions_for_one_cut() {
    let (out, report) = run_with_report(&["certify", "--input", path(&fixture("s5.json")), "--solutions", "--cut", "C|AB"]);
    assert_eq!(code(&out), 0);
    let sols = report["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["certificate"]["value"], "3/5");
    assert_eq!(sols[0]["measurement"].as_array().unwrap().len(), 5);
}

#[test]
fn certify_three_level_set_in_prefilter_mode() {
    let (out, report) = run_with_report(&["certify", "--input", path(&fixture("s16.json")), "--mode", "float-prefilter"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["betas"]["C|AB"], "3/4");
    assert!((report["float_betas"]["A|BC"].as_f64().unwrap() - 0.875).abs() < 1e-6);
}

#[test]
fn certify_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"t": 1, "states": []}"#).unwrap();
    assert_eq!(code(&nonloc(&["certify", "--input", path(&empty)])), 2);
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"t\": 1, \"states\": [[9]]}").unwrap();
    let out = nonloc(&["certify", "--input", path(&broken)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(code(&nonloc(&["certify", "--input", path(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn verify_published_certificate() {
    let (out, report) = run_with_report(&[
        "verify",
        "--input",
        path(&fixture("s5.json")),
        "--certificate",
        path(&fixture("s5_cert_c.json")),
        "--cut",
        "C|AB",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["feasible"], true);
    assert_eq!(report["value"], "3/5");
    assert!(String::from_utf8_lossy(&out.stdout).contains("feasible, value 3/5"));
}

#[test]
fn verify_detects_negated_q() {
    let dir = TempDir::new().unwrap();
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(fixture("s8_cert_a.json")).unwrap()).unwrap();
    let q = cert["qs"][0].as_array_mut().unwrap();
    let slot = q.iter().position(|c| c != "0").unwrap();
    q[slot] = Value::String("-1".to_string());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, cert.to_string()).unwrap();
    let out = nonloc(&["verify", "--input", path(&fixture("s8.json")), path(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("infeasible"));
}

#[test]
fn verify_support_certificate_has_value_one() {
    // y = 1 on the eight states of the set and 0 elsewhere, every q = 0.
    let set: Value = serde_json::from_str(&std::fs::read_to_string(fixture("s8.json")).unwrap()).unwrap();
    let mut y = vec!["0"; 64];
    for s in set["states"].as_array().unwrap() {
        let flat = s[0].as_u64().unwrap() * 8 + s[1].as_u64().unwrap();
        y[flat as usize] = "1";
    }
    let cert = serde_json::json!({"cut": "A|BC", "y": y, "qs": vec![vec!["0"; 64]; 8], "value": "1"});
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("support.json");
    std::fs::write(&file, cert.to_string()).unwrap();
    let (out, report) = run_with_report(&["verify", "--input", path(&fixture("s8.json")), "--certificate", path(&file)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["value"], "1");
    assert_eq!(report["feasible"], true);
}

#[test]
fn verify_mismatches_are_input_errors() {
    let wrong_cut = nonloc(&[
        "verify",
        "--input",
        path(&fixture("s5.json")),
        path(&fixture("s5_cert_a.json")),
        "--cut",
        "B|CA",
    ]);
    assert_eq!(code(&wrong_cut), 2);
    let wrong_set = nonloc(&["verify", "--input", path(&fixture("s8.json")), path(&fixture("s5_cert_a.json"))]);
    assert_eq!(code(&wrong_set), 2);
}

#[test]
fn bound_on_the_26_state_set() {
    let fourteen = "0,2,3,5,7,8,11,13,14,17,19,21,22,25";
    let (out, report) = run_with_report(&["bound", "--input", path(&fixture("n26.json")), "--select", fourteen]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["threshold"], "27/2");
    assert_eq!(report["verdict"], "certified");
    let thirteen = "0,2,3,5,7,8,11,13,14,17,19,21,22";
    let (out, report) = run_with_report(&["bound", "--input", path(&fixture("n26.json")), "--select", thirteen]);
    assert_eq!(code(&out), 1);
    assert_eq!(report["verdict"], "inconclusive");
}

#[test]
fn bound_on_lattice_sets() {
    let dir = TempDir::new().unwrap();
    let states: Vec<Vec<u8>> = (0..17).map(|i| vec![i / 8, i % 8]).collect();
    let file = dir.path().join("seventeen.json");
    std::fs::write(&file, serde_json::json!({"t": 2, "states": states}).to_string()).unwrap();
    let (out, report) = run_with_report(&["bound", "--input", path(&file)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["threshold"], "16");
    let (out, _) = run_with_report(&["bound", "--input", path(&fixture("s10.json"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bound_reports_non_orthogonal_pair() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("overlap.json");
    let state = serde_json::json!({"d": 3, "terms": [[0, 0, 0], [1, 1, 1]], "phases": ["+1", "+1"]});
    std::fs::write(&file, serde_json::json!({"d": 3, "states": [state, state]}).to_string()).unwrap();
    let out = nonloc(&["bound", "--input", path(&file)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('0') && err.contains('1'), "{err}");
}

#[test]
fn search_finds_eight_state_set() {
    let (out, report) = run_with_report(&["search", "--input", path(&fixture("s10.json")), "--target-size", "8"]);
    assert_eq!(code(&out), 0);
    let s8: Value = serde_json::from_str(&std::fs::read_to_string(fixture("s8.json")).unwrap()).unwrap();
    let mut want: Vec<Value> = s8["states"].as_array().unwrap().clone();
    want.sort_by_key(|v| v.to_string());
    let found = report["found"].as_array().unwrap().iter().any(|f| {
        let mut have = f["states"].as_array().unwrap().clone();
        have.sort_by_key(|v| v.to_string());
        have == want
    });
    assert!(found);
    assert!(!out.stderr.is_empty(), "progress goes to stderr");
}

#[test]
fn exhaustive_search_over_basis() {
    let (out, report) = run_with_report(&["search", "--input", path(&fixture("ghz_basis.json")), "--exhaustive"]);
    assert_eq!(code(&out), 0);
    let sizes: Vec<usize> = report["found"].as_array().unwrap().iter().map(|f| f["positions"].as_array().unwrap().len()).collect();
    assert_eq!(sizes.len(), 56);
    assert!(sizes.iter().all(|&s| s == 5));
    assert_eq!(report["complete"], true);
}

#[test]
fn zero_budget_search_is_incomplete_and_resumable() {
    let dir = TempDir::new().unwrap();
    let cursor = dir.path().join("cursor.json");
    let (out, report) = run_with_report(&[
        "search",
        "--input",
        path(&fixture("ghz_basis.json")),
        "--budget",
        "0",
        "--cursor",
        path(&cursor),
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(report["complete"], false);
    assert!(cursor.exists());
    let (out, report) = run_with_report(&["search", "--input", path(&fixture("ghz_basis.json")), "--cursor", path(&cursor)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report["found"].as_array().unwrap().len(), 56);
}

#[test]
fn suite_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = nonloc(&["paper-suite", "--only", "1,3,4,6,7", "--output", path(p)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains("[PASS]"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(code(&nonloc(&["paper-suite", "--only", "11"])), 2);
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_nonloc"))
        .args(["certify", "--input", path(&fixture("s5.json"))])
        .env("NONLOC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_nonloc"))
        .args(["certify", "--input", path(&fixture("s5.json"))])
        .env("NONLOC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}
