//! Black-box CLI behavior: golden outputs, exit codes, file output.

use std::process::Command;

fn g2v(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_g2v"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn census_of_order_two_totals_seven() {
    let out = g2v(&["census", "--n", "2"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["total"], 7);
    assert_eq!(report["n"], 2);
}

#[test]
fn ward_order_one_passes_with_exit_zero() {
    let out = g2v(&["verify", "ward", "--n", "1"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["graphs"], 2);
}

#[test]
fn operator_renders_in_every_format() {
    let sexpr = g2v(&["op", "--n", "1"]);
    assert!(String::from_utf8(sexpr.stdout).unwrap().starts_with("(+ (* "));
    let latex = g2v(&["op", "--n", "1", "--format", "latex"]);
    assert!(String::from_utf8(latex.stdout).unwrap().contains("\\frac{c}{12}"));
    let json = g2v(&["op", "--n", "1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["labels"], serde_json::json!([1]));
}

#[test]
fn impossible_tolerance_exits_one() {
    let out = g2v(&["verify", "modular", "--check", "nc_symmetry", "--trials", "5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    // the report is still written
    assert!(!out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(g2v(&["census"]).status.code(), Some(2));
    assert_eq!(g2v(&["verify", "modular", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(g2v(&["verify", "modular", "--c", "not-a-number"]).status.code(), Some(2));
    assert_eq!(g2v(&["census", "--n", "99"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join(format!("g2v-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.json");
    let out = g2v(&["census", "--n", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["total"], 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn environment_variables_override_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_g2v"))
        .args(["verify", "modular", "--check", "psi"])
        .env("G2V_TRIALS", "5")
        .env("G2V_SEED", "9")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["trials"], 5);
    assert_eq!(report["seed"], 9);
}
