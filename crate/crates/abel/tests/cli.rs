//! End-to-end tests of the command-line tool: exit-code contract, JSON
//! outputs and the displacement CSV.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_abel")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn check_zero_criterion_exits_zero_with_nodes() {
    let out = run(&[
        "check",
        fixture("quartic_trig.json").to_str().unwrap(),
        "--hypothesis",
        "c",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "abel-certificate/1");
    assert_eq!(v["kind"], "C");
    let nodes: Vec<f64> = serde_json::from_value(v["nodes"].clone()).unwrap();
    assert_eq!(nodes, vec![-2.0, -1.0, 1.0, 3.0]);
}

#[test]
fn check_curves_certificate() {
    let out = run(&[
        "check",
        fixture("cubic_curve_family.json").to_str().unwrap(),
        "--hypothesis",
        "hprime",
        "--lambdas",
        "-4,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "Hprime");
    assert_eq!(v["bound"], 3);
}

#[test]
fn check_refusal_exits_two() {
    let out = run(&[
        "check",
        fixture("cubic_sign_changing.json").to_str().unwrap(),
        "--hypothesis",
        "h",
        "--lambdas",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["certified"], false);
    assert!(v["refusal"]["reason"]["kind"].is_string());
}

#[test]
fn malformed_file_exits_one_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"degree": 3, "coefficients": [{"const": 1}, {"const": 1}, {"const": 1}]}"#,
    )
    .unwrap();
    let out = run(&["check", path.to_str().unwrap(), "--hypothesis", "h", "--lambdas", "0,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("coefficients"), "diagnostic: {err}");
    assert!(err.contains('4'), "diagnostic names the arity: {err}");
}

#[test]
fn find_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let csv_path = dir.path().join("displacement.csv");
    let out = run(&[
        "find",
        fixture("quartic_autonomous.json").to_str().unwrap(),
        "--range",
        "-10:10",
        "--grid",
        "801",
        "--out",
        report_path.to_str().unwrap(),
        "--displacement-csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["schema"], "abel-report/1");
    assert_eq!(report["bound_satisfied"], true);
    let sols = report["solutions"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    let xs: Vec<f64> = sols.iter().map(|s| s["x0"].as_f64().unwrap()).collect();
    for (x, want) in xs.iter().zip([-4.0, -1.0, 1.0, 3.0]) {
        assert!((x - want).abs() < 1e-8);
    }
    assert_eq!(report["provenance"]["seed"], 42);

    // CSV: header plus one row per grid sample, x0 monotone
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x0,displacement,dH,outcome");
    assert_eq!(lines.len(), 1 + 801);
    let mut last = f64::NEG_INFINITY;
    let mut escaped = 0;
    for line in &lines[1..] {
        let x0: f64 = line.split(',').next().unwrap().parse().unwrap();
        assert!(x0 > last);
        last = x0;
        if line.ends_with(",escaped") {
            escaped += 1;
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[1], "");
            assert_eq!(fields[2], "");
        }
    }
    assert!(escaped > 0, "far samples blow up and must be marked escaped");
}

#[test]
fn find_zero_equation_reports_continuum() {
    let out = run(&[
        "find",
        fixture("zero_equation.json").to_str().unwrap(),
        "--range",
        "-1:1",
        "--grid",
        "51",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["bound_satisfied"].is_null());
    assert_eq!(v["solutions"]["solutions"].as_array().unwrap().len(), 0);
    assert_eq!(v["solutions"]["continua"].as_array().unwrap().len(), 1);
}

#[test]
fn find_rejects_bad_inputs() {
    let out = run(&[
        "find",
        fixture("quartic_autonomous.json").to_str().unwrap(),
        "--range",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["find", "no-such-file.json", "--range", "-1:1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reproduce_list_prints_claims() {
    let out = run(&["reproduce", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("quartic-certify"));
    assert!(text.contains("derivative-oracle"));
}

#[test]
fn reproduce_runs_clean_and_detects_degraded_tolerance() {
    let out = run(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all 10 claims pass"));

    let out = run(&["reproduce", "--tol", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn check_uses_file_nodes_when_lambdas_omitted() {
    let out = run(&[
        "check",
        fixture("quartic_autonomous.json").to_str().unwrap(),
        "--hypothesis",
        "h",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let nodes: Vec<f64> = serde_json::from_value(v["nodes"].clone()).unwrap();
    assert_eq!(nodes, vec![-2.0, 0.0, 2.0, 4.0]);
    // exact path evidence
    assert_eq!(v["evidence"][0]["constant_value_exact"], "-30");
}
