use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_complex-chaos"))
}

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = bin().args(args).arg("--out").arg(&out).output().unwrap();
    let report = if Path::new(&out).exists() {
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap()
    } else {
        Value::Null
    };
    (
        status.status.code().unwrap(),
        report,
        String::from_utf8_lossy(&status.stderr).into_owned(),
    )
}

#[test]
fn disjoint_pair_passes() {
    let (code, report, _) = run(&["run", &scenario("disjoint_pair.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["body"]["pass"], true);
    assert_eq!(report["body"]["settings"]["certified_rho"], 1.0);
    assert_eq!(report["body"]["settings"]["seed"], 42);
}

#[test]
fn overlapping_pair_fails_with_unit_residual() {
    let (code, report, _) = run(&["run", &scenario("overlapping_pair.json")]);
    assert_eq!(code, 1);
    let check = &report["body"]["checks"][0];
    assert_eq!(check["report"]["pass"], false);
    assert_eq!(check["report"]["residual"], 1.0);
}

#[test]
fn product_grid_passes() {
    let (code, report, _) = run(&["run", &scenario("product_grid.json")]);
    assert_eq!(code, 0);
    for check in report["body"]["checks"].as_array().unwrap() {
        assert!(check["report"]["residual"].as_f64().unwrap() <= 1e-9);
        assert_eq!(check["report"]["metadata"]["cases"], 12600);
    }
}

#[test]
fn checks_are_sorted_and_selectable() {
    let (code, report, _) = run(&["run", &scenario("tour.json")]);
    assert_eq!(code, 0);
    let names: Vec<&str> = report["body"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 9);

    let (code, report, _) = run(&["run", &scenario("tour.json"), "--only", "isometry,covariance"]);
    assert_eq!(code, 0);
    assert_eq!(report["body"]["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_2_with_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let (code, _, stderr) = run(&["run", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let record: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(record["error"]["kind"], "parse");

    let (code, _, stderr) = run(&["run", &scenario("tour.json"), "--max-order", "2"]);
    assert_eq!(code, 2);
    let record: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(record["error"]["kind"], "cap");

    let (code, _, _) = run(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["run", &scenario("tour.json"), "--only", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn hermite_commands() {
    let out = bin().args(["hermite", "table", "--max", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 45);
    let j22 = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["m"] == 2 && r["n"] == 2)
        .unwrap();
    assert_eq!(j22["polynomial"], "z^2 zb^2 - 4 z zb + 2");

    let (code, report, _) = run(&["hermite", "product-check", "--max", "8"]);
    assert_eq!(code, 0);
    assert_eq!(report["body"]["checks"][0]["report"]["metadata"]["cases"], 495);

    let (code, _, _) = run(&["hermite", "product-check", "--max", "9"]);
    assert_eq!(code, 2);
}

#[test]
fn selftest_negative_control_fails() {
    let (code, report, _) = run(&["selftest", "--inject-perturbation", "1e-3"]);
    assert_eq!(code, 1);
    let failing: Vec<&str> = report["body"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["report"]["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["product", "product-conjugated"]);
}

#[test]
fn selftest_bodies_repeat() {
    let (code_a, a, _) = run(&["selftest", "--seed", "7", "--samples", "20000"]);
    let (code_b, b, _) = run(&["selftest", "--seed", "7", "--samples", "20000"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_a, code_b);
    assert_eq!(a["body"], b["body"]);
}
