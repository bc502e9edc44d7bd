//! The command-line binary: outputs and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapcone")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn matrix(rows: usize, cols: usize, real: &[f64]) -> Value {
    let entries: Vec<Value> = real.iter().map(|x| json!([x, 0.0])).collect();
    json!({ "rows": rows, "cols": cols, "entries": entries })
}

fn kraus(ops: &[Value]) -> Value {
    json!({ "kraus": ops })
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn transposition_is_not_cp_and_identity_is() {
    let dir = tempfile::tempdir().unwrap();
    // Choi matrix of the transposition on C^2 is the swap.
    let swap = matrix(4, 4, &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]);
    let t = write(dir.path(), "t.json", &json!({ "m": 2, "n": 2, "choi": swap }));
    let out = run(&["member", &t, "CP"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "not_member");

    let id = write(dir.path(), "id.json", &kraus(&[matrix(2, 2, &[1., 0., 0., 1.])]));
    let out = run(&["member", &id, "CP"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "member");

    let out = run(&["witness", &t, "CP"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["value"].as_f64().unwrap() < 0.0);
    assert_eq!(run(&["witness", &id, "CP"]).status.code(), Some(2));
}

#[test]
fn phi_lambda_below_two_positivity_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let eye = matrix(3, 3, &[1., 0., 0., 0., 1., 0., 0., 0., 1.]);
    let spec = write(dir.path(), "spec.json", &json!({ "v": eye, "lambda": 0.4 }));
    let out = run(&["phi-lambda", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["completely_positive"], false);
    assert_eq!(report["k_positive"], json!([true, true, false]));

    let map = write(dir.path(), "map.json", &report["map"]);
    assert_eq!(run(&["member", &map, "Pk(2)"]).status.code(), Some(0));
    assert_eq!(run(&["member", &map, "CP"]).status.code(), Some(1));
}

#[test]
fn dual_of_expressions() {
    let out = run(&["dual", "meet(P,t(CP))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!("join(SP,t(CP))"));
    let out = run(&["dual", "Pk(3)", "--dims", "3,3"]);
    assert_eq!(stdout_json(&out), json!("CP"));
}

#[test]
fn choi_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = matrix(3, 2, &[1., 2., 0., -1., 3., 0.5]);
    let map = write(dir.path(), "k.json", &kraus(&[v]));
    let out = run(&["choi", &map]);
    assert_eq!(out.status.code(), Some(0));
    let choi = write(dir.path(), "c.json", &stdout_json(&out));
    let out = run(&["from-choi", &choi, "--m", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rebuilt = write(dir.path(), "r.json", &stdout_json(&out));
    let out = run(&["choi", &rebuilt]);
    assert_eq!(stdout_json(&out), serde_json::from_str::<Value>(&std::fs::read_to_string(&choi).unwrap()).unwrap());
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = run(&["verify", "--dims", "2,2", "--check", "isometry", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert!(written.as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn verify_small_shape_passes() {
    let out = run(&["verify", "--dims", "2,2", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reports = stdout_json(&out);
    assert!(reports.as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", &kraus(&[matrix(2, 2, &[1., 0., 0., 1.])]));
    assert_eq!(run(&["member", &id, "meet(CP"]).status.code(), Some(64));
    assert_eq!(run(&["nonsense"]).status.code(), Some(64));
    assert_eq!(run(&["member", "/nonexistent/map.json", "CP"]).status.code(), Some(66));
    let bad = write(dir.path(), "bad.json", &json!({ "m": 2, "n": 2, "choi": matrix(3, 3, &[0.; 9]) }));
    assert_eq!(run(&["member", &bad, "CP"]).status.code(), Some(65));
    assert_eq!(run(&["verify", "--check", "nope"]).status.code(), Some(64));
}
