//! End-to-end runs of the `pncc` binary.

mod common;

use std::path::Path;
use std::process::Command;

use pncc::codes::MatrixFile;

fn pncc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pncc")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn config(name: &str) -> String {
    common::config_path(name).to_str().unwrap().to_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) = pncc(&["validate", "--spec", &config("f25.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("valid: yes"), "{out}");

    let (code, out, _) = pncc(&["validate", "--spec", &config("gf4_closure_violation.toml")]);
    assert_eq!(code, 1);
    assert!(out.contains("violation"), "{out}");

    let dir = tempfile::tempdir().unwrap();
    let garbled = write(dir.path(), "garbled.toml", "field = { p = \nsets = [");
    assert_eq!(pncc(&["validate", "--spec", &garbled]).0, 2);
    assert_eq!(pncc(&["validate", "--spec", "/nonexistent/spec.toml"]).0, 2);
    assert_eq!(pncc(&["table", "--spec", &config("f25.toml"), "--degrees", "1..x"]).0, 2);
    assert_eq!(pncc(&["frobnicate"]).0, 2);
}

#[test]
fn invalid_spec_is_a_usage_error_outside_validate() {
    let (code, _, err) = pncc(&["table", "--spec", &config("gf4_closure_violation.toml"), "--d-max", "2"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn empty_table() {
    let (code, out, _) = pncc(&["table", "--spec", &config("simplex.toml"), "--d-max", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1, "{out}");
    let (code, out, _) = pncc(&["table", "--spec", &config("simplex.toml"), "--d-max", "0", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap(), serde_json::json!([]));
}

#[test]
fn csv_and_json_agree() {
    let spec = config("f25.toml");
    let table = |format| pncc(&["table", "--spec", &spec, "--degrees", "1..10,25", "--format", format]).1;
    let (csv, json) = (table("csv"), table("json"));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (line, row) in lines.zip(&rows) {
        for (key, value) in header.iter().zip(line.split(',')) {
            let cell = &row[*key];
            let json_text = cell.as_str().map_or_else(|| cell.to_string(), str::to_owned);
            assert_eq!(json_text, value, "{key}");
        }
    }
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0]["distance"], 125);
}

#[test]
fn genmat_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let (code, out, _) = pncc(&[
        "genmat", "--spec", &config("f25.toml"), "--degree", "2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "rows 6 columns 151 rank 6\n");
    let file = MatrixFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((file.p, file.m_ext, file.n, file.d), (5, 2, 2, 2));
    assert_eq!((file.rows.len(), file.ncols), (6, 151));
}

#[test]
fn mindist_agrees_on_simplex() {
    let (code, out, _) = pncc(&["mindist", "--spec", &config("simplex.toml"), "--degree", "1", "--workers", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("oracle 4"), "{out}");
    assert!(out.contains("agree"), "{out}");
}

#[test]
fn conjecture_with_tiny_budget_skips() {
    let (code, out, _) = pncc(&[
        "conjecture", "--spec", &config("subgroup_gf7.toml"), "--degrees", "1,2", "--budget-codewords", "1",
        "--format", "json",
    ]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        assert_eq!(e["status"], "skipped-budget");
    }
}

#[test]
fn prm_rows() {
    let (code, out, _) = pncc(&["prm", "--n", "2", "--q", "5", "--d-max", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..4], ["1", "31", "3", "25"]);
}
