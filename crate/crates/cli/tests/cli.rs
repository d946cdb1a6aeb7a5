use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussbound")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn json_schema_has_required_fields() {
    let doc = json(&["example1"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "example1");
    assert_eq!(doc["config"]["t"], 0.9);
    assert_eq!(doc["config"]["N"], serde_json::json!([5, 10, 15, 20]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for key in ["N", "r", "classical_bound", "new_bound", "actual_error", "ratio"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    assert!(doc["suites"].as_array().unwrap().is_empty());
    let n5 = &rows[0];
    assert!((n5["classical_bound"].as_f64().unwrap() / 3.69e-4 - 1.0).abs() < 2e-3);
    assert!((n5["new_bound"].as_f64().unwrap() / 6.60e-5 - 1.0).abs() < 2e-3);
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "csv"] {
        let a = run(&["example2", "--N", "15,5,10", "--format", format]);
        let b = run(&["example2", "--N", "15,5,10", "--format", format]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn rows_are_ordered_by_size() {
    let doc = json(&["example2", "--N", "15,5,10"]);
    let ns: Vec<u64> = doc["rows"].as_array().unwrap().iter().map(|r| r["N"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![5, 10, 15]);
}

#[test]
fn table1_default_rows() {
    let out = run(&["table1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,r,beta,theta,ratio,r_over_N_minus_1");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("10,5,4.0"));

    let pretty = String::from_utf8(run(&["table1"]).stdout).unwrap();
    let first = pretty.lines().nth(1).unwrap();
    assert!(first.contains("4.10e-7") && first.contains("2.02e-7") && first.contains("2.0"));
}

#[test]
fn paper_values_are_labelled() {
    let doc = json(&["example1", "--paper-values"]);
    let row = &doc["rows"][0];
    assert_eq!(row["published_classical"], "1.24e-2");
    assert!(row["classical_bound"].as_f64().unwrap() < 1e-3);
}

#[test]
fn chebyshev_rule_weights() {
    let doc = json(&["rule", "chebyshev1", "--N", "4"]);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert!((row["weight"].as_f64().unwrap() - PI / 4.0).abs() < 1e-14);
        let expected = -((2 * i + 1) as f64 * PI / 8.0).cos();
        assert!((row["node"].as_f64().unwrap() - expected).abs() < 1e-14);
    }
}

#[test]
fn coefficients_of_t5() {
    let doc = json(&["coeffs", "T5", "--M", "8"]);
    for row in doc["rows"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap();
        let a = row["a_n"].as_f64().unwrap();
        assert!((a - if n == 5 { 1.0 } else { 0.0 }).abs() < 1e-13);
    }
}

#[test]
fn bound_kinds() {
    let doc = json(&["bound", "table1-factor", "--N", "10", "--r", "5"]);
    assert!((doc["rows"][0]["beta"].as_f64().unwrap() / 4.10e-7 - 1.0).abs() < 5e-3);
    let doc = json(&["bound", "weight-norm", "--lambda", "0"]);
    assert_eq!(doc["rows"][0]["value"].as_f64().unwrap(), PI);
    let doc = json(&["bound", "xiang", "--V", "inf", "--N", "5", "--r", "4"]);
    assert_eq!(doc["rows"][0]["value"], "Infinity");
    let doc = json(&["bound", "gegenbauer", "--U", "2", "--N", "5", "--r", "4", "--lambda", "0.5"]);
    let half = doc["rows"][0]["value"].as_f64().unwrap();
    let doc = json(&["bound", "new-quad", "--U", "2", "--N", "5", "--r", "4"]);
    assert_eq!(2.0 * half, doc["rows"][0]["value"].as_f64().unwrap());
}

#[test]
fn verify_passes_by_default() {
    let doc = json(&["verify", "--max-n", "20", "--max-r", "6"]);
    let suites = doc["suites"].as_array().unwrap();
    assert!(suites.len() >= 8);
    assert!(suites.iter().all(|s| s["passed"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--perturb"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--max-n", "10", "--max-r", "10"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--seedless"]).status.code(), Some(2));
    assert_eq!(run(&["rule", "--N", "0"]).status.code(), Some(2));
    assert_eq!(run(&["rule", "gegenbauer:-0.7", "--N", "3"]).status.code(), Some(2));
    assert_eq!(run(&["example1", "--t", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "new-coeff", "--U", "1"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--N", "5", "--r", "10"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "sin", "--M", "4"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["table1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 6);
}
