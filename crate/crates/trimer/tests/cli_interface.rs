//! End-to-end tests of the command-line binary: output formats, metadata,
//! and exit-code contract (0 ok, 2 usage error, 3 numerical failure).

use std::process::Command;

fn trimer() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trimer"))
}

#[test]
fn lightspec_csv_parses_and_has_metadata() {
    let out = trimer()
        .args(["lightspec", "--x-count", "11", "--x-max", "4"])
        .output()
        .expect("spawn");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let meta: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    assert!(meta.iter().any(|l| l.contains("alpha")));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "x,e0,e1,n,v,r");
    assert_eq!(data.len(), 12); // header + 11 records
    // all numeric fields parse back to f64
    for line in &data[1..] {
        for field in line.split(',') {
            if !field.is_empty() {
                field.parse::<f64>().expect("numeric field");
            }
        }
    }
}

#[test]
fn effective_json_round_trips() {
    let out = trimer()
        .args([
            "effective", "--eps", "0.2", "--sector", "b", "--levels", "1", "--nodes", "1001",
            "--format", "json",
        ])
        .output()
        .expect("spawn");
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(parsed["metadata"]["alpha"], serde_json::json!(-1.0));
    let records = parsed["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    let ratio = records[0]["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0187929716).abs() / 1.0187929716 < 0.3);
}

#[test]
fn convert_reproduces_reference_parameters() {
    let out = trimer()
        .args(["convert", "--mass-heavy", "1", "--mass-light", "0.01", "--beta", "-50.25"])
        .output()
        .expect("spawn");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    assert!((fields[4] - 0.14106912317171966).abs() < 1e-15); // epsilon
    assert!((fields[5] + 1.0).abs() < 1e-14); // alpha
}

#[test]
fn usage_errors_exit_two() {
    let out = trimer().args(["effective", "--eps", "0"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
    let out = trimer().args(["bs", "--format", "xml"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
    let out = trimer().args(["lightspec", "--alpha", "1.0"]).output().expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn broken_grid_exits_three() {
    // deliberately starved momentum grid: the refined-grid certification
    // must reject the roots
    let out = trimer()
        .args(["bs", "--eps", "0.2", "--sector", "b", "--levels", "1", "--nodes", "64"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn airy_table_lists_constants() {
    let out = trimer().args(["airy", "--levels", "3", "--format", "json"]).output().expect("spawn");
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = parsed["records"].as_array().unwrap();
    assert!(records.len() >= 4);
    assert!((records[0]["sigma"].as_f64().unwrap() + 1.0187929716).abs() < 1e-9);
    assert_eq!(records[0]["kind"], "extremum");
    assert_eq!(records[1]["kind"], "zero");
}
