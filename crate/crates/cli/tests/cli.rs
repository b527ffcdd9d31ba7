use std::process::{Command, Output};

use serde_json::Value;

fn radon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_cell(csv: &str, row: &str, col: &str) -> String {
    let header = csv.lines().next().unwrap();
    let idx = header.split(',').position(|h| h == col).expect("column present");
    let line = csv
        .lines()
        .skip(1)
        .find(|l| l.split(',').next() == Some(row))
        .expect("row present");
    line.split(',').nth(idx).unwrap().to_string()
}

#[test]
fn vk_reports_value_and_exact_zeroth_volume() {
    let v = json_of(&radon(&["vk", "--k", "2", "--m", "2", "--n", "4"]));
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    let v = json_of(&radon(&["vk", "--k", "0", "--m", "2", "--n", "3"]));
    assert_eq!(v["exact"], "1/10");
}

#[test]
fn vk_csv_format() {
    let out = radon(&["vk", "--k", "1", "--m", "1", "--n", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,m,n,method,value\n1,1,1,auto,"));
}

#[test]
fn prob_in_dimension_one() {
    let v = json_of(&radon(&["prob", "--d", "1", "--m", "2", "--n", "3"]));
    assert!((v["probability"].as_f64().unwrap() - 0.8).abs() < 1e-9);
}

#[test]
fn tables_reference_cells() {
    let out = |s: &str| String::from_utf8(radon(&["tables", s]).stdout).unwrap();
    assert_eq!(csv_cell(&out("m1"), "3", "3"), "0.04387");
    assert_eq!(csv_cell(&out("m3"), "11", "9"), "2.514e-5");
    assert_eq!(csv_cell(&out("kmax"), "5", "5"), "0.00164");
}

#[test]
fn tables_json_has_full_precision() {
    let v = json_of(&radon(&["tables", "m1", "--max-n", "3", "--format", "json"]));
    let cell = v["cells"][3][2].as_f64().unwrap();
    assert!((cell - 0.04387).abs() < 1e-5);
    assert_ne!(format!("{cell}"), "0.04387");
}

#[test]
fn identities_pass() {
    let v = json_of(&radon(&["identities", "--max-total", "8"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn polytope_line_fixtures() {
    let v = json_of(&radon(&["polytope", "--line", "4"]));
    assert_eq!(v["f_vector"], serde_json::json!([8, 8]));
    let v = json_of(&radon(&["polytope", "--line", "5"]));
    assert_eq!(v["f_vector"], serde_json::json!([20, 40, 22]));
    assert_eq!(v["schema"], "radon-lattice/v1");
}

#[test]
fn polytope_tolerance_reports() {
    let out = radon(&["polytope", "--pentagon-center"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerant partitions: none"));
    assert_eq!(json_of(&out)["tolerant"], serde_json::json!([]));
    let v = json_of(&radon(&["polytope", "--circle", "6"]));
    assert_eq!(v["tolerant"], serde_json::json!(["135,246", "246,135"]));
}

#[test]
fn polytope_dot_and_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    std::fs::write(&csv, "x\n1\n2\n3\n4\n").unwrap();
    let dot_path = dir.path().join("out.dot");
    let out = radon(&[
        "polytope",
        "--points",
        csv.to_str().unwrap(),
        "--format",
        "dot",
        "--out",
        dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(dot_path).unwrap();
    assert!(dot.starts_with("graph radon_polytope {"));
    assert_eq!(dot.matches(" -- ").count(), 8);
}

#[test]
fn simulate_is_deterministic_across_workers() {
    let args = |w: &'static str| {
        vec!["simulate", "reay", "--d", "2", "--n", "6", "--samples", "2000", "--seed", "5", "--workers", w]
    };
    let one = radon(&args("1"));
    let three = radon(&args("3"));
    let (a, b) = (json_of(&one), json_of(&three));
    assert_eq!(a["successes"], b["successes"]);
    assert_eq!(a["p_hat"], b["p_hat"]);
    assert_eq!(one.stdout, radon(&args("1")).stdout);
}

#[test]
fn simulate_without_seed_echoes_it() {
    let out = radon(&["simulate", "radon", "--d", "1", "--m", "1", "--n", "2", "--samples", "100"]);
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    let echoed: u64 = stderr
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("seed echoed")
        .parse()
        .unwrap();
    assert_eq!(json_of(&out)["seed"], echoed);
}

#[test]
fn simulate_compare_runs() {
    let v = json_of(&radon(&["simulate", "compare", "--d", "1", "--n", "4", "--samples", "300", "--seed", "2"]));
    assert!(v["test"]["p_value"].as_f64().unwrap() >= 0.0);
}

#[test]
fn usage_errors_exit_two() {
    let code = |args: &[&str]| radon(args).status.code();
    assert_eq!(code(&["vk", "--k", "1", "--m", "1", "--n", "1", "--bogus"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["simulate", "reay", "--d", "2", "--n", "6", "--strict"]), Some(2));
    assert_eq!(code(&["vk", "--k", "1", "--m", "1", "--n", "1", "--method", "nope"]), Some(2));
    assert_eq!(code(&["polytope", "--line", "4", "--format", "csv"]), Some(2));
    assert_eq!(code(&["simulate", "radon", "--d", "1", "--n", "3", "--seed", "1"]), Some(2));
    assert_eq!(code(&["polytope"]), Some(2));
}

#[test]
fn compute_errors_exit_one() {
    let code = |args: &[&str]| radon(args).status.code();
    assert_eq!(code(&["vk", "--k", "1", "--m", "0", "--n", "3"]), Some(1));
    assert_eq!(code(&["polytope", "--points", "/nonexistent/points.csv"]), Some(1));
    assert_eq!(code(&["vk", "--k", "1", "--m", "3", "--n", "3", "--method", "m1"]), Some(1));
}
