use std::process::{Command, Output};

use serde_json::Value;

fn tridom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tridom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn verify_pattern_window() {
    let out = tridom(&["verify", "--t", "3", "--r", "2", "--window", "18"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["efficient"], true);
}

#[test]
fn verify_reports_failure_with_exit_one() {
    let out = tridom(&["verify", "--t", "3", "--r", "1", "--margin", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violation"]["kind"], "margin_too_small");
}

#[test]
fn verify_domination_from_file() {
    let dir = std::env::temp_dir().join(format!("tridom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    let bad = dir.join("bad.json");
    std::fs::write(&good, "[[1,2]]").unwrap();
    std::fs::write(&bad, "[[0,0]]").unwrap();
    let out = tridom(&["verify", "--t", "3", "--r", "1", "--n", "3", "--towers", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = tridom(&["verify", "--t", "3", "--r", "1", "--n", "3", "--towers", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["undominated"], serde_json::json!([0, 3]));
}

#[test]
fn solve_small_triangle() {
    let out = tridom(&["solve", "--n", "3", "--t", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 1);
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["witness"], serde_json::json!([[1, 2]]));
    assert!(v["nodes"].is_u64());
    assert_eq!(v["lower_bound"], 1);
}

#[test]
fn solve_feasibility_limit() {
    let out = tridom(&["solve", "--n", "9", "--t", "3", "--r", "1", "--k", "5"]);
    let v = json(&out);
    assert!(v["value"].as_u64().unwrap() <= 5);
    let out = tridom(&["solve", "--n", "9", "--t", "3", "--r", "1", "--k", "4"]);
    assert_eq!(json(&out)["status"], "infeasible");
}

#[test]
fn reversed_params_are_a_usage_error() {
    let out = tridom(&["pattern", "--t", "9", "--r", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t must be ≥ r"));
}

#[test]
fn missing_flag_is_a_usage_error() {
    let out = tridom(&["solve", "--t", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn pattern_json_schema() {
    let out = tridom(&["pattern", "--t", "2", "--r", "1", "--window", "4", "--margin", "2"]);
    let v = json(&out);
    assert_eq!(v["t"], 2);
    assert_eq!(v["basis"], serde_json::json!([[3, 2], [1, 3]]));
    let towers = v["towers"].as_array().unwrap();
    let keys: Vec<(i64, i64)> = towers.iter().map(|p| (p[1].as_i64().unwrap(), p[0].as_i64().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&(0, 0)));
}

#[test]
fn bounds_json_schema() {
    let out = tridom(&["bounds", "--t", "3", "--r", "1", "--n", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lower"], 3);
    assert!(v["exact"].is_null());
    let upper = v["upper"].as_u64().unwrap();
    assert_eq!(v["witness"].as_array().unwrap().len() as u64, upper);
    assert!(!v["sources"].as_array().unwrap().is_empty());
    let small = json(&tridom(&["bounds", "--t", "3", "--r", "1", "--n", "4"]));
    assert_eq!(small["exact"], 2);
}

#[test]
fn render_writes_svg_file() {
    let path = std::env::temp_dir().join(format!("tridom-render-{}.svg", std::process::id()));
    let out = tridom(&[
        "render",
        "--t",
        "3",
        "--r",
        "1",
        "--n",
        "6",
        "--source",
        "solve",
        "--reach",
        "--boundary",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("<svg") && svg.contains("class=\"reach\""));
    std::fs::remove_file(path).ok();
}

#[test]
fn render_ascii_is_deterministic() {
    let args = ["render", "--t", "2", "--r", "1", "--window", "5", "--values", "--format", "ascii"];
    let (a, b) = (tridom(&args), tridom(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.iter().all(|&c| c == b'\n' || (b' '..=b'~').contains(&c)));
}

#[test]
fn render_rejects_json() {
    let out = tridom(&["render", "--t", "2", "--r", "1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = tridom(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}
