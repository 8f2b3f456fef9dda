use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const DESK: &str =
    r#"{"system":{"K":4,"G":2,"Nc":4,"Nu":2,"M":2},"grid":[0,2,6],"mode":"simulate"}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hetcache"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(dir: &TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bound_values() {
    let dir = TempDir::new().unwrap();
    let desk = scenario(&dir, "desk.json", DESK);
    let out = run(&["bound", "--scenario", &desk]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("theorem1_bound 1.24430639376\n"), "{text}");
    assert!(text.contains("convex true"));

    let zero = scenario(
        &dir,
        "zero.json",
        r#"{"system":{"K":4,"G":2,"Nc":4,"Nu":2,"M":0}}"#,
    );
    assert!(stdout(&run(&["bound", "--scenario", &zero])).starts_with("theorem1_bound 4\n"));
    let full = scenario(
        &dir,
        "full.json",
        r#"{"system":{"K":4,"G":2,"Nc":4,"Nu":2,"M":6}}"#,
    );
    assert!(stdout(&run(&["bound", "--scenario", &full])).starts_with("theorem1_bound 0\n"));
}

#[test]
fn achievable_at_desk_config() {
    let dir = TempDir::new().unwrap();
    let desk = scenario(&dir, "desk.json", DESK);
    let out = run(&["achievable", "--scenario", &desk]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out)
        .lines()
        .next()
        .unwrap()
        .split(' ')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.2443..=2.25).contains(&value));
}

#[test]
fn invalid_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = scenario(
        &dir,
        "bad.json",
        r#"{"system":{"K":4,"G":3,"Nc":4,"Nu":2,"M":2}}"#,
    );
    let out = run(&["bound", "--scenario", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("G must divide K"));
    let garbled = scenario(&dir, "garbled.json", "{not json");
    assert_eq!(
        run(&["bound", "--scenario", &garbled]).status.code(),
        Some(2)
    );
}

#[test]
fn missing_scenario_exits_3() {
    let out = run(&["bound", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let desk = scenario(&dir, "desk.json", DESK);
    let csv = dir.path().join("sweep.csv");
    let out = run(&["sweep", "--scenario", &desk, "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read(&csv).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "M,beta_ach,achievable,beta_conv,converse,gap");
    let gaps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps[0], 1.0);
    assert!(gaps[1] <= 1.81);
    assert_eq!(gaps[2], 1.0);

    run(&["sweep", "--scenario", &desk, "--out", csv.to_str().unwrap()]);
    assert_eq!(std::fs::read(&csv).unwrap(), first);
}

#[test]
fn sweep_edge_grids() {
    let dir = TempDir::new().unwrap();
    let empty = scenario(
        &dir,
        "empty.json",
        r#"{"system":{"K":4,"G":2,"Nc":4,"Nu":2,"M":2},"grid":[]}"#,
    );
    let out = run(&["sweep", "--scenario", &empty]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "M,beta_ach,achievable,beta_conv,converse,gap\n"
    );

    let bad = scenario(
        &dir,
        "bad.json",
        r#"{"system":{"K":4,"G":2,"Nc":4,"Nu":2,"M":2},"grid":[1,9]}"#,
    );
    assert_eq!(run(&["sweep", "--scenario", &bad]).status.code(), Some(2));

    let unwritable = Path::new("/nonexistent/dir/out.csv").to_str().unwrap();
    let desk = scenario(&dir, "desk.json", DESK);
    assert_eq!(
        run(&["sweep", "--scenario", &desk, "--out", unwritable])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_passes_on_desk_instances() {
    let dir = TempDir::new().unwrap();
    let small = scenario(
        &dir,
        "small.json",
        r#"{"system":{"K":2,"G":1,"Nc":2,"Nu":2,"M":0},"mode":"simulate"}"#,
    );
    assert_eq!(
        run(&["verify", "--scenario", &small]).status.code(),
        Some(0)
    );

    let desk = scenario(&dir, "desk.json", DESK);
    let out = run(&[
        "verify",
        "--scenario",
        &desk,
        "--beta",
        "0.5",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["splits"][0]["t_c"], 1);
    assert_eq!(report["splits"][0]["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_requires_simulate_mode() {
    let dir = TempDir::new().unwrap();
    let analytic = scenario(
        &dir,
        "a.json",
        r#"{"system":{"K":2,"G":1,"Nc":2,"Nu":2,"M":0}}"#,
    );
    assert_eq!(
        run(&["verify", "--scenario", &analytic]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_flags_corrupted_fixture() {
    // M = 0 placement of (2,1,2,2) with W^c_1's only subfile missing.
    let dir = TempDir::new().unwrap();
    let json = r#"{"system":{"K":2,"G":1,"Nc":2,"Nu":2,"M":0},"mode":"simulate","placement":[
        {"kind":"common","index":0,"subset":[],"size_num":1,"size_den":1},
        {"kind":"unique","group":0,"index":0,"subset":[],"size_num":1,"size_den":1},
        {"kind":"unique","group":0,"index":1,"subset":[],"size_num":1,"size_den":1}]}"#;
    let fixture = scenario(&dir, "fixture.json", json);
    let out = run(&["verify", "--scenario", &fixture]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partition invariant"));
}

#[test]
fn simulate_reports_worst_case_and_dump() {
    let dir = TempDir::new().unwrap();
    let desk = scenario(&dir, "desk.json", DESK);
    let dump = dir.path().join("tx.json");
    let out = run(&[
        "simulate",
        "--scenario",
        &desk,
        "--beta",
        "0.5",
        "--out",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["worst_case"]["load"], "9/4");
    assert_eq!(report["worst_case"]["asymmetric_exceeds"], false);
    assert_eq!(report["decodability"]["passed"], true);

    let tx: serde_json::Value = serde_json::from_slice(&std::fs::read(&dump).unwrap()).unwrap();
    let messages = tx["messages"].as_array().unwrap();
    assert_eq!(messages.len(), 7);
    assert_eq!(tx["total_load"], "9/4");
    assert!(messages
        .iter()
        .all(|m| m["subset"].as_array().unwrap().len() == 2));

    let again = run(&["simulate", "--scenario", &desk, "--beta", "0.5"]);
    assert_eq!(again.stdout, out.stdout);
}
