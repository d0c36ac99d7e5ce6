//! Exit-code contract and document handling of the `hmk` binary:
//! 0 verdict-true, 1 verdict-false, 2 malformed input, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hmk-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn hmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmk"))
        .args(args)
        .output()
        .expect("spawn hmk")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn check_hilbert_exact_certifies() {
    let dir = workdir();
    let hilbert = write(
        &dir,
        "hilbert.json",
        r#"{"n": 3, "kind": "hankel-rule",
            "generating_vector": ["1","1/2","1/3","1/4","1/5","1/6","1/7","1/8","1/9"]}"#,
    );
    let out = hmk(&[
        "check",
        "--vector",
        hilbert.to_str().unwrap(),
        "--pmax",
        "5",
        "--mode",
        "exact",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["result"]["verdict"], "true");
    assert_eq!(json["result"]["certificate"]["verdict"], "PSD");
    assert_eq!(json["result"]["certificate"]["rank"], 5);
    assert_eq!(json["config"]["mode"], "exact");
}

#[test]
fn check_indefinite_vector_exits_one_with_witness() {
    let dir = workdir();
    let notpsd = write(
        &dir,
        "notpsd.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [1, 0, -1]}"#,
    );
    let out = hmk(&["check", "--vector", notpsd.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["verdict"], "false");
    assert!(json["result"]["certificate"]["witness"].is_array());
}

#[test]
fn check_violating_table_reports_the_pair() {
    let dir = workdir();
    let table = write(
        &dir,
        "bad_table.json",
        r#"{"n": 3, "kind": "table", "max_degree": 2, "entries": [
            {"j": [0,0], "value": 1}, {"j": [1,0], "value": 2},
            {"j": [0,1], "value": 6}, {"j": [2,0], "value": 5},
            {"j": [1,1], "value": 7}, {"j": [0,2], "value": 9}]}"#,
    );
    let out = hmk(&["check", "--sequence", table.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["result"]["hankel_sequence"]["holds"], false);
    let violation = &json["result"]["hankel_sequence"]["violation"];
    assert_eq!(violation[0], serde_json::json!([0, 1]));
    assert_eq!(violation[1], serde_json::json!([2, 0]));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("violated"), "stderr: {stderr}");
}

#[test]
fn check_consistent_table_collapses_and_certifies() {
    let dir = workdir();
    let table = write(
        &dir,
        "good_table.json",
        r#"{"n": 3, "kind": "table", "max_degree": 2, "entries": [
            {"j": [0,0], "value": 2}, {"j": [1,0], "value": 0},
            {"j": [0,1], "value": 2}, {"j": [2,0], "value": 2},
            {"j": [1,1], "value": 0}, {"j": [0,2], "value": 2}]}"#,
    );
    let out = hmk(&["check", "--sequence", table.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["result"]["hankel_sequence"]["holds"], true);
    assert_eq!(json["result"]["verdict"], "true");
}

#[test]
fn malformed_json_exits_two() {
    let dir = workdir();
    let broken = write(&dir, "broken.json", "{not json");
    let out = hmk(&["check", "--vector", broken.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn exact_mode_rejects_float_values() {
    let dir = workdir();
    let floats = write(
        &dir,
        "floats.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [1.5, 0.25, 2.0]}"#,
    );
    let out = hmk(&[
        "check",
        "--vector",
        floats.to_str().unwrap(),
        "--mode",
        "exact",
    ]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("rational"), "stderr: {stderr}");
}

#[test]
fn decompose_constant_vector() {
    let dir = workdir();
    let ones = write(
        &dir,
        "ones.json",
        r#"{"n": 3, "kind": "hankel-rule", "generating_vector": [1,1,1,1,1,1,1,1,1]}"#,
    );
    let out = hmk(&[
        "decompose",
        "--vector",
        ones.to_str().unwrap(),
        "--n",
        "3",
        "--m",
        "4",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let json = stdout_json(&out);
    let atoms = json["result"]["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0]["t"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((atoms[0]["w"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(json["result"]["augmented_c"].as_f64().unwrap(), 0.0);
}

#[test]
fn decompose_refuses_non_strong_vector() {
    let dir = workdir();
    let bad = write(
        &dir,
        "nonstrong.json",
        r#"{"n": 3, "kind": "hankel-rule", "generating_vector": [1, 0, -1, 0, 1]}"#,
    );
    let out = hmk(&[
        "decompose",
        "--vector",
        bad.to_str().unwrap(),
        "--n",
        "3",
        "--m",
        "2",
    ]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("precondition"), "stderr: {stderr}");
}

#[test]
fn decompose_short_vector_exits_two() {
    let dir = workdir();
    let short = write(
        &dir,
        "short.json",
        r#"{"n": 3, "kind": "hankel-rule", "generating_vector": [1, 1, 1]}"#,
    );
    let out = hmk(&[
        "decompose",
        "--vector",
        short.to_str().unwrap(),
        "--n",
        "3",
        "--m",
        "2",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn decompose_negative_top_moment_exits_three() {
    let dir = workdir();
    let hostile = write(
        &dir,
        "hostile.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [2, 1, 1, -5]}"#,
    );
    let out = hmk(&[
        "decompose",
        "--vector",
        hostile.to_str().unwrap(),
        "--n",
        "2",
        "--m",
        "3",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn eval_prints_both_paths() {
    let dir = workdir();
    let seq = write(
        &dir,
        "quadratic.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [1, 2, 5]}"#,
    );
    let out = hmk(&[
        "eval",
        "--sequence",
        seq.to_str().unwrap(),
        "--m",
        "2",
        "--x",
        "1,1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("direct = 10"), "stdout: {stdout}");
    assert!(stdout.contains("contraction = 10"), "stdout: {stdout}");
    assert!(stdout.contains("abs_diff = 0"), "stdout: {stdout}");
}

#[test]
fn eval_exact_mode_prints_rationals() {
    let dir = workdir();
    let seq = write(
        &dir,
        "hilbert2.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": ["1", "1/2", "1/3"]}"#,
    );
    let out = hmk(&[
        "eval",
        "--sequence",
        seq.to_str().unwrap(),
        "--m",
        "2",
        "--x",
        "1,1/2",
        "--mode",
        "exact",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    // 1 + 2*(1/2)*(1/2) + (1/3)*(1/4) = 19/12
    assert!(stdout.contains("direct = 19/12"), "stdout: {stdout}");
    assert!(stdout.contains("abs_diff = 0"), "stdout: {stdout}");
}

#[test]
fn explore_strong_only_family_gives_empty_report() {
    let dir = workdir();
    let family = write(
        &dir,
        "strong_family.json",
        r#"{"n": 3, "m_max": 2, "pattern": [0],
            "values": {"grid": [[1.0, 2.0]]}, "seed": 1}"#,
    );
    let out = hmk(&[
        "explore",
        "--family",
        family.to_str().unwrap(),
        "--mlist",
        "2",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let json = stdout_json(&out);
    assert_eq!(json["result"]["qualifying"], 0);
    assert_eq!(json["result"]["candidates"].as_array().unwrap().len(), 0);
}

#[test]
fn explore_malformed_family_exits_two() {
    let dir = workdir();
    let family = write(&dir, "family.json", r#"{"n": 3, "pattern": "wrong"}"#);
    let out = hmk(&["explore", "--family", family.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn selftest_passes() {
    let out = hmk(&["selftest"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all checks passed"), "stdout: {stdout}");
    assert!(!stdout.contains("[FAIL]"));
}

#[test]
fn out_flag_writes_file_with_config_echo() {
    let dir = workdir();
    let ones = write(
        &dir,
        "ones_out.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [1, 1, 1]}"#,
    );
    let target = dir.join("verdict.json");
    let out = hmk(&[
        "check",
        "--vector",
        ones.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.ends_with('\n'));
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["config"]["command"], "check");
    assert_eq!(json["config"]["input"], ones.to_str().unwrap());
}

#[test]
fn quiet_logging_suppresses_info() {
    let dir = workdir();
    let ones = write(
        &dir,
        "ones_quiet.json",
        r#"{"n": 2, "kind": "hankel-rule", "generating_vector": [1, 1, 1]}"#,
    );
    let target = dir.join("quiet.json");
    let out = Command::new(env!("CARGO_BIN_EXE_hmk"))
        .env("HMK_LOG", "info")
        .args([
            "check",
            "--vector",
            ones.to_str().unwrap(),
            "--out",
            target.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("wrote"), "info log expected: {stderr}");

    let out = Command::new(env!("CARGO_BIN_EXE_hmk"))
        .env("HMK_LOG", "quiet")
        .args([
            "check",
            "--vector",
            ones.to_str().unwrap(),
            "--out",
            target.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.stderr.is_empty(), "quiet run must not log");
}
