//! Command-line behaviour beyond the acceptance suite.

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-toa"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn help_exits_zero_and_unknown_flag_exits_two() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "arrival",
        "--config",
        dir.path().join("nope.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.json"));
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, "{\n  \"mass\": 1.0,\n  \"grid\": {\"p_min\": }\n}").unwrap();
    let out = run(&[
        "eigen",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn short_window_embeds_capture_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"time":{"t_min":0,"t_max":8,"n_t":81}}"#).unwrap();
    let out = run(&[
        "arrival",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("arrival.json")).unwrap())
            .unwrap();
    assert!(side["captured_mass"].as_f64().unwrap() < 0.99);
    assert!(!side["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn seed_flag_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"time":{"t_min":0,"t_max":20,"n_t":21},"seed":1}"#).unwrap();
    let out = run(&[
        "arrival",
        "--seed",
        "99",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("arrival.json")).unwrap())
            .unwrap();
    assert_eq!(side["config"]["seed"], 99);
}
