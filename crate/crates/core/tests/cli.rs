use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn warpspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpspec")).args(args).output().expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().expect("utf-8 path").to_owned()
}

#[test]
fn sanity_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = warpspec(&["sanity", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("sanity.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("experiment,config_hash,case,"));
    assert_eq!(lines.count(), 5);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sanity.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["config_hash"].as_str().unwrap().len(), 16);
    assert!(summary["wall_seconds"].is_number());
}

#[test]
fn identical_configs_give_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = warpspec(&["curvature", "--i-max", "5", "--out", &out_arg(dir.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("curvature.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("family.json");
    fs::write(&cfg, r#"{"experiment": "family", "i_min": 4, "i_max": 12, "mesh": 512, "grid": 64}"#).unwrap();
    let out = warpspec(&["family", "--config", cfg.to_str().unwrap(), "--i-max", "5", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("family.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("family.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["mesh"], 512);
    assert!(summary["fitted_rate"].is_number());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = warpspec(&["sanity", "--mesh", "100", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = warpspec(&["family", "--i-min", "2", "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = dir.path().join("wrong.json");
    fs::write(&cfg, r#"{"experiment": "kristaly"}"#).unwrap();
    let out = warpspec(&["sanity", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = warpspec(&["sanity", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    // an unattainable interval tolerance fails the interval row
    fs::write(&cfg, r#"{"tolerances": {"interval": 1e-15}}"#).unwrap();
    let out = warpspec(&["sanity", "--config", cfg.to_str().unwrap(), "--out", &out_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(dir.path().join("sanity.csv")).unwrap();
    assert!(csv.lines().any(|l| l.contains(",interval,") && l.ends_with(",false")));
}
