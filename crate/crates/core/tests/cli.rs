use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ewfs::harness::{read_log, CampaignReport};

fn ewfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewfs")).args(args).output().expect("binary runs")
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["--scenario", "ewfs", "--model", "lhv", "--trials", "20000", "--seed", "7", "--out"];
    args.push(dir.to_str().unwrap());
    args.extend_from_slice(extra);
    ewfs(&args)
}

#[test]
fn completes_with_zero_and_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--check-assumptions"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("settings-independence"));

    let csv = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "trial,X,Y,A,B,C,D,lambda_tag");
    assert_eq!(read_log(csv.as_bytes()).unwrap().len(), 20_000);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["config_echo", "per_setting_counts", "expectations", "S", "SE", "verdict", "assumptions", "certificate"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    let report: CampaignReport = serde_json::from_value(json).unwrap();
    assert!(report.s <= 2.0 + 3.0 * report.se);
    assert!(report.assumptions.all_pass());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_into(a.path(), &["--threads", "1"]);
    run_into(b.path(), &["--threads", "4"]);
    for f in ["runs.csv", "report.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn format_selects_files() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), &["--format", "json"]);
    assert!(dir.path().join("report.json").exists());
    assert!(!dir.path().join("runs.csv").exists());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(ewfs(&["--scenario", "ewfs", "--model", "many-worlds"]).status.code(), Some(2));
    assert_eq!(ewfs(&["--scenario", "chsh", "--model", "lhv"]).status.code(), Some(2));
    assert_eq!(ewfs(&["--model", "lhv"]).status.code(), Some(2));
    assert_eq!(ewfs(&["--scenario", "bell", "--model", "unitary-qm"]).status.code(), Some(2));
    assert_eq!(ewfs(&["--scenario", "ewfs", "--model", "lhv", "--settings", "x,z;z,x"]).status.code(), Some(2));
    assert_eq!(ewfs(&["--compare", "/nonexistent/compare.toml"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = run_into(&blocker.join("sub"), &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_runs_a_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "scenario = \"bell\"\nmodel = \"collapse\"\ntrials = 5000\nseed = 2\nsettings = \"0,pi/2;pi/4,3pi/4\"\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = ewfs(&["--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("report.json").exists());
}

#[test]
fn compare_prints_one_row_per_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cmp.toml");
    fs::write(
        &cfg,
        "[[campaign]]\nscenario = \"bell\"\nmodel = \"toy-theta\"\ntrials = 20000\n\n\
         [[campaign]]\nscenario = \"ewfs\"\nmodel = \"toy-theta\"\ntrials = 20000\n",
    )
    .unwrap();
    let out = ewfs(&["--compare", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().nth(1).unwrap().contains("within"));
    assert!(stdout.lines().nth(2).unwrap().contains("VIOLATES"));
    assert!(dir.path().join("comparison.json").exists());
}
