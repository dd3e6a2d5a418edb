use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lingame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lingame")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const CHSH: &str = r#"{"group": {"factors": [2]}, "mA": 2, "mB": 2, "q": "uniform", "f": [[0,0],[0,1]]}"#;

#[test]
fn analyze_chsh() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "chsh.json", CHSH);
    let out = lingame(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["classical_value"], 0.75);
    assert_eq!(report["classical_value_exact"], "3/4");
    assert!((report["quantum_bound"].as_f64().unwrap() - 0.8535533906).abs() < 1e-9);
    assert_eq!(report["pseudo_telepathy_possible"], false);
}

#[test]
fn analyze_rank_one_game() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "rank1.json",
        r#"{"group": {"factors": [3]}, "mA": 2, "mB": 2, "q": "uniform", "f": [[0,1],[2,0]]}"#,
    );
    let out = lingame(&["analyze", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "1");
    assert_eq!(row[8], "1");
    assert_eq!(row[9], "true");
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    assert_eq!(lingame(&["analyze", &bad]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(lingame(&["analyze", missing.to_str().unwrap()]).status.code(), Some(2));
    let unnormalized = write(&dir, "q.json", &CHSH.replace("\"uniform\"", "[[[1,2],[1,4]],[[1,4],[1,4]]]"));
    let out = lingame(&["analyze", &unnormalized]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sums to"));
    assert_eq!(lingame(&["chsh", "4", "1"]).status.code(), Some(2));
    assert_eq!(lingame(&["analyze", &bad, "--rank-tol", "-1"]).status.code(), Some(2));
}

#[test]
fn budget_exit_3() {
    let out = lingame(&["scan", "--count", "1", "--d", "3", "--m", "13"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn chsh_closed_forms() {
    let out = lingame(&["chsh", "5", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((report["quantum_bound"].as_f64().unwrap() - 0.5577708764).abs() < 1e-10);
    let out = lingame(&["chsh", "2", "2", "--format", "csv"]);
    assert!(stdout(&out).lines().nth(1).unwrap().contains(",0.625,"));
}

#[test]
fn nlc_verify() {
    let dir = TempDir::new().unwrap();
    let two = write(&dir, "two.json", r#"{"d": 2, "n": 2, "g": [0, 1], "p": "uniform"}"#);
    let out = lingame(&["nlc", &two, "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["quantum_bound_exact"], "3/4");
    assert_eq!(report["verified"]["brute_force"], "3/4");
    let three = write(&dir, "three.json", r#"{"d": 3, "n": 2, "g": [0, 1, 2], "p": "uniform"}"#);
    let out = lingame(&["nlc", &three, "--verify", "--format", "text"]);
    assert!(stdout(&out).contains("(5/9)"));
    let four = write(&dir, "four.json", r#"{"d": 4, "n": 1, "g": [1], "p": "uniform"}"#);
    assert_eq!(lingame(&["nlc", &four]).status.code(), Some(2));
}

#[test]
fn scan_is_deterministic() {
    let args = ["scan", "--seed", "0", "--count", "10", "--d", "2", "--m", "3"];
    let a = lingame(&args);
    let b = lingame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 11);
    let other = lingame(&["scan", "--seed", "1", "--count", "10", "--d", "2", "--m", "3"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn scan_header_only() {
    let out = lingame(&["scan", "--count", "0", "--d", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
    assert!(stdout(&out).starts_with("index,mA,mB,"));
}

#[test]
fn selftest_passes() {
    let out = lingame(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(" PASS ")).count(), 8);
}
