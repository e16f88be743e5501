use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const U5: &str = r#"{
  "schema_version": 1,
  "structure": { "kind": "sets", "ground": 5, "family": { "kind": "size_at_most", "k": 1 } },
  "game": { "family": "U", "rounds": 2, "width": 2 }
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutchoose"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_then_verify_the_exported_table() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "u.json", U5);
    let table = dir.path().join("t.json");
    let out = run(&["--json", "solve", &inst, "--strategy", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["winner"], "Choose");
    let out = run(&["--json", "verify", &inst, table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["wins"], true);
}

#[test]
fn exhausted_budget_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "u.json", &U5.replace(r#"{ "kind": "size_at_most", "k": 1 }"#, r#"{ "kind": "generated_by", "masks": ["{0}", "{1}"] }"#));
    let out = run(&["solve", &inst, "--state-budget", "3"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &U5.replace("\"ground\": 5", "\"ground\": 0"));
    assert_eq!(run(&["solve", &bad]).status.code(), Some(1));
    assert_eq!(run(&["solve", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_reports_the_thresholds() {
    let out = run(&["--json", "scan", "--rounds", "1..2", "--ground", "2..6"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = &json(&out)["rows"];
    assert_eq!(rows[0]["min_choose"], 3);
    assert_eq!(rows[1]["min_choose"], 5);
}

#[test]
fn interactive_play_records_a_replayable_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "u.json", U5);
    let rec = dir.path().join("play.json");
    // we cut, the solver chooses
    let mut child = bin()
        .args(["play", &inst, "--as", "cut", "--record", rec.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"nonsense\n{0,1} {2,3,4}\n0\n0\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("winner: Choose"));

    let out = run(&["--json", "play", &inst, "--replay", rec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["winner"], "Choose");

    let tampered = fs::read_to_string(&rec).unwrap().replace("\"Choose\"", "\"Cut\"");
    let bad = write(dir.path(), "tampered.json", &tampered);
    assert_eq!(run(&["play", &inst, "--replay", &bad]).status.code(), Some(1));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "u.json", U5);
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    assert_eq!(run(&["solve", &inst, "--cache-dir", c]).status.code(), Some(0));
    let out = run(&["solve", &inst, "--cache-dir", c]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cached"));
    assert_eq!(json(&run(&["--json", "cache", "stats", "--dir", c]))["entries"], 1);
    assert_eq!(json(&run(&["--json", "cache", "clear", "--dir", c])), 1);
}

#[test]
fn corpus_listing_is_prefix_stable() {
    let short = json(&run(&["--json", "corpus", "--list", "--size", "5"]));
    let long = json(&run(&["--json", "corpus", "--list", "--size", "8"]));
    assert_eq!(short.as_array().unwrap()[..], long.as_array().unwrap()[..5]);
}
