use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn semicont(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semicont")).args(args).current_dir(root()).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    semicont(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(semicont(args).stdout).unwrap()
}

fn stderr(args: &[&str]) -> String {
    String::from_utf8(semicont(args).stderr).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semicont-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["implies", "LSC", "TWLC"]), 0);
    assert_eq!(code(&["implies", "SLSC", "TWLC"]), 1);
    assert_eq!(code(&["check", "models/bad-opens.toml"]), 2);
    assert_eq!(code(&["check", "models/missing.toml"]), 2);
    assert_eq!(code(&["implies", "LSC", "NOPE"]), 3);
    assert_eq!(code(&["implies", "LSC", "TWLC", "--hyp", "N2"]), 3);
    assert_eq!(code(&["implies", "UBLSCA", "LSC"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["sweep", "--n-max", "9"]), 3);
    assert_eq!(code(&["sweep", "--n-max", "1", "--grid", ""]), 2);
    assert_eq!(code(&["check", "models/step.toml", "--point", "0", "--condition", "UBLSCA"]), 3);
}

#[test]
fn errors_name_the_offending_file() {
    let err = stderr(&["check", "models/bad-opens.toml"]);
    assert!(err.starts_with("error: models/bad-opens.toml"), "{err}");
    assert!(err.contains("not open"), "{err}");
    let err = stderr(&["implies", "LSC", "NOPE"]);
    assert!(err.contains("NOPE"), "{err}");
}

#[test]
fn check_reports_every_point() {
    let out = stdout(&["check", "models/sierpinski.toml"]);
    assert!(out.contains("x = a"));
    assert!(out.contains("x = b"));
    let lsc: Vec<&str> = out.lines().filter(|l| l.trim_start().starts_with("LSC ")).collect();
    assert_eq!(lsc.len(), 3, "{out}");
    assert!(lsc[0].contains("holds"));
    assert!(lsc[1].contains("fails"));

    let record = "crates/core/data/records/ce-wlc-stlc.toml";
    let v = json(&["check", record, "--point", "0", "--condition", "WLC,STLC"]);
    let verdicts = v["points"][0]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert_eq!(verdicts[0]["holds"], true);
    assert_eq!(verdicts[1]["holds"], false);
    assert_eq!(v["jumps"], "(0,1)");
}

#[test]
fn implication_queries() {
    let v = json(&["implies", "LSC", "TWLC"]);
    assert_eq!(v["result"], "derivable");
    let steps = v["derivation"]["steps"].as_array().unwrap();
    assert_eq!(steps.first().unwrap()["edge"]["source"], "LSC");
    assert_eq!(steps.last().unwrap()["edge"]["target"], "TWLC");

    let out = stdout(&["closure", "SLQC", "--hyp", "N1"]);
    assert!(out.lines().nth(1).unwrap().split(' ').any(|c| c == "LQC"), "{out}");
    let out = stdout(&["closure", "SLQC"]);
    assert!(!out.lines().nth(1).unwrap().split(' ').any(|c| c == "LQC"), "{out}");
}

#[test]
fn corpus_commands() {
    let listed = stdout(&["corpus", "list", "--tier", "machine-checked"]);
    assert_eq!(listed.lines().filter(|l| l.starts_with("CE-")).count(), 9, "{listed}");
    assert_eq!(listed.lines().last(), Some("9 records"));
    assert_eq!(code(&["corpus", "verify", "CE-WLC-STLC"]), 0);
    assert_eq!(code(&["corpus", "verify", "CE-SLSC-TWLC"]), 2);
    assert_eq!(code(&["corpus", "verify", "CE-NOPE"]), 3);
    let v = json(&["corpus", "list", "--target", "UBSLSCA"]);
    assert!(v.as_array().unwrap().iter().any(|r| r["id"] == "CE-BLSCA-UBSLSCA"), "{v}");
}

#[test]
fn audit_json_matches_text() {
    let v = json(&["audit"]);
    assert_eq!(v["pairs"], 702);
    assert!(v["gaps"].as_array().unwrap().is_empty());
    assert!(stdout(&["audit"]).contains("global pairs: 702"));
}

#[test]
fn outputs_can_be_written_to_files() {
    let dot = scratch("diagram.dot");
    assert_eq!(code(&["export-dot", "--out", dot.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_to_string(&dot).unwrap(), stdout(&["export-dot"]));

    let report = scratch("sweep.txt");
    assert_eq!(code(&["sweep", "--n-max", "2", "--out", report.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("sweep n_max=2"), "{text}");
}

#[test]
fn sweep_json_is_structured() {
    let v = json(&["sweep", "--n-max", "2", "--grid", "0,1"]);
    assert_eq!(v["models"], 18);
    assert_eq!(v["grid"], serde_json::json!(["0", "1"]));
    assert!(v["pointwise"].as_array().unwrap().iter().all(|r| r["source"] != r["target"]));
}
