use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hallgebra"))
}

fn quiver_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hallgebra-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn a1() -> PathBuf {
    quiver_file("a1.json", r#"{"vertices":[{"id":"1","d":1}],"arrows":[]}"#)
}

fn a2() -> PathBuf {
    quiver_file(
        "a2.json",
        r#"{"vertices":[{"id":"1","d":1},{"id":"2","d":1}],"arrows":[{"src":"1","tgt":"2","src_val":1,"dst_val":1}]}"#,
    )
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn cartan_pm_of_a1() {
    let o = run(&["cartan", "--pm", "--matrix", "[2]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("[[2,-2],[-2,2]]"), "{v}");
}

#[test]
fn hall_number_of_two_simples() {
    let q = a1();
    let o = run(&["hallnum", "--quiver", q.to_str().unwrap(), "--q", "2", "--gamma", "0102", "--alpha", "0101", "--beta", "0101"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hall_number"], 3);
}

#[test]
fn modules_of_pm_a1() {
    let q = a1();
    let o = run(&["modules", "--quiver", q.to_str().unwrap(), "--pm", "--q", "2", "--dim", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn verify_reports_every_relation() {
    let q = a2();
    let o = run(&["verify", "--quiver", q.to_str().unwrap(), "--pm", "--q", "2", "--relations", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    for rel in ["1+", "2+", "1-", "2-", "1pm", "2pm", "3pm"] {
        assert!(lines.iter().any(|l| l["relation"] == rel), "missing {rel}");
    }
    assert!(lines.iter().all(|l| l["status"] != "violated"));
    assert!(lines.iter().all(|l| l["millis"] == 0));
}

#[test]
fn embedding_lines_cover_both_signs() {
    let q = a1();
    let o = run(&["verify", "--quiver", q.to_str().unwrap(), "--pm", "--q", "3", "--embedding", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert!(lines.iter().any(|l| l["instance"]["sign"] == "+"));
    assert!(lines.iter().any(|l| l["instance"]["sign"] == "-"));
    assert!(lines.iter().all(|l| l["status"] == "ok"));
}

#[test]
fn lemma_checks_pass() {
    let o = run(&["lemmas", "--which", "41", "--n", "1..3", "--d", "1..2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l["status"] == "ok" && l["trace_len"].as_u64().unwrap() > 0));
}

#[test]
fn reduce_commutator() {
    let o = run(&["reduce", "--expr", "(1) E+ E- ; (-1) E- E+"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["residue_terms"], 2);
}

#[test]
fn input_errors_exit_two() {
    let q = a1();
    assert_eq!(run(&["modules", "--quiver", q.to_str().unwrap(), "--q", "6", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(run(&["modules", "--quiver", "/nonexistent/q.json", "--q", "2", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--quiver", q.to_str().unwrap(), "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let q = a1();
    let o = run(&["modules", "--quiver", q.to_str().unwrap(), "--pm", "--q", "3", "--dim", "2,2", "--max-points", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_is_deterministic() {
    let q = a2();
    let args = ["verify", "--quiver", q.to_str().unwrap(), "--pm", "--q", "2", "--relations", "all"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
