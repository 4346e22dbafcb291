//! End-to-end runs of the `girylab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn girylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_girylab"))
        .args(args)
        .env_remove("GIRYLAB_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const TWO_STATES: &str = r#"{"carrier":["0","1"],"generators":[["0"]]}"#;

fn absorbing_chain(dir: &Path) -> (String, String) {
    let kernel = format!(r#"{{"dom":{TWO_STATES},"cod":{TWO_STATES},"rows":{{"0":{{"0":"1/2","1":"1/2"}},"1":{{"0":"0","1":"1"}}}}}}"#);
    let init = format!(r#"{{"space":{TWO_STATES},"weights":{{"0":"1","1":"0"}}}}"#);
    (write(dir, "k.json", &kernel), write(dir, "pi.json", &init))
}

#[test]
fn markov_absorbing_chain_two_steps() {
    let dir = tempfile::tempdir().unwrap();
    let (k, pi) = absorbing_chain(dir.path());
    let out = girylab(&["markov", "--kernel", &k, "--init", &pi, "--steps", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let last: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(last, serde_json::json!({"0": "1/4", "1": "3/4"}));
    assert!(!text.contains('.'), "no floating point in output");
}

#[test]
fn markov_trace_includes_initial_step() {
    let dir = tempfile::tempdir().unwrap();
    let (k, pi) = absorbing_chain(dir.path());
    let out = girylab(&["markov", "--kernel", &k, "--init", &pi, "--steps", "3", "--trace"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["step"], 0);
    assert_eq!(lines[3]["weights"], serde_json::json!({"0": "1/8", "1": "7/8"}));
}

#[test]
fn malformed_kernel_names_violated_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let bad = format!(r#"{{"dom":{TWO_STATES},"cod":{TWO_STATES},"rows":{{"0":{{"0":"1/2","1":"1/3"}},"1":{{"1":"1"}}}}}}"#);
    let k = write(dir.path(), "bad.json", &bad);
    let (_, pi) = absorbing_chain(dir.path());
    let out = girylab(&["markov", "--kernel", &k, "--init", &pi, "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 0"), "{err}");
}

#[test]
fn float_weights_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (k, _) = absorbing_chain(dir.path());
    let pi = write(dir.path(), "pi.json", &format!(r#"{{"space":{TWO_STATES},"weights":{{"0":"0.5","1":"0.5"}}}}"#));
    let out = girylab(&["markov", "--kernel", &k, "--init", &pi, "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_counterexample_reports_refutation() {
    let out = girylab(&["verify", "counterexample", "--trials", "100"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    let props = report["properties"].as_array().unwrap();
    let refutation = props.iter().find(|p| p["name"] == "counterexample/limit-fails-respects-limits").unwrap();
    assert_eq!(refutation["witness"]["stuck_at"], "1/1");
    assert!(props.iter().all(|p| p["anchor"].as_str().is_some_and(|a| !a.is_empty())));
}

#[test]
fn verify_all_is_deterministic() {
    let a = girylab(&["verify", "--seed", "7", "--trials", "40", "all"]);
    let b = girylab(&["verify", "--seed", "7", "--trials", "40", "all"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "girylab.conf", "seed = 11\ntrials = 30\n");
    let from_file = girylab(&["verify", "--config", &cfg, "counterexample"]);
    let report: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 11);
    assert_eq!(report["config"]["trials"], 30);
    let flagged = girylab(&["verify", "--config", &cfg, "--seed", "12", "counterexample"]);
    let report: serde_json::Value = serde_json::from_slice(&flagged.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 12);
    let env = Command::new(env!("CARGO_BIN_EXE_girylab"))
        .args(["verify", "--trials", "10", "counterexample"])
        .env("GIRYLAB_SEED", "99")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 99);
}

#[test]
fn naturality_stream_refutes_max_and_accepts_extensional() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "s.json", r#"{"carrier":["a","b","c"],"generators":[["a"],["b"]]}"#);
    let max = write(dir.path(), "max.json", r#"{"kind":"max"}"#);
    let out = girylab(&["verify", "naturality", "--space", &space, "--functional", &max, "--trials", "50", "--seed", "3", "--max-arity", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let verdicts: Vec<serde_json::Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(verdicts.len(), 4);
    let fail = verdicts.iter().find(|v| v["result"] == "fail").expect("max is refuted");
    assert!(fail["witness"]["h"].is_object() && fail["witness"]["f"].is_object());
    assert!(fail["witness"]["shrunk"].is_object());

    let ext = write(dir.path(), "phi.json", r#"{"kind":"extensional","coefficients":["1/4","1/4","1/2"]}"#);
    let out = girylab(&["verify", "naturality", "--space", &space, "--functional", &ext, "--trials", "50", "--seed", "3", "--max-arity", "3"]);
    assert!(out.status.success());
}

#[test]
fn report_and_junit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let junit = dir.path().join("r.xml");
    let out = girylab(&["verify", "monad-laws", "--trials", "20", "--junit", junit.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&junit).unwrap().contains("<testsuite"));
    let saved = write(dir.path(), "r.json", &String::from_utf8(out.stdout).unwrap());
    let text = girylab(&["report", &saved]);
    assert!(text.status.success());
    assert!(String::from_utf8(text.stdout).unwrap().contains("PASS monad-laws/left-unit"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(girylab(&["verify", "--bogus", "all"]).status.code(), Some(2));
    assert_eq!(girylab(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(girylab(&["markov", "--steps", "1"]).status.code(), Some(2));
}
