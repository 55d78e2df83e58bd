use std::process::{Command, Output};

use serde_json::Value;

fn prc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_report_schema() {
    let out = prc(&["verify", "--scenario", "invariants", "--p", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["scenario"], "invariants");
    assert_eq!(v["params"]["p"], 3);
    assert_eq!(v["params"]["seed"], 7);
    assert!(v["runtime_ms"].is_u64());
    let checks = v["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["name"].is_string());
        assert!(c["witness"].is_string());
        assert!(["pass", "fail", "unknown"].contains(&c["status"].as_str().unwrap()));
    }
}

#[test]
fn verify_all_returns_an_array() {
    let out = prc(&["verify", "--scenario", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["invariants", "reduction", "tensor", "chain", "closure", "roundtrips"]);
}

#[test]
fn text_format_has_a_header_line() {
    let out = prc(&["verify", "--scenario", "chain", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("chain (p=2, mu=1"));
    assert!(text.contains("PASS"));
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(prc(&["verify", "--scenario", "nope"]).status.code(), Some(3));
    assert_eq!(prc(&["verify", "--scenario", "tensor", "--p", "4"]).status.code(), Some(3));
    assert_eq!(prc(&["verify", "--scenario", "reduction", "--nu", "2"]).status.code(), Some(3));
    assert_eq!(prc(&["verify"]).status.code(), Some(3));
    assert_eq!(prc(&["height", "--rule", "{not json"]).status.code(), Some(3));
    assert_eq!(prc(&["--help"]).status.code(), Some(0));
}

#[test]
fn height_command() {
    let out = prc(&["height", "--rule", r#"{"rule":"nagata","s":0}"#, "--mu", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"]["kind"], "finite");
    assert_eq!(v["status"]["value"], 2);
    assert_eq!(v["evidence"].as_array().unwrap().len(), 3);

    let twisted = r#"{"rule":"frob","nu":1,"inner":{"rule":"nagata","s":3}}"#;
    let v = json(&prc(&["height", "--rule", twisted, "--mu", "2"]));
    assert_eq!(v["status"]["value"], 1);
}

#[test]
fn invariants_command() {
    let tower = r#"{"p":3,"mu":1,"gens":[{"nu":1,
        "a":{"rule":"frob","nu":1,"inner":{"rule":"nagata","s":0}},
        "root":{"rule":"nagata","s":0}}]}"#;
    let out = prc(&["invariants", "--tower", tower]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"e": 3, "f": 1, "n": 3}));

    // z is not in R_1, so it cannot be the relation of an adjunction
    let bad = r#"{"p":2,"mu":1,"gens":[{"nu":1,"a":{"rule":"nagata","s":0}}]}"#;
    assert_eq!(prc(&["invariants", "--tower", bad]).status.code(), Some(3));
}
