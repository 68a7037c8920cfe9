use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bellmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellmono"))
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bellmono(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, stdout, _) = run(&all);
    (code, serde_json::from_str(&stdout).unwrap())
}

fn stderr_error(stderr: &str) -> Value {
    let v: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert!(v["error"].is_string(), "{stderr}");
    v
}

const TRIVIAL: &str = r#"{
  "scenario": {"alice_settings": 1, "bob_settings": 1, "outcomes": 2},
  "provenance": "general",
  "coefficients": [[[["1/1", "0/1"], ["0/1", "0/1"]]]]
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn catalog_lists_four_families() {
    let (code, stdout, _) = run(&["catalog"]);
    assert_eq!(code, 0);
    for family in ["chsh", "chained-N", "claim3", "identity-unique-dX-mAxmB"] {
        assert!(stdout.contains(family), "{family} missing");
    }
    let (code, v) = json(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!(v["families"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two() {
    let (code, stdout, stderr) = run(&["catalog", "--bogus"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert_eq!(stderr_error(&stderr)["error"], "usage");
    assert_eq!(run(&["monogamy", "chsh", "--relation", "thm9"]).0, 2);
    assert_eq!(run(&["bound"]).0, 2);
}

#[test]
fn bound_examples() {
    let (code, v) = json(&["bound", "chsh", "--both"]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["local"].as_str(), v["ns"].as_str()),
        (Some("3/4"), Some("1/1"))
    );
    let (_, v) = json(&["bound", "claim3", "--both"]);
    assert_eq!(
        (v["local"].as_str(), v["ns"].as_str()),
        (Some("8/1"), Some("9/1"))
    );
    let (_, v) = json(&["bound", "chained-3", "--local"]);
    assert_eq!(v["local"], "5/6");
    assert!(v.get("ns").is_none());
    let (code, stdout, _) = run(&["bound", "chsh"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("local: 3/4") && stdout.contains("ns: 1/1"));
}

#[test]
fn bound_writes_a_reparseable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let (code, _, _) = run(&[
        "bound",
        "chained-3",
        "--ns",
        "--witness-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let w = bellmono_core::document::box_from_json(&text).unwrap();
    assert!(w.is_no_signaling());
    assert_eq!(bellmono_core::document::box_to_json(&w), text);
    let e = bellmono_core::bell::chained_uniform(3).unwrap();
    assert_eq!(e.evaluate(&w).unwrap(), bellmono_core::rational::int(1));
}

#[test]
fn expression_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let e = bellmono_core::bell::claim3_expression();
    let file = write(
        dir.path(),
        "claim3.json",
        &bellmono_core::document::expression_to_json(&e),
    );
    let (code, v) = json(&["bound", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["local"].as_str(), v["ns"].as_str()),
        (Some("8/1"), Some("9/1"))
    );
}

#[test]
fn bad_documents_exit_two_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let (code, stdout, stderr) = run(&["bound", "--file", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    stderr_error(&stderr);

    let broken = write(
        dir.path(),
        "broken.json",
        &TRIVIAL.replace("\"1/1\"", "\"one\""),
    );
    let (code, _, stderr) = run(&["contradiction", "--file", &broken]);
    assert_eq!(code, 2);
    stderr_error(&stderr);

    let (code, _, stderr) = run(&["bound", "chained-x"]);
    assert_eq!(code, 2);
    assert_eq!(stderr_error(&stderr)["error"], "unknown_name");
}

#[test]
fn contradiction_examples() {
    let (code, v) = json(&["contradiction", "chained-4"]);
    assert_eq!(code, 0);
    assert_eq!(v["number"], 1);
    let (_, v) = json(&["contradiction", "claim3", "--strong"]);
    assert_eq!(v["number"], 1);
    assert_eq!(v["witness_set"], serde_json::json!(["III"]));

    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "trivial.json", TRIVIAL);
    let (code, v) = json(&["contradiction", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(v["number"], 0);
    assert_eq!(v["witness_set"], serde_json::json!([]));
}

#[test]
fn monogamy_examples() {
    let (code, v) = json(&["monogamy", "chained-3", "--relation", "eq4"]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["lhs"].as_str(), v["rhs"].as_str()),
        (Some("5/3"), Some("5/3"))
    );
    assert_eq!(v["holds"], true);

    let (code, stdout, _) = run(&["monogamy", "chsh", "--relation", "thm1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("3/2"));

    let (code, v) = json(&["monogamy", "claim3", "--relation", "eq4", "--force"]);
    assert_eq!(code, 1);
    assert_eq!(
        (v["lhs"].as_str(), v["rhs"].as_str()),
        (Some("18/1"), Some("16/1"))
    );
    assert_eq!(v["holds"], false);
    assert_eq!(v["in_proven_scope"], false);

    let (code, stdout, _) = run(&["monogamy", "claim3", "--relation", "eq4", "--force"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("outside proven scope"));
}

#[test]
fn monogamy_scope_and_cap() {
    let (code, stdout, stderr) = run(&["monogamy", "claim3", "--relation", "eq4"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert_eq!(stderr_error(&stderr)["error"], "outside_proven_scope");

    let out = Command::new(env!("CARGO_BIN_EXE_bellmono"))
        .args(["monogamy", "chsh", "--relation", "thm1"])
        .env("BELLMONO_LP_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_error(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(
        (err["variables"].as_u64(), err["cap"].as_u64()),
        (Some(64), Some(10))
    );
}

#[test]
fn strict_relation_on_unique_games() {
    let (code, stdout, stderr) =
        run(&["monogamy", "identity-unique-d3-m2x2", "--relation", "obs1"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert_eq!(stderr_error(&stderr)["error"], "precondition");

    let (id, shift) = (vec![0, 1, 2], vec![1, 2, 0]);
    let game = bellmono_core::bell::unique_game(
        2,
        2,
        3,
        bellmono_core::bell::uniform_weights(2, 2),
        vec![vec![id.clone(), id.clone()], vec![id, shift]],
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "shift.json",
        &bellmono_core::document::expression_to_json(&game),
    );
    let (code, v) = json(&["monogamy", "--file", &file, "--relation", "obs1"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], true);
    assert_eq!(v["rhs"], "2/1");
}

#[test]
fn verify_claim3_reports_and_emits_the_box() {
    let (code, stdout, _) = run(&["verify-claim3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 6);
    assert!(!stdout.contains("FAIL"));

    let (code, v) = json(&["verify-claim3"]);
    assert_eq!(code, 0);
    let assertions = v["assertions"].as_array().unwrap();
    assert_eq!(assertions.len(), 6);
    assert!(assertions.iter().all(|a| a["passed"] == true));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("box.json");
    let (code, _, _) = run(&["verify-claim3", "--emit-box", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["table"].as_object().unwrap().len(), 360);
    let b = bellmono_core::document::box_from_json(&text).unwrap();
    assert_eq!(b.table().len(), 1728);
    assert_eq!(b, bellmono_core::monogamy::claim3_box());
}
