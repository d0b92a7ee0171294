use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nacent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nacent"))
        .args(args)
        .env_remove("NACENT_MAX_ORDER")
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn summary(out: &Output) -> Value {
    json_lines(out).pop().unwrap()["summary"].clone()
}

#[test]
fn catalog_lists_specs() {
    let out = nacent(&["catalog", "--max-order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for n in 1..=10 {
        assert!(
            text.lines().any(|l| l == format!("cyclic({n})")),
            "cyclic({n})"
        );
    }
    let big = nacent(&["catalog", "--max-order", "1100"]);
    assert!(String::from_utf8(big.stdout)
        .unwrap()
        .lines()
        .any(|l| l == "heisenberg_frobenius(7,3)"));
}

#[test]
fn catalog_rejects_zero() {
    assert_eq!(
        nacent(&["catalog", "--max-order", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn analyze_fixtures() {
    let out = nacent(&[
        "analyze",
        &fixture("s3.json"),
        &fixture("z6.json"),
        &fixture("flagship.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let records = json_lines(&out);
    assert_eq!(records.len(), 3);

    let s3 = &records[0];
    assert_eq!(s3["cent_count"], 5);
    assert_eq!(s3["nacent_count"], 1);
    assert_eq!(s3["category"], "CA");

    let z6 = &records[1];
    assert_eq!(z6["category"], "Abelian");
    assert_eq!(z6["nacent_count"], 0);

    let flagship = &records[2];
    assert_eq!(flagship["category"], "TwoNacent");
    assert_eq!(flagship["case"], "C");
    assert_eq!(flagship["consequences"]["a"], true);
    assert_eq!(flagship["cent_count"], 353);
}

#[test]
fn analyze_accepts_constructor_specs() {
    let out = nacent(&["analyze", "symmetric(4)"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_lines(&out)[0];
    assert_eq!(r["group_id"], "symmetric(4)");
    assert_eq!(r["category"], "ManyNacent");
}

#[test]
fn analyze_rejects_bad_input() {
    assert_eq!(nacent(&["analyze", "cyclic(0"]).status.code(), Some(2));
    assert_eq!(nacent(&["analyze", "heisenberg(4)"]).status.code(), Some(2));
}

#[test]
fn csv_and_json_share_fields() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("r.csv");
    let inputs = [fixture("s3.json"), fixture("q8.json")];
    let json = nacent(&["analyze", &inputs[0], &inputs[1]]);
    let csv = nacent(&[
        "analyze",
        "--format",
        "csv",
        "--out",
        csv_path.to_str().unwrap(),
        &inputs[0],
        &inputs[1],
    ]);
    assert_eq!(csv.status.code(), Some(0));

    let records = json_lines(&json);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let keys: Vec<String> = records[0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(header, keys);

    for (row, record) in reader.records().zip(&records) {
        let row = row.unwrap();
        for (field, cell) in header.iter().zip(row.iter()) {
            let value = &record[field];
            let expected = match value {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(cell, expected, "{field}");
        }
    }
}

#[test]
fn verify_small_catalog() {
    let out = nacent(&["verify", "--max-order", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    assert_eq!(s["violations"], 0);
    assert!(s["groups"].as_u64().unwrap() > 64);
}

#[test]
fn verify_is_independent_of_parallelism() {
    let one = nacent(&["verify", "--max-order", "48", "--parallelism", "1"]);
    let three = nacent(&["verify", "--max-order", "48", "--parallelism", "3"]);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn verify_reaches_the_flagship() {
    let out = nacent(&["verify", "--max-order", "1100", "--parallelism", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    assert_eq!(s["violations"], 0);
    assert!(s["cases"]["C"].as_u64().unwrap() >= 1);
}

fn corrupt_copy(dir: &Path) -> PathBuf {
    let text = fs::read_to_string(fixture("s3.json")).unwrap();
    let bad = text.replacen("[1, 0, 3, 2, 5, 4]", "[1, 0, 3, 2, 5, 5]", 1);
    assert_ne!(bad, text);
    let path = dir.join("s3_bad.json");
    fs::write(&path, bad).unwrap();
    path
}

#[test]
fn verify_with_corrupted_corpus_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("z2.json"), dir.path().join("z2.json")).unwrap();
    corrupt_copy(dir.path());
    let out = nacent(&[
        "verify",
        "--max-order",
        "8",
        "--corpus",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("latin-square"));
}

#[test]
fn verify_with_corpus_dir_includes_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("q8.json"), dir.path().join("q8.json")).unwrap();
    let out = nacent(&[
        "verify",
        "--max-order",
        "4",
        "--corpus",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_lines(&out).iter().any(|r| r["group_id"]
        .as_str()
        .is_some_and(|id| id.contains("q8.json#"))));
}

#[test]
fn order_guard_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nacent"))
        .args(["verify", "--max-order", "64"])
        .env("NACENT_MAX_ORDER", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
