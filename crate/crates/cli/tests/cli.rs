use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn canon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canon"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("canon runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn generate_left_lexical_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = canon(dir.path(), &["generate", "--family", "left_lexical", "--n1", "4", "--n2", "4", "--out", "g.json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(v["colors"][2], serde_json::json!([2, 2, 2, 2]));
    for (l, r) in [("0,1", "0,1"), ("1,3", "2,3"), ("0,2", "1,3")] {
        let out = canon(dir.path(), &["classify", "--input", "g.json", "--left", l, "--right", r]);
        assert_eq!(code(&out), 0);
        assert_eq!(json(&out)["patterns"], serde_json::json!(["left"]));
    }
}

#[test]
fn generate_is_reproducible_and_needs_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--family", "uniform_random", "--q", "3", "--seed", "7", "--n1", "5", "--n2", "5"];
    let a = canon(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, canon(dir.path(), &args).stdout);
    let unseeded = canon(dir.path(), &["generate", "--family", "uniform_random", "--q", "3", "--n1", "5"]);
    assert_eq!(code(&unseeded), 2);
}

#[test]
fn usage_and_size_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&canon(dir.path(), &["generate", "--family", "block", "--r", "9", "--n1", "4"])), 2);
    assert_eq!(code(&canon(dir.path(), &["generate", "--family", "nope", "--n1", "4"])), 2);
    assert_eq!(code(&canon(dir.path(), &["bounds", "--m-range", "3..2"])), 2);
    assert_eq!(code(&canon(dir.path(), &["find", "--m", "2"])), 2);
    assert_eq!(code(&canon(dir.path(), &["frobnicate"])), 2);
    let big = canon(dir.path(), &["generate", "--family", "rainbow", "--n1", "20000", "--n2", "20000"]);
    assert_eq!(code(&big), 3);
    let capped = Command::new(env!("CARGO_BIN_EXE_canon"))
        .env("CANON_WORK_CAP", "10")
        .args(["find", "--family", "rainbow", "--n1", "6", "--m", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&capped), 3);
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "1,2\n3\n").unwrap();
    let out = canon(dir.path(), &["classify", "--input", "bad.csv"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn find_oracle_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = canon(dir.path(), &["find", "--family", "monochromatic", "--n1", "3", "--m", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out), serde_json::json!({"pattern": "monochromatic", "left": [0, 1], "right": [0, 1]}));
    std::fs::write(dir.path().join("cert.json"), r#"{"n1":2,"n2":2,"colors":[[1,2],[2,1]]}"#).unwrap();
    let out = canon(dir.path(), &["find", "--input", "cert.json", "--m", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out), Value::Null);
    let out = canon(dir.path(), &["find", "--family", "left_lexical", "--n1", "4", "--m", "2", "--allow", "rainbow"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn find_pipeline_examples() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--family", "per_vertex_rainbow", "--n1", "50", "--n2", "300", "--seed", "5", "--m", "2"];
    let mut args = vec!["find", "--engine", "pipeline", "--palette", "disjoint"];
    args.extend(base);
    let out = canon(dir.path(), &args);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["branch"], "case2");
    assert_eq!(v["witness"]["pattern"], "rainbow");
    let mut args = vec!["pipeline", "--palette", "shared"];
    args.extend(base);
    let v = json(&canon(dir.path(), &args));
    assert_eq!(v["branch"], "case1");
    assert_eq!(v["witness"]["pattern"], "left");
    // The pipeline is randomized: no seed, no run.
    let out = canon(dir.path(), &["pipeline", "--family", "right_lexical", "--n1", "10", "--m", "2"]);
    assert_eq!(code(&out), 2);
    // Strict mode on a small host is a negative, typed failure.
    let out = canon(dir.path(), &["pipeline", "--mode", "strict", "--family", "right_lexical", "--n1", "10", "--seed", "1", "--m", "2"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["failure_reason"], "precondition_unmet");
}

#[test]
fn bounds_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = canon(dir.path(), &["bounds", "--m-range", "2..2", "--checks", "probability"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["checks"][0]["margin"], "4255/12800");
    let out = canon(dir.path(), &["bounds", "--m-range", "2..12"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    for line in &lines {
        for c in line["checks"].as_array().unwrap() {
            assert_eq!(c["status"], "holds", "{c}");
        }
        assert!(line["exponent_ratio"].is_string());
    }
}

#[test]
fn er1_examples() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&canon(dir.path(), &["er1", "--m", "3"]));
    assert_eq!(v["lower_certified"], true);
    assert_eq!(v["upper_certified"], true);
    assert!(v["method"].as_str().unwrap().starts_with("set-partition exhaustion (52 partitions) + profile bound"));
    let v = json(&canon(dir.path(), &["er1", "--m", "10"]));
    assert!(v["method"].as_str().unwrap().starts_with("profile bound"));
    assert!(v.get("partitions_checked").is_none());
}

#[test]
fn montecarlo_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = canon(dir.path(), &["montecarlo", "--n", "4", "--m", "2", "--q", "3", "--trials", "2000", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["exact"]["monochromatic"], "4/3");
    assert_eq!(v["exact"]["left"], "8/3");
    assert!((v["empirical"]["monochromatic"].as_f64().unwrap() - 4.0 / 3.0).abs() < 0.1);
    let out = canon(dir.path(), &["montecarlo", "--n", "2", "--m", "2", "--q", "3", "--trials", "10", "--seed", "3", "--search-attempts", "20"]);
    assert_eq!(code(&out), 0);
    let spec = &json(&out)["zero_copy"]["certificate"];
    assert_eq!(spec["family"], "uniform_random");
    let missing = canon(dir.path(), &["montecarlo", "--n", "4", "--m", "2", "--q", "3", "--trials", "10"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn spec_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.json"),
        r#"{"family":"planted","n1":6,"n2":6,"params":{"base":{"family":"uniform_random","n1":6,"n2":6,"seed":3,"params":{"q":50}},"pattern":"rainbow","m":2,"left":[1,4],"right":[2,5]}}"#,
    )
    .unwrap();
    let out = canon(dir.path(), &["classify", "--spec", "s.json", "--left", "1,4", "--right", "2,5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["patterns"], serde_json::json!(["rainbow"]));
    let out = canon(dir.path(), &["generate", "--spec", "s.json", "--out", "p.csv"]);
    assert_eq!(code(&out), 0);
    let out = canon(dir.path(), &["classify", "--input", "p.csv", "--left", "1,4", "--right", "2,5"]);
    assert_eq!(json(&out)["patterns"], serde_json::json!(["rainbow"]));
}
