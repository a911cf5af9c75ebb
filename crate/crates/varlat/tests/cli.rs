use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn varlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlat")).args(args).output().unwrap()
}

/// Runs with `--json` and returns the exit code and parsed result.
fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = varlat(&all);
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), value)
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn classify_n5_marks_b() {
    let (code, v) = json(&["lattice", "classify", fixture("lattices/n5.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let rows = v["payload"]["classification"].as_array().unwrap();
    let b = rows.iter().find(|r| r["element"] == "b").unwrap();
    assert_eq!(b["cancellable"], false);
}

#[test]
fn classify_two_chain_sets_every_flag() {
    let (code, v) = json(&["lattice", "classify", fixture("lattices/chain2.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    for row in v["payload"]["classification"].as_array().unwrap() {
        for flag in ["neutral", "distributive", "standard", "modular", "cancellable"] {
            assert_eq!(row[flag], true);
        }
    }
}

#[test]
fn classify_exit_codes() {
    let (code, v) = json(&["lattice", "classify", fixture("lattices/malformed_covers.json").to_str().unwrap()]);
    assert_eq!((code, v["status"].as_str()), (2, Some("error")));
    let (code, v) = json(&["lattice", "classify", fixture("lattices/no_join.json").to_str().unwrap()]);
    assert_eq!((code, v["status"].as_str()), (1, Some("violation")));
    let (code, _) = json(&["lattice", "classify", "/nonexistent/lattice.json"]);
    assert_eq!(code, 2);
    assert_eq!(varlat(&["lattice", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn classify_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("m3.dot");
    let out = varlat(&[
        "lattice",
        "classify",
        fixture("lattices/m3.json").to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.contains("rankdir=BT"));
    assert_eq!(text.matches(" -> ").count(), 6);
}

#[test]
fn subgroup_commands() {
    let (code, v) = json(&["subgroups", "3", "figure"]);
    assert_eq!(code, 0);
    assert!(v["payload"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let (code, v) = json(&["subgroups", "4", "classify"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["cancellable"], serde_json::json!(["T", "S_4"]));

    let (code, v) = json(&["subgroups", "3", "build"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["nodes"], 6);
    assert_eq!(v["payload"]["lattice"]["covers"].as_array().unwrap().len(), 8);

    let (code, v) = json(&["subgroups", "6", "build"]);
    assert_eq!(code, 2);
    assert!(v["payload"]["error"].as_str().unwrap().contains("6"));

    let (code, _) = json(&["subgroups", "5", "figure"]);
    assert_eq!(code, 2);
}

#[test]
fn variety_commands() {
    let plain = |args: &[&str]| {
        let out = varlat(args);
        assert!(out.status.success(), "{args:?}");
        String::from_utf8(out.stdout).unwrap().trim().to_string()
    };
    assert_eq!(plain(&["variety", "check", "X:3,5", "x1 x2 x3 = x2 x1 x3"]), "true");
    assert_eq!(plain(&["variety", "check", "X:4,5", "x1 x2 x3 = x2 x1 x3"]), "false");
    assert_eq!(plain(&["variety", "check", "Y:2,inf", "x^2 = 0"]), "true");
    assert_eq!(plain(&["variety", "permgroup", "D:3:(123)", "3"]), "C_123");
    assert_eq!(plain(&["variety", "join", "X:2,3", "Y:3,4"]), "X:3,4");
    assert_eq!(plain(&["variety", "meet", "X:2,3", "Y:3,4"]), "Y:2,3");

    let (code, v) = json(&["variety", "free", "Y:2,3", "2"]);
    assert_eq!(code, 0);
    let size = v["payload"]["size"].as_u64().unwrap() as usize;
    assert_eq!(v["payload"]["table"].as_array().unwrap().len(), size);

    let (code, _) = json(&["variety", "check", "Q:1", "x = y"]);
    assert_eq!(code, 2);
    let (code, _) = json(&["variety", "join", "D:3:(12)", "X:2,3"]);
    assert_eq!(code, 2);
}

#[test]
fn derive_prints_a_trace() {
    let (code, v) = json(&["derive", "--basis", "x1 x2 = 0", "x^2 = 0"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["proved"], true);
    assert!(!v["payload"]["trace"]["chains"].as_array().unwrap().is_empty());

    let (code, v) = json(&["derive", "--basis", "x^2 = 0", "x y = 0"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["proved"], false);
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("fig1.dot");
    let (code, _) = json(&["verify", "figure1", "--cap", "5", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.contains("\"X_{2,2}=Y_{2,2}\" -> \"Y_{2,3}\";"));

    for args in [
        &["verify", "subgroup-witness", "--n", "3"][..],
        &["verify", "subgroup-witness", "--n", "4"],
        &["verify", "u-theory"],
        &["verify", "incomparability", "--samples", "500"],
        &["verify", "oracles", "--max-len", "3", "--letters", "2"],
    ] {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}: {v}");
    }
    let (code, _) = json(&["verify", "subgroup-witness", "--n", "5"]);
    assert_eq!(code, 2);
    let (code, _) = json(&["verify", "figure1", "--cap", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn payloads_are_deterministic() {
    for args in [
        &["subgroups", "4", "build"][..],
        &["verify", "incomparability", "--samples", "300", "--seed", "9"],
        &["variety", "free", "D:3:(12)", "2"],
    ] {
        let (_, a) = json(args);
        let (_, b) = json(args);
        assert_eq!(without_elapsed(a), without_elapsed(b), "{args:?}");
    }
}
