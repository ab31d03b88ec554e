use std::process::{Command, Output};

use serde_json::Value;

fn qkflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkflag")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn build_counts_degrees() {
    let out = qkflag(&["build", "--shape", "1:2", "--variant", "x-small", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], "qkflag/1");
    assert_eq!(doc["coeffs"].as_array().unwrap().len(), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 degrees"));

    let out = qkflag(&["build", "--shape", "1,2:3", "--variant", "tw-y", "--bound", "1"]);
    assert_eq!(json(&out)["coeffs"].as_array().unwrap().len(), 4);
}

#[test]
fn build_level_carries_level_factor() {
    let out =
        qkflag(&["build", "--shape", "1:2", "--variant", "level", "--level-i", "1", "--level-l", "1", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    for c in doc["coeffs"].as_array().unwrap() {
        let d = c["degree"][0][0].as_i64().unwrap();
        let lead = &c["terms"][0]["lead"];
        // P^d q^{d(d-1)/2}
        assert_eq!(lead["P_1_1"].as_i64().unwrap_or(0), d);
        assert_eq!(lead["q"].as_i64().unwrap_or(0), d * (d - 1) / 2);
    }
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "recursion", "--shape", "1:2", "--m", "1", "--bound", "3", "--seed", "7"][..],
        &["verify", "degree-gap", "--shape", "2:4", "--bound", "3"][..],
        &["verify", "pairing", "--shape", "2:4", "--seed", "1"][..],
        &["verify", "descent", "--shape", "1:2", "--bound", "2"][..],
    ] {
        let out = qkflag(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn vanishing_reports_exact_zero() {
    let out = qkflag(&["verify", "vanishing", "--shape", "1,2;3", "--m", "1", "--bound", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let entries = doc["detail"]["vanishing"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries.iter().all(|e| e["at_y1"] == "0"));
}

#[test]
fn failing_check_exits_one() {
    let out = qkflag(&["verify", "level-duality", "--shape", "2:3", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qkflag(&["verify", "recursion", "--shape", "3:2"]).status.code(), Some(2));
    assert_eq!(qkflag(&["verify", "nothing", "--shape", "1:2"]).status.code(), Some(2));
    assert_eq!(qkflag(&["build", "--shape", "1:2", "--variant", "level"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qkflag"))
        .args(["list", "--shape", "1:2"])
        .env("QKFLAG_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn residue_queries() {
    let out = qkflag(&["residue", "--shape", "1:2", "--point", "0", "--pole", "1,2,1", "--m", "1", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].clone();
    assert_eq!(rows[1]["value"], "-1");

    let out = qkflag(&["residue", "--shape", "1:2", "--lambda", "L_2_2^3", "--bound", "1"]);
    assert!(json(&out)["rows"].as_array().unwrap().iter().all(|r| r["value"] == "0"));

    let out = qkflag(&["residue", "--shape", "1:2", "--pole", "1,2,1", "--m", "2", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ROOT_NOT_RATIONAL"));
    let out = qkflag(&["residue", "--shape", "1:2", "--pole", "1,2,1", "--m", "2", "--bound", "2", "--power-spec"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn list_and_csv() {
    let out = qkflag(&["list", "--shape", "1,2:3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("item,value,pass\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("x-point")).count(), 6);
    assert_eq!(text.lines().filter(|l| l.starts_with("y-point")).count(), 12);
}

#[test]
fn thread_count_does_not_change_reports() {
    let run = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_qkflag"))
            .args(["verify", "recursion", "--shape", "1,2:3", "--bound", "2", "--seed", "3"])
            .env("QKFLAG_THREADS", n)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
