use std::process::{Command, Output};

use serde_json::Value;

fn markov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = markov(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&all)).unwrap();
    v["result"].clone()
}

fn csv_column(args: &[&str], column: &str) -> Vec<String> {
    let mut all = args.to_vec();
    all.extend(["--format", "csv"]);
    let text = stdout(&all);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| l.split(',').nth(i).unwrap().to_string())
        .collect()
}

#[test]
fn forest_csv_has_known_values() {
    let middles = csv_column(&["forest", "--interval", "0", "--max-den", "1000"], "x2");
    let previews = csv_column(
        &["forest", "--interval", "0", "--max-den", "1000"],
        "preview",
    );
    for (x, p) in [
        ("2/5", "0.4"),
        ("12/29", "0.4137931034"),
        ("5/13", "0.3846153846"),
    ] {
        let i = middles.iter().position(|m| m == x).unwrap();
        assert_eq!(previews[i], p);
    }
}

#[test]
fn forest_root_only() {
    assert_eq!(
        stdout(&["forest", "--interval", "0", "--max-depth", "0"])
            .lines()
            .count(),
        1
    );
}

#[test]
fn forest_translates() {
    let a = csv_column(&["forest", "--interval", "0", "--max-den", "30"], "x2");
    let b = csv_column(&["forest", "--interval", "1", "--max-den", "30"], "x2");
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let (p, q) = x.split_once('/').unwrap();
        let (p, q): (i64, i64) = (p.parse().unwrap(), q.parse().unwrap());
        assert_eq!(*y, format!("{}/{q}", p + q));
    }
}

#[test]
fn forest_parallel_matches() {
    let args = ["forest", "--max-depth", "7", "--format", "csv"];
    let mut par = args.to_vec();
    par.extend(["--jobs", "4"]);
    assert_eq!(stdout(&args), stdout(&par));
}

#[test]
fn classify_examples() {
    let c = json(&["classify", "7/12"]);
    assert_eq!(c["tag"], "companion");
    assert_eq!(c["constant"], "1/3");
    assert_eq!(c["witness"], "1/2:R:2");

    let c = json(&["classify", "3/7", "--oracle"]);
    assert_eq!(c["tag"], "neither");
    assert_eq!(c["constant"], "2/7");
    assert_eq!(c["witness"], "1/2");
    assert_eq!(c["oracle"]["agrees"], true);

    let c = json(&["classify", "70/169"]);
    assert_eq!(c["tag"], "markov_fraction");
    assert_eq!(c["constant"], "58/169");
}

#[test]
fn companions_examples() {
    let c = json(&["companions", "0/1", "--count", "5", "--side", "R"]);
    let vals: Vec<&str> = c["companions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(vals, ["1/3", "3/8", "8/21", "21/55", "55/144"]);
    assert_eq!(c["limits"][0]["limit"], "(3-1*sqrt(5))/2");

    let vals = csv_column(
        &["companions", "5/13", "--count", "2", "--side", "R"],
        "value",
    );
    assert_eq!(vals, ["196/507", "7639/19760"]);

    let c = json(&["companions", "1/2", "--count", "1", "--side", "both"]);
    let pairs: Vec<(&str, &str)> = c["companions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["side"].as_str().unwrap(), r["value"].as_str().unwrap()))
        .collect();
    assert_eq!(pairs, [("L", "5/12"), ("R", "7/12")]);
}

#[test]
fn wrappers() {
    assert_eq!(json(&["mu", "3/1"])["value"], "8/13");
    assert_eq!(json(&["mu", "inf"])["value"], "1/1");
    let s = json(&["snake", "2", "1", "--k", "2", "--side", "R"]);
    assert_eq!(s["terminal"], "31/75");
    assert!(!s["triangles"].as_array().unwrap().is_empty());
    let m = json(&["mcshane", "--depth", "0", "--bits", "64"]);
    assert!(m["lo"]["preview"].as_str().unwrap().starts_with("2.8065"));
    assert!(m["hi"]["preview"].as_str().unwrap().starts_with("2.8065"));
    let a = json(&["audit", "--max-den", "1000"]);
    assert_eq!(a["denominators"].as_array().unwrap().len(), 13);
    assert!(a["duplicates"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| markov(args).status.code();
    assert_eq!(code(&["classify", "abc"]), Some(2));
    assert_eq!(code(&["classify", "1/-2"]), Some(2));
    assert_eq!(
        code(&["forest", "--max-den", "3", "--max-depth", "2"]),
        Some(2)
    );
    assert_eq!(code(&["forest"]), Some(2));
    assert_eq!(code(&["snake", "2", "1", "--k", "2"]), Some(2));
    assert_eq!(code(&["companions", "1/3"]), Some(3));
    assert_eq!(code(&["mu", "-1/2"]), Some(3));
    assert_eq!(code(&["snake", "2", "2"]), Some(3));
    assert_eq!(code(&["mcshane", "--bits", "8"]), Some(3));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["forest", "--max-depth", "6", "--format", "json"],
        vec!["companions", "2/5", "--side", "both", "--format", "csv"],
        vec!["snake", "5", "3", "--format", "json"],
    ] {
        assert_eq!(stdout(&args), stdout(&args));
    }
}
