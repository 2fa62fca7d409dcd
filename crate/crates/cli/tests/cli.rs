//! End-to-end tests of the `splithue` binary: exit-code contract,
//! report shape, and byte-identical determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_splithue"))
}

fn family(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../families")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_passing_family_exits_zero() {
    let out = run(&["check", "--family", &family("t1.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "check");
    assert_eq!(v["data"]["pass"], true);
    assert!(v["findings"].as_array().unwrap().is_empty());
}

#[test]
fn check_failing_family_exits_two_with_findings() {
    let out = run(&["check", "--family", &family("t1-prime.toml")]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["data"]["pass"], false);
    let findings = v["findings"].as_array().unwrap();
    assert!(findings
        .iter()
        .any(|f| f["code"] == "condition-failed"));
}

#[test]
fn check_missing_file_exits_one() {
    let out = run(&["check", "--family", "/nonexistent/family.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    // missing required --family
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(1));
    // malformed range
    let out = run(&[
        "solve",
        "--family",
        &family("t1.toml"),
        "--n",
        "0..2",
        "--ymax",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // unknown subcommand
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_trivial_only_exits_zero() {
    let out = run(&[
        "solve",
        "--family",
        &family("t1.toml"),
        "--n",
        "1..2",
        "--ymax",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["kind"], "solve");
    // 2(d+1) = 10 trivial records per n
    for r in v["data"]["per_n"].as_array().unwrap() {
        assert_eq!(r["solutions"].as_array().unwrap().len(), 10);
        assert!(r["extras"].as_array().unwrap().is_empty());
    }
}

#[test]
fn solve_fib_lucas_reports_extras_and_exits_two() {
    let out = run(&[
        "solve",
        "--family",
        &family("fib-lucas.toml"),
        "--n",
        "1..3",
        "--ymax",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert!(v["findings"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["code"] == "nontrivial-solution"));
    let with_extras: Vec<u64> = v["data"]["per_n"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r["extras"].as_array().unwrap().is_empty())
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(with_extras, vec![1, 3]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("splithue-cli-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for (path, csv) in [(&a, dir.join("a.csv")), (&b, dir.join("b.csv"))] {
        let out = run(&[
            "verify",
            "det",
            "--family",
            &family("t1.toml"),
            "--n",
            "6..14",
            "--out",
            &path.to_string_lossy(),
            "--csv",
            &csv.to_string_lossy(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "verify det JSON must be byte-identical"
    );
    assert_eq!(
        std::fs::read(dir.join("a.csv")).unwrap(),
        std::fs::read(dir.join("b.csv")).unwrap()
    );
    // solve reports too
    for path in [&a, &b] {
        let out = run(&[
            "solve",
            "--family",
            &family("fib-lucas.toml"),
            "--n",
            "1..3",
            "--ymax",
            "60",
            "--out",
            &path.to_string_lossy(),
        ]);
        assert_eq!(out.status.code(), Some(2));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_pipelines_run_clean_on_t1() {
    for (pipe, range) in [
        ("lemma1", "4..9"),
        ("eta", "6..14"),
        ("regulator", "6..16"),
        ("cramer", "8..18"),
        ("siegel", "5..5"),
        ("baker", "5..5"),
        ("bounds", "2..14"),
    ] {
        let out = run(&[
            "verify",
            pipe,
            "--family",
            &family("t1.toml"),
            "--n",
            range,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "verify {pipe} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json_of(&out);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["kind"], format!("verify-{pipe}"));
    }
}
