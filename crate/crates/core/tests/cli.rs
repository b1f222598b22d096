//! End-to-end checks of the installed binary: exit codes, output shape,
//! and byte-for-byte determinism across runs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_election-attacks")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ea-e2e-{name}-{}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn winner_exit_zero() {
    let file = write_temp("w", "candidates: p,a,b\n2: a>b>p\n");
    let out = run(&["winner", "--rule", "borda", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "rule: borda\nwinner: a\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("elapsed_ms:"));
}

#[test]
fn manipulation_yes_and_no_exit_codes() {
    let file = write_temp("m", "candidates: p,a\ntiebreak: p,a\n2: a>p\n");
    let yes = run(&[
        "manipulate",
        "--rule",
        "plurality",
        "--manipulators",
        "2",
        "--target",
        "p",
        file.to_str().unwrap(),
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&yes.stdout);
    assert!(stdout.contains("decision: YES"));
    assert!(stdout.contains("witness:"));

    let no = run(&[
        "manipulate",
        "--rule",
        "plurality",
        "--manipulators",
        "1",
        "--target",
        "p",
        file.to_str().unwrap(),
    ]);
    assert_eq!(no.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&no.stdout).contains("decision: NO"));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let bad = write_temp("p", "candidates: p,a\n1: a>a\n");
    let out = run(&["winner", "--rule", "borda", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate candidate in ranking, line 2"));

    let out = run(&["winner", "--rule", "borda", "/nonexistent/election.txt"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["manipulate", "--rule", "plurality"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_refusal_exits_three() {
    let file = write_temp("r", "candidates: p,a,b\n40: a>b>p\n");
    let out = run(&[
        "manipulate",
        "--rule",
        "plurality",
        "--manipulators",
        "30",
        "--target",
        "p",
        "--engine",
        "oracle",
        "--max-states",
        "100",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle refused"));
}

#[test]
fn both_engines_agree_across_attacks() {
    let file = write_temp(
        "b",
        "candidates: p,a,b\ntiebreak: b,p,a\n2: a>p>b\n1: b>a>p\n1: p>b>a\n",
    );
    let pool = write_temp("bp", "candidates: p,a,b\n2: p>a>b\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["manipulate", "--manipulators", "1"],
        vec!["bribe", "--budget", "1"],
        vec!["control", "--variant", "delete-votes", "--budget", "2"],
        vec!["control", "--variant", "partition-votes-te"],
        vec!["control", "--variant", "partition-votes-tp"],
    ];
    for rule in ["plurality", "borda", "stv", "bucklin", "maximin"] {
        for case in &cases {
            let mut args: Vec<&str> = case.clone();
            args.extend(["--rule", rule, "--target", "p", "--engine", "both"]);
            args.push(file.to_str().unwrap());
            let out = run(&args);
            let stdout = String::from_utf8_lossy(&out.stdout);
            assert!(
                stdout.contains("engines_agree: true"),
                "rule {rule}, case {case:?}: {stdout}"
            );
            assert_ne!(out.status.code(), Some(4));
        }
    }
    // add-votes needs the pool file.
    let out = run(&[
        "control",
        "--variant",
        "add-votes",
        "--budget",
        "1",
        "--unregistered",
        pool.to_str().unwrap(),
        "--rule",
        "veto",
        "--target",
        "p",
        "--engine",
        "both",
        file.to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("engines_agree: true"));
}

#[test]
fn candidate_control_variants_run() {
    let file = write_temp(
        "cc",
        "candidates: p,a,b\ntiebreak: p,a,b\n2: a>p>b\n2: b>p>a\n1: p>a>b\n",
    );
    let out = run(&[
        "control",
        "--variant",
        "delete-cands",
        "--budget",
        "1",
        "--rule",
        "plurality",
        "--target",
        "p",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("delete-candidate a"));

    let out = run(&[
        "control",
        "--variant",
        "runoff-partition-cands-tp",
        "--rule",
        "stv",
        "--target",
        "p",
        file.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));

    let out = run(&[
        "control",
        "--variant",
        "add-cands",
        "--budget",
        "1",
        "--spoilers",
        "b",
        "--rule",
        "plurality",
        "--target",
        "p",
        file.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
}

#[test]
fn stdout_bytes_identical_across_runs() {
    let file = write_temp(
        "d",
        "candidates: p,a,b\ntiebreak: a,b,p\n2: a>p>b\n2: b>p>a\n1: p>a>b\n",
    );
    let args = [
        "control",
        "--variant",
        "partition-votes-tp",
        "--rule",
        "copeland:1/2",
        "--target",
        "p",
        file.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());
    // stderr carries the timing line and may differ.
}

#[test]
fn destructive_mode_reports_and_exits() {
    let file = write_temp("de", "candidates: p,a\ntiebreak: a,p\n2: p>a\n");
    let out = run(&[
        "bribe",
        "--rule",
        "plurality",
        "--budget",
        "1",
        "--target",
        "p",
        "--destructive",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("mode: destructive"));
    assert!(stdout.contains("decision: YES"));
}
