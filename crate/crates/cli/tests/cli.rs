use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BICYCLIC6: &str = "size 6\nt1 (0 1 2)(3 5 4)\nt2 (0 3)(1 4)(2 5)\nt3 (0 4)(1 5)(2 3)\n";

const EXAMPLE2_TRADE: &str = "\
A 0 0 0\nA 0 2 2\nA 0 4 4\nA 1 3 4\nA 1 4 2\nA 2 0 1\nA 2 1 3\nA 2 2 0\nA 2 3 2\nA 3 0 4\nA 3 1 1\nA 3 3 3
B 0 0 4\nB 0 2 0\nB 0 4 2\nB 1 3 2\nB 1 4 4\nB 2 0 0\nB 2 1 1\nB 2 2 2\nB 2 3 3\nB 3 0 1\nB 3 1 3\nB 3 3 4
";

fn bitrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitrade"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("run bitrade")
}

fn stdout_of(args: &[&str]) -> String {
    let out = bitrade(args);
    assert!(
        out.status.success(),
        "bitrade {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn enumerate_to_twelve() {
    let out = stdout_of(&["enumerate", "--max-size", "12"]);
    assert!(out.ends_with("11\t51\n12\t198\n"), "{out}");
    assert!(out.starts_with("4\t1\n5\t0\n6\t3\n"));
}

#[test]
fn enumerate_is_independent_of_workers() {
    let one = stdout_of(&["enumerate", "--max-size", "12"]);
    let eight = stdout_of(&["enumerate", "--max-size", "12", "--workers", "8"]);
    let deep = stdout_of(&["enumerate", "--max-size", "12", "--workers", "2", "--split-depth", "0"]);
    assert_eq!(one, eight);
    assert_eq!(one, deep);
}

#[test]
fn enumerate_rejects_tiny_sizes() {
    let out = bitrade(&["enumerate", "--max-size", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 4"));
    let out = bitrade(&["enumerate", "--max-size", "8", "--workers", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_forms_stream() {
    let out = stdout_of(&["enumerate", "--max-size", "8", "--emit", "forms"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1 + 3 + 1 + 6);
    assert!(lines[0].starts_with("4\t1 2 -1"));
    let oracle = stdout_of(&["oracle", "--max-size", "8", "--emit", "forms"]);
    assert_eq!(out, oracle);
}

#[test]
fn checkpoint_resume_gives_the_same_census() {
    let dir = TempDir::new().unwrap();
    let cp = dir.path().join("cp");
    let cp = cp.to_str().unwrap();
    let fresh = stdout_of(&["enumerate", "--max-size", "12", "--checkpoint", cp]);
    let done = std::fs::read_to_string(dir.path().join("cp/done.txt")).unwrap();
    let tasks = std::fs::read_to_string(dir.path().join("cp/tasks.txt")).unwrap();
    assert_eq!(done.lines().count(), tasks.lines().count());

    // drop half of the journal and resume
    let kept: String = done.lines().take(done.lines().count() / 2).map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.path().join("cp/done.txt"), kept).unwrap();
    let resumed = stdout_of(&["enumerate", "--max-size", "12", "--checkpoint", cp, "--workers", "3"]);
    assert_eq!(fresh, resumed);
    assert_eq!(fresh, stdout_of(&["enumerate", "--max-size", "12"]));

    let out = bitrade(&["enumerate", "--max-size", "11", "--checkpoint", cp]);
    assert!(!out.status.success());
}

#[test]
fn oracle_matches_enumerate() {
    let a = stdout_of(&["oracle", "--max-size", "10", "--verify"]);
    let b = stdout_of(&["enumerate", "--max-size", "10"]);
    assert_eq!(a, b);
    let out = bitrade(&["oracle", "--max-size", "14"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
}

#[test]
fn genus_of_example2_pair() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "ex2.trade", EXAMPLE2_TRADE);
    assert_eq!(stdout_of(&["genus", &f]), "0\n");
    let report = stdout_of(&["validate", &f]);
    assert!(report.contains("T2 pass") && report.contains("genus 0"), "{report}");
}

#[test]
fn convert_reaches_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "ex2.trade", EXAMPLE2_TRADE);
    let tau = stdout_of(&["convert", &f, "--to", "tau"]);
    let tau_file = write(dir.path(), "ex2.tau", &tau);
    let pair = stdout_of(&["convert", &tau_file, "--to", "pair"]);
    let pair_file = write(dir.path(), "again.trade", &pair);
    let tau2 = stdout_of(&["convert", &pair_file, "--to", "tau"]);
    let tau2_file = write(dir.path(), "again.tau", &tau2);
    let pair2 = stdout_of(&["convert", &tau2_file, "--to", "pair"]);
    assert_eq!(pair, pair2);
    assert_eq!(tau2, stdout_of(&["convert", &tau2_file, "--to", "tau"]));
    assert_eq!(
        stdout_of(&["canon", &f]),
        stdout_of(&["canon", &tau2_file])
    );
}

#[test]
fn canon_ignores_relabelling() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.tau", BICYCLIC6);
    // the same triple under 0→5, 1→3, 2→1, 3→0, 4→2, 5→4
    let b = write(
        dir.path(),
        "b.tau",
        "size 6\nt1 (5 3 1)(0 4 2)\nt2 (5 0)(3 2)(1 4)\nt3 (5 2)(3 4)(1 0)\n",
    );
    let ca = stdout_of(&["canon", &a]);
    assert_eq!(ca, stdout_of(&["canon", &b]));
    assert_eq!(ca.trim().split(' ').filter(|&t| t == "-1").count(), 8);
}

#[test]
fn expand_and_contract_round_trip() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.tau", BICYCLIC6);
    let child = stdout_of(&["expand", &a, "--point", "0", "--dir", "1"]);
    assert!(child.starts_with("size 7\n"));
    let c = write(dir.path(), "c.tau", &child);
    assert_eq!(stdout_of(&["genus", &c]), "0\n");
    assert_eq!(stdout_of(&["contract", &c, "--point", "6", "--dir", "1"]), BICYCLIC6);

    let out = bitrade(&["expand", &a, "--point", "0", "--dir", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid slide site 2:0"));
}

#[test]
fn inverse_of_bicyclic_has_the_same_canonical_code() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.tau", BICYCLIC6);
    let inv = stdout_of(&["inverse", &a]);
    let i = write(dir.path(), "i.tau", &inv);
    assert_eq!(stdout_of(&["canon", &a]), stdout_of(&["canon", &i]));
}

#[test]
fn parse_errors_name_line_and_column() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bad.tau", "size 3\nt1 (0 1 2)\nt2 (0 1 q)\nt3 (0 2 1)\n");
    let out = bitrade(&["validate", &f]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 9"), "{err}");

    let f = write(dir.path(), "bad.trade", "A 0 0 0\nB 0 0 0\n");
    let out = bitrade(&["convert", &f, "--to", "tau"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a bitrade"));

    let f = write(dir.path(), "what.txt", "hello\n");
    assert!(!bitrade(&["validate", &f]).status.success());
}

#[test]
fn out_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("census.tsv");
    let printed = stdout_of(&["enumerate", "--max-size", "9", "--out", out.to_str().unwrap()]);
    assert!(printed.is_empty());
    assert_eq!(
        std::fs::read_to_string(out).unwrap(),
        "4\t1\n5\t0\n6\t3\n7\t1\n8\t6\n9\t9\n"
    );
}
