mod common;

use std::path::Path;
use std::process::{Command, Output};

use hintsmt::logic::parse_problem;
use hintsmt::preprocess::preprocess;
use hintsmt::solver::digest;
use hintsmt::translate::translate_goal;

const FALSE_GOAL: &str = "(declare-const a Int)(declare-const b Int)(hyp h (<= a b))(goal (< a b))";

fn prove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hintsmt")).arg("prove").args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Write a problem and a transcript answering it with `verdict`.
fn fixture(dir: &Path, problem: &str, verdict: &str) -> (String, String) {
    let (pg, _) = preprocess(&parse_problem(problem).unwrap());
    let (smt, _) = translate_goal(&pg).unwrap();
    let prob = dir.join("goal.prob");
    let tr = dir.join("goal.transcript");
    std::fs::write(&prob, problem).unwrap();
    std::fs::write(&tr, format!("(transcript :digest {})\n{verdict}\n", digest(&smt))).unwrap();
    (path(&prob).to_string(), path(&tr).to_string())
}

#[test]
fn replayed_proof_prints_the_script() {
    let c = common::corpus();
    let out = prove(&[
        path(&c.join("problems/injective_minimum.prob")),
        "--replay",
        path(&c.join("transcripts/injective_minimum.transcript")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("(by-contradiction negGoal)"), "{text}");
    assert!(text.contains("(prove (h1 h2 negGoal"), "{text}");
}

#[test]
fn output_and_dump_files_are_written() {
    let c = common::corpus();
    let dir = tempfile::tempdir().unwrap();
    let (script, smt, proof) = (dir.path().join("out.txt"), dir.path().join("q.smt2"), dir.path().join("p.txt"));
    let out = prove(&[
        path(&c.join("problems/singleton_list.prob")),
        "--replay",
        path(&c.join("transcripts/singleton_list.transcript")),
        "--dialect",
        "lean-sketch",
        "--out",
        path(&script),
        "--dump-smt",
        path(&smt),
        "--dump-proof",
        path(&proof),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&script).unwrap().contains("duper"));
    assert!(std::fs::read_to_string(&smt).unwrap().contains("(check-sat)"));
    assert!(!std::fs::read_to_string(&proof).unwrap().is_empty());
}

#[test]
fn satisfiable_goal_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (prob, tr) = fixture(dir.path(), FALSE_GOAL, "sat");
    let out = prove(&[&prob, "--replay", &tr]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn inconclusive_solver_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let (prob, tr) = fixture(dir.path(), FALSE_GOAL, "unknown");
    assert_eq!(prove(&[&prob, "--replay", &tr]).status.code(), Some(1));
    std::fs::write(&tr, "(transcript :digest 00)\nunsat\n(h0)\n").unwrap();
    let out = prove(&[&prob, "--replay", &tr]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("digest"));
}

#[test]
fn failed_reconstruction_exits_with_three() {
    let c = common::corpus();
    let out = prove(&[
        path(&c.join("problems/arith_le_trans.prob")),
        "--replay",
        path(&c.join("transcripts/arith_le_trans.transcript")),
        "--mode",
        "no-hints",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("core"));
}

#[test]
fn malformed_problem_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let prob = dir.path().join("bad.prob");
    std::fs::write(&prob, "(declare-const a Int)(goal (<= a").unwrap();
    assert_eq!(prove(&[path(&prob), "--replay", "unused"]).status.code(), Some(4));
    std::fs::write(&prob, "(goal (<= a 0))").unwrap();
    assert_eq!(prove(&[path(&prob), "--replay", "unused"]).status.code(), Some(4));
}
