mod common;

use hintsmt::prover::{Limits, SosMode};
use hintsmt::replay::{replay_script, ReplayError};
use hintsmt::script::Dialect;
use hintsmt::solver::solver_invocations;

fn script(name: &str, mode: SosMode) -> String {
    common::replay(name, mode).unwrap_or_else(|e| panic!("{name}: {e}")).script.render(Dialect::Neutral)
}

#[test]
fn emitted_scripts_replay_without_the_solver() {
    for (name, mode) in [("injective_minimum", SosMode::NoTheoryLemmas), ("injective_minimum", SosMode::Default), ("singleton_list", SosMode::Default)] {
        let text = script(name, mode);
        let before = solver_invocations();
        let r = replay_script(&common::load(name), &text, Limits::default()).unwrap();
        assert!(r.is_proof(), "{name} {mode}: {:?}\n{text}", r.verdict);
        assert_eq!(solver_invocations(), before);
    }
}

#[test]
fn renamed_skolem_symbol_is_a_mismatch() {
    let text = script("injective_minimum", SosMode::NoTheoryLemmas);
    assert!(text.contains("(skolemize (sk0 Int)"), "{text}");
    let tampered = text.replacen("(sk0 Int)", "(sk7 Int)", 1);
    let e = replay_script(&common::load("injective_minimum"), &tampered, Limits::default()).unwrap_err();
    assert!(matches!(e, ReplayError::Mismatch(_)), "{e}");
}

#[test]
fn wrong_negated_goal_name_is_a_mismatch() {
    let text = script("singleton_list", SosMode::Default).replacen("(by-contradiction negGoal)", "(by-contradiction h0)", 1);
    let e = replay_script(&common::load("singleton_list"), &text, Limits::default()).unwrap_err();
    assert!(matches!(e, ReplayError::Mismatch(_)), "{e}");
}

#[test]
fn selector_with_a_false_characterization_is_rejected() {
    let text = script("singleton_list", SosMode::Default).replacen("(= (_List.cons_sel0 (cons arg0 arg1)) arg0)", "(= (_List.cons_sel0 (cons arg0 arg1)) (_List.cons_sel0 arg1))", 1);
    let e = replay_script(&common::load("singleton_list"), &text, Limits::default()).unwrap_err();
    assert!(matches!(e, ReplayError::Mismatch(_)), "{e}");
}

#[test]
fn unknown_names_in_the_final_call_are_reported() {
    let text = script("singleton_list", SosMode::Default);
    let extra = text.replacen("(negGoal ", "(negGoal ghost ", 1);
    let e = replay_script(&common::load("singleton_list"), &extra, Limits::default()).unwrap_err();
    assert!(matches!(&e, ReplayError::UnknownName(n) if n == "ghost"), "{e}");
    let lemma = text.replacen(":lemmas ()", ":lemmas (no_such_lemma)", 1);
    let e = replay_script(&common::load("singleton_list"), &lemma, Limits::default()).unwrap_err();
    assert!(matches!(&e, ReplayError::UnknownName(n) if n == "no_such_lemma"), "{e}");
}

#[test]
fn dropping_needed_facts_loses_the_proof() {
    let text = script("singleton_list", SosMode::Default).replacen("(prove (negGoal _List.cons_sel0Fact)", "(prove (negGoal)", 1);
    let r = replay_script(&common::load("singleton_list"), &text, Limits::default()).unwrap();
    assert!(!r.is_proof());
}
