mod common;

use std::collections::BTreeSet;

use hintsmt::interp::interpret_hints;
use hintsmt::logic::{typecheck, SourceType};
use hintsmt::preprocess::preprocess;
use hintsmt::prover::SosMode;
use hintsmt::script::Dialect;
use hintsmt::sexp::Sexp;
use hintsmt::solver::{run_solver, HintKind, SolverConfig, SolverStatus};
use hintsmt::translate::translate_goal;

#[test]
fn every_problem_has_a_matching_transcript() {
    let names = common::problem_names();
    assert!(names.len() >= 50);
    for name in names {
        let (pg, _) = preprocess(&common::load(&name));
        let (script, _) = translate_goal(&pg).unwrap();
        let out = run_solver(&SolverConfig::replay(common::transcript(&name)), &script).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(out.status, SolverStatus::Unsat, "{name}");
    }
}

#[test]
fn interpreted_hints_typecheck() {
    for name in common::problem_names() {
        let (pg, _) = preprocess(&common::load(&name));
        let (script, symbols) = translate_goal(&pg).unwrap();
        let out = run_solver(&SolverConfig::replay(common::transcript(&name)), &script).unwrap();
        let interp = interpret_hints(&symbols, &pg, &out.hints);
        for h in &interp.hints {
            assert_eq!(typecheck(&interp.signature, &h.statement), Ok(SourceType::Prop), "{name} {}", h.name);
        }
        for (h, e) in &interp.dropped {
            assert!(h.mentions_solver_skolem(), "{name}: hint {} dropped: {e}", h.ordinal);
        }
    }
}

#[test]
fn corpus_hints_are_entailed() {
    if !common::solver_available() {
        eprintln!("z3 not found; skipping");
        return;
    }
    let cfg = SolverConfig::live();
    let mut checked = 0;
    for name in common::problem_names() {
        let (pg, _) = preprocess(&common::load(&name));
        let (script, _) = translate_goal(&pg).unwrap();
        let out = run_solver(&SolverConfig::replay(common::transcript(&name)), &script).unwrap();
        for h in out.hints.iter().filter(|h| !h.mentions_solver_skolem()) {
            let f = h.formula();
            let basis = common::entailed(&cfg, &script, h.kind, &f).unwrap();
            assert!(basis.is_some(), "{name}: hint {} is not entailed: {f}", h.ordinal);
            checked += 1;
        }
    }
    assert!(checked >= 60, "{checked}");
}

#[test]
fn entailment_does_not_lean_on_the_refuted_goal() {
    if !common::solver_available() {
        return;
    }
    let (pg, _) = preprocess(&common::load("arith_le_trans"));
    let (script, _) = translate_goal(&pg).unwrap();
    let cfg = SolverConfig::live();
    let wrong = Sexp::app("<=", [Sexp::atom("b"), Sexp::atom("a")]);
    assert_eq!(common::entailed(&cfg, &script, HintKind::Preprocess, &wrong).unwrap(), None);
    let valid = Sexp::app("or", [Sexp::app("<=", [Sexp::atom("a"), Sexp::atom("c")]), Sexp::app(">", [Sexp::atom("a"), Sexp::atom("c")])]);
    assert_eq!(common::entailed(&cfg, &script, HintKind::TheoryLemma, &valid).unwrap().map(|e| e.basis), Some(None));
}

#[test]
fn replay_is_deterministic() {
    for name in common::problem_names() {
        let (pg, _) = preprocess(&common::load(&name));
        let (script, _) = translate_goal(&pg).unwrap();
        let cfg = SolverConfig::replay(common::transcript(&name));
        assert_eq!(run_solver(&cfg, &script).unwrap(), run_solver(&cfg, &script).unwrap(), "{name}");
        let a = common::replay(&name, SosMode::Default).map(|o| o.script.render(Dialect::Neutral)).map_err(|e| e.to_string());
        let b = common::replay(&name, SosMode::Default).map(|o| o.script.render(Dialect::Neutral)).map_err(|e| e.to_string());
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn introduced_names_avoid_the_goal_signature() {
    for name in common::problem_names() {
        let goal = common::load(&name);
        let taken: BTreeSet<String> = goal.signature.symbol_names().into_iter().chain(goal.hypotheses.iter().map(|h| h.name.clone())).collect();
        let Ok(out) = common::replay(&name, SosMode::Default) else { continue };
        let mut introduced: Vec<String> = out.record.symbols().into_iter().map(|(n, _)| n).collect();
        introduced.push(out.record.negated_target_name.clone());
        introduced.extend(out.interpretation.hints.iter().map(|h| h.name.clone()));
        introduced.extend(out.interpretation.selectors.iter().flat_map(|s| [s.name.clone(), s.fact_name.clone()]));
        for n in introduced {
            assert!(!taken.contains(&n), "{name}: {n} collides with the goal");
        }
    }
}
