mod common;

use std::collections::BTreeSet;

use hintsmt::interp::{InterpretedHint, Interpretation};
use hintsmt::logic::{parse_problem, parse_term, Signature};
use hintsmt::preprocess::preprocess;
use hintsmt::prover::{assign_sos, check_proof, saturate, InputRole, Limits, Proof, ProverInput, SosMode, Verdict};
use hintsmt::sexp::Sexp;
use hintsmt::solver::{Hint, HintKind, HintPayload};

const INJECTIVE: &str = "(declare-fun f (Int) Int)
(hyp h1 (forall ((x Int) (y Int)) (=> (= (f x) (f y)) (= x y))))
(hyp h2 (exists ((x Int)) (forall ((y Int)) (<= (f x) (f y)))))
(goal (exists ((x Int)) (forall ((y Int)) (=> (not (= x y)) (< (f x) (f y))))))";

fn hint(sig: &Signature, name: &str, text: &str) -> InterpretedHint {
    InterpretedHint {
        name: name.into(),
        statement: parse_term(sig, text, None).unwrap(),
        origin: Hint { kind: HintKind::TheoryLemma, payload: HintPayload::Formula(Sexp::atom("true")), ordinal: 0 },
        needs_selectors: BTreeSet::new(),
    }
}

fn injective_inputs(mode: SosMode) -> (Signature, Vec<ProverInput>) {
    let g = parse_problem(INJECTIVE).unwrap();
    let (pg, rec) = preprocess(&g);
    let sig = pg.signature.clone();
    let hints = vec![
        hint(
            &sig,
            "smtLemma0",
            "(=> (forall ((i Int)) (<= (f sk0) (f i))) (forall ((i Int)) (not (>= (+ (f sk0) (* -1 (f i))) 1))))",
        ),
        hint(
            &sig,
            "smtLemma1",
            "(=> (forall ((i Int)) (not (=> (not (= i (sk1 i))) (< (f i) (f (sk1 i)))))) (forall ((z Int)) (>= (+ (f z) (* -1 (f (sk1 z)))) 0)))",
        ),
        hint(
            &sig,
            "smtLemma2",
            "(or (or (not (>= (+ (f sk0) (* -1 (f (sk1 sk0)))) 0)) (= (f sk0) (f (sk1 sk0)))) (>= (+ (f sk0) (* -1 (f (sk1 sk0)))) 1))",
        ),
    ];
    let interp = Interpretation { hints, selectors: vec![], dropped: vec![], signature: sig.clone() };
    (sig, assign_sos(&pg, &rec.negated_target_name, None, &interp, mode))
}

/// Every generating step has a parent in the set of support.
fn respects_sos(p: &Proof) -> bool {
    p.clauses.iter().filter(|c| c.inference.is_generating()).all(|c| {
        c.inference.parents().iter().any(|&id| p.clause(id).is_some_and(|parent| parent.in_sos))
    })
}

#[test]
fn injective_minimum_needs_the_hints_without_theory_lemmas() {
    let (sig, inputs) = injective_inputs(SosMode::NoTheoryLemmas);
    let r = saturate(&sig, &inputs, Limits::default()).unwrap();
    let p = r.proof().expect("proof with hints");
    check_proof(p).unwrap();
    assert!(respects_sos(p));
    let used: Vec<&str> = r.used_inputs.iter().map(String::as_str).collect();
    assert_eq!(used, ["h1", "h2", "negGoal", "smtLemma0", "smtLemma1", "smtLemma2"]);

    let bare: Vec<_> = inputs.into_iter().filter(|i| i.role != InputRole::Hint).collect();
    let r = saturate(&sig, &bare, Limits::default()).unwrap();
    assert!(matches!(r.verdict, Verdict::Saturated | Verdict::ResourceOut), "{:?}", r.verdict);
}

#[test]
fn injective_minimum_under_default_lemmas() {
    for mode in [SosMode::Default, SosMode::NoHints] {
        let (sig, inputs) = injective_inputs(mode);
        let r = saturate(&sig, &inputs, Limits::default()).unwrap();
        let p = r.proof().unwrap_or_else(|| panic!("{mode}: {:?}", r.verdict));
        check_proof(p).unwrap();
        assert!(respects_sos(p), "{mode}");
        assert!(r.used_inputs.contains("le_iff_lt_or_eq"), "{mode}: {:?}", r.used_inputs);
    }
}

#[test]
fn default_proofs_on_the_corpus_respect_the_set_of_support() {
    let mut proofs = 0;
    for name in common::problem_names() {
        if let Ok(out) = common::replay(&name, SosMode::Default) {
            let p = out.result.proof().unwrap();
            assert!(respects_sos(p), "{name}\n{}", p.dump());
            proofs += 1;
        }
    }
    assert!(proofs >= 50, "{proofs}");
}

#[test]
fn no_sos_agrees_with_the_brute_force_oracle() {
    assert_eq!(common::MICRO_SUITE.len(), 20);
    let mut unsat = 0;
    for (name, text) in common::MICRO_SUITE {
        let g = common::micro_problem(text);
        let satisfiable = common::brute_force_satisfiable(&g);
        let (pg, rec) = preprocess(&g);
        let inputs: Vec<ProverInput> = pg
            .hypotheses
            .iter()
            .map(|h| ProverInput {
                name: h.name.clone(),
                role: if h.name == rec.negated_target_name { InputRole::NegatedGoal } else { InputRole::Hypothesis },
                statement: h.prop.clone(),
                in_sos: true,
            })
            .collect();
        let r = saturate(&pg.signature, &inputs, Limits::default()).unwrap();
        match (&r.verdict, satisfiable) {
            (Verdict::ProofFound(p), false) => {
                check_proof(p).unwrap();
                unsat += 1;
            }
            (Verdict::Saturated, true) => {}
            (v, s) => panic!("{name}: prover says {v:?}, oracle says satisfiable = {s}"),
        }
    }
    assert!((5..=15).contains(&unsat), "the suite should mix verdicts: {unsat} unsat");
}
