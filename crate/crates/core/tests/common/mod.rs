#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use hintsmt::logic::{parse_problem, Goal, SourceType, Term};
use hintsmt::pipeline::{run_pipeline, PipelineConfig, PipelineError, PipelineOutput};
use hintsmt::prover::SosMode;
use hintsmt::sexp::Sexp;
use hintsmt::solver::{check_sat, HintKind, SolverConfig, SolverError, SolverStatus};
use hintsmt::translate::{AssertKind, SmtScript};

pub fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Problem names in the corpus, sorted.
pub fn problem_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus().join("problems"))
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "prob").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

pub fn load(name: &str) -> Goal {
    let text = std::fs::read_to_string(corpus().join("problems").join(format!("{name}.prob"))).unwrap();
    parse_problem(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn transcript(name: &str) -> PathBuf {
    corpus().join("transcripts").join(format!("{name}.transcript"))
}

pub fn replay(name: &str, mode: SosMode) -> Result<PipelineOutput, PipelineError> {
    let cfg = PipelineConfig::new(SolverConfig::replay(transcript(name))).with_mode(mode);
    run_pipeline(&load(name), &cfg)
}

pub fn solver_available() -> bool {
    matches!(check_sat(&SolverConfig::live(), "(check-sat)\n"), Ok(SolverStatus::Sat))
}

const BUILTINS: &[&str] = &[
    "=", "+", "-", "*", "<", "<=", ">", ">=", "and", "or", "not", "=>", "ite", "abs", "div", "mod", "true", "false", "let", "_",
    "is", "distinct", "forall", "exists", "Int", "Bool",
];

/// Atoms of `t` the script does not declare: free pattern variables of
/// rewrites and let-bound names.
pub fn undeclared(script: &SmtScript, t: &Sexp) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    t.walk(&mut |s| {
        if let Some(a) = s.as_atom() {
            let numeral = a.chars().all(|c| c.is_ascii_digit());
            if !numeral && !BUILTINS.contains(&a) && !script.signature.functions.contains_key(a) {
                out.insert(a.to_string());
            }
        }
    });
    out
}

/// `basis ∧ ¬formula` as a query, where `basis` is the script's
/// declarations and wf assertions plus the hypothesis labelled `hyp`.
/// Undeclared atoms of the formula become fresh Int constants, which reads
/// the formula as universally closed.
pub fn entailment_query(script: &SmtScript, hyp: Option<&str>, formula: &Sexp) -> String {
    let mut basis = script.clone();
    basis.asserts.retain(|a| match &a.kind {
        AssertKind::Wf { .. } => true,
        AssertKind::Hyp { label, .. } => Some(label.as_str()) == hyp,
    });
    let body = basis.text_with(&[Sexp::app("not", [formula.clone()])]);
    let (first, rest) = body.split_once('\n').unwrap();
    let decls: String = undeclared(script, formula).iter().map(|x| format!("(declare-const {x} Int)\n")).collect();
    format!("{first}\n{decls}{rest}")
}

/// A successful entailment check: the hypothesis label used, if any, and
/// the time the deciding query took.
#[derive(Debug, PartialEq, Eq)]
pub struct Entailment {
    pub basis: Option<String>,
    pub elapsed: Duration,
}

/// Is `formula` entailed without appeal to the script's joint
/// inconsistency? Theory facts must follow from the wf assertions alone;
/// preprocessing facts from the wf assertions and one hypothesis.
pub fn entailed(cfg: &SolverConfig, script: &SmtScript, kind: HintKind, formula: &Sexp) -> Result<Option<Entailment>, SolverError> {
    let mut bases: Vec<Option<String>> = vec![None];
    if kind == HintKind::Preprocess {
        for a in &script.asserts {
            if let AssertKind::Hyp { label, .. } = &a.kind {
                bases.push(Some(label.clone()));
            }
        }
    }
    for basis in bases {
        let start = Instant::now();
        if check_sat(cfg, &entailment_query(script, basis.as_deref(), formula))? == SolverStatus::Unsat {
            return Ok(Some(Entailment { basis, elapsed: start.elapsed() }));
        }
    }
    Ok(None)
}

/// Exhaustive model search over a small ground problem: every partition of
/// each sort's constants and every assignment of the propositional
/// constants. Returns whether some model satisfies all hypotheses.
pub fn brute_force_satisfiable(goal: &Goal) -> bool {
    let sig = &goal.signature;
    let props: Vec<&String> = sig.consts.iter().filter(|(_, t)| **t == SourceType::Prop).map(|(n, _)| n).collect();
    let mut by_sort: BTreeMap<&SourceType, Vec<&String>> = BTreeMap::new();
    for (n, t) in &sig.consts {
        if *t != SourceType::Prop {
            assert!(!t.is_arrow(), "brute-force oracle takes constants only");
            by_sort.entry(t).or_default().push(n);
        }
    }
    let sorts: Vec<Vec<&String>> = by_sort.into_values().collect();
    let partitions: Vec<Vec<Vec<usize>>> = sorts.iter().map(|cs| set_partitions(cs.len())).collect();
    let mut choice = vec![0usize; sorts.len()];
    loop {
        let mut class: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for (s, cs) in sorts.iter().enumerate() {
            for (i, c) in cs.iter().enumerate() {
                class.insert(c.as_str(), (s, partitions[s][choice[s]][i]));
            }
        }
        for bits in 0u32..(1 << props.len()) {
            let truth: BTreeMap<&str, bool> =
                props.iter().enumerate().map(|(i, p)| (p.as_str(), bits & (1 << i) != 0)).collect();
            let model = Model { truth: &truth, class: &class };
            if goal.hypotheses.iter().all(|h| model.eval(&h.prop)) && !model.eval(&goal.target) {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == sorts.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < partitions[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// All set partitions of `n` elements as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let next = p.iter().max().map_or(0, |m| m + 1);
                (0..=next).map(move |b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
    }
    out
}

struct Model<'a> {
    truth: &'a BTreeMap<&'a str, bool>,
    class: &'a BTreeMap<&'a str, (usize, usize)>,
}

impl Model<'_> {
    fn value(&self, t: &Term) -> (usize, usize) {
        match t {
            Term::Const(c) => self.class[c.as_str()],
            other => panic!("brute-force oracle cannot evaluate {other:?}"),
        }
    }

    fn eval(&self, t: &Term) -> bool {
        match t {
            Term::True => true,
            Term::False => false,
            Term::Const(c) => self.truth[c.as_str()],
            Term::Not(a) => !self.eval(a),
            Term::And(a, b) => self.eval(a) && self.eval(b),
            Term::Or(a, b) => self.eval(a) || self.eval(b),
            Term::Implies(a, b) => !self.eval(a) || self.eval(b),
            Term::Iff(a, b) => self.eval(a) == self.eval(b),
            Term::Eq(a, b) => self.value(a) == self.value(b),
            other => panic!("brute-force oracle cannot evaluate {other:?}"),
        }
    }
}

/// Twenty small ground problems: propositional structure over Prop
/// constants plus equalities between constants of an opaque sort.
pub const MICRO_SUITE: &[(&str, &str)] = &[
    ("unit_conflict", "(declare-const p Prop)(hyp h0 p)(hyp h1 (not p))(goal false)"),
    ("single_atom", "(declare-const p Prop)(hyp h0 p)(goal false)"),
    ("modus_ponens", "(declare-const p Prop)(declare-const q Prop)(hyp h0 p)(hyp h1 (=> p q))(goal q)"),
    ("affirm_consequent", "(declare-const p Prop)(declare-const q Prop)(hyp h0 q)(hyp h1 (=> p q))(goal p)"),
    ("excluded_middle", "(declare-const p Prop)(goal (or p (not p)))"),
    (
        "all_sign_patterns",
        "(declare-const p Prop)(declare-const q Prop)\
         (hyp h0 (or p q))(hyp h1 (or p (not q)))(hyp h2 (or (not p) q))(hyp h3 (or (not p) (not q)))(goal false)",
    ),
    (
        "three_of_four_patterns",
        "(declare-const p Prop)(declare-const q Prop)\
         (hyp h0 (or p q))(hyp h1 (or p (not q)))(hyp h2 (or (not p) q))(goal false)",
    ),
    ("peirce", "(declare-const p Prop)(declare-const q Prop)(goal (=> (=> (=> p q) p) p))"),
    ("iff_chain", "(declare-const p Prop)(declare-const q Prop)(declare-const r Prop)(hyp h0 (iff p q))(hyp h1 (iff q r))(goal (iff p r))"),
    ("xor_triple", "(declare-const p Prop)(declare-const q Prop)(declare-const r Prop)(hyp h0 (iff p (not q)))(hyp h1 (iff q (not r)))(goal (iff p r))"),
    (
        "pigeonhole_3_2",
        "(declare-const a1 Prop)(declare-const a2 Prop)(declare-const b1 Prop)(declare-const b2 Prop)(declare-const c1 Prop)(declare-const c2 Prop)\
         (hyp h0 (or a1 a2))(hyp h1 (or b1 b2))(hyp h2 (or c1 c2))\
         (hyp h3 (not (and a1 b1)))(hyp h4 (not (and a1 c1)))(hyp h5 (not (and b1 c1)))\
         (hyp h6 (not (and a2 b2)))(hyp h7 (not (and a2 c2)))(hyp h8 (not (and b2 c2)))(goal false)",
    ),
    (
        "pigeonhole_2_2",
        "(declare-const a1 Prop)(declare-const a2 Prop)(declare-const b1 Prop)(declare-const b2 Prop)\
         (hyp h0 (or a1 a2))(hyp h1 (or b1 b2))(hyp h2 (not (and a1 b1)))(hyp h3 (not (and a2 b2)))(goal false)",
    ),
    ("eq_symmetry", "(declare-sort U)(declare-const a U)(declare-const b U)(hyp h0 (= a b))(goal (= b a))"),
    ("eq_transitivity", "(declare-sort U)(declare-const a U)(declare-const b U)(declare-const c U)(hyp h0 (= a b))(hyp h1 (= b c))(goal (= a c))"),
    ("eq_non_transitivity", "(declare-sort U)(declare-const a U)(declare-const b U)(declare-const c U)(hyp h0 (= a b))(hyp h1 (not (= b c)))(goal (= a c))"),
    ("distinct_consistent", "(declare-sort U)(declare-const a U)(declare-const b U)(declare-const c U)(hyp h0 (not (= a b)))(hyp h1 (not (= b c)))(goal (= a c))"),
    (
        "two_element_domain",
        "(declare-sort U)(declare-const a U)(declare-const b U)(declare-const c U)\
         (hyp h0 (not (= a b)))(hyp h1 (not (= b c)))(hyp h2 (not (= a c)))(hyp h3 (or (= c a) (= c b)))(goal false)",
    ),
    (
        "guarded_equation",
        "(declare-sort U)(declare-const p Prop)(declare-const a U)(declare-const b U)(declare-const c U)\
         (hyp h0 (=> p (= a b)))(hyp h1 (=> (not p) (= a c)))(hyp h2 (not (= a b)))(goal (= a c))",
    ),
    (
        "guarded_equation_open",
        "(declare-sort U)(declare-const p Prop)(declare-const a U)(declare-const b U)(declare-const c U)\
         (hyp h0 (=> p (= a b)))(hyp h1 (=> (not p) (= a c)))(goal (= a c))",
    ),
    (
        "case_split_equalities",
        "(declare-sort U)(declare-const p Prop)(declare-const a U)(declare-const b U)\
         (hyp h0 (or (and p (= a b)) (and (not p) (= b a))))(goal (= a b))",
    ),
];

pub fn micro_problem(text: &str) -> Goal {
    parse_problem(text).unwrap()
}
