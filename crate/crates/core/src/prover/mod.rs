//! A first-order superposition prover with a set of support.
//!
//! Inputs are named propositions of the source logic, each flagged as in or
//! out of the set of support. They are clausified into one symbol table and
//! saturated; a refutation comes back as a clause DAG that [`check`] can
//! replay independently.

pub mod check;
pub mod clausify;
pub mod lemmas;
pub mod order;
pub mod saturate;
pub mod terms;
pub mod unify;

use std::collections::BTreeSet;
use std::fmt;

use crate::interp::Interpretation;
use crate::logic::{Goal, Signature, Term};

pub use check::{check_proof, CheckError};
pub use clausify::ClausifyError;
pub use lemmas::{lemmas_for, theory_lemmas, LemmaSet, TheoryLemma};
pub use saturate::{saturate_clauses, Clause, Inference, Limits, Proof, SaturationResult, SosClause, Verdict};
pub use terms::Symbols;

/// How inputs are split between the set of support and the background.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SosMode {
    /// Hypotheses, negated goal, hints and selector facts in; lemmas out.
    Default,
    /// As `Default` without any theory lemmas.
    NoTheoryLemmas,
    /// Every input in the set of support.
    NoSoS,
    /// Hints moved out of the set of support.
    HintsOutOfSoS,
    /// Only the negated goal (plus hints and selector facts) in.
    PremisesOutOfSoS,
    /// As `Default` with the unit lemma column.
    UnitLemmasOnly,
    /// As `Default` with associativity and commutativity laws added.
    WithAcLemmas,
    /// As `Default` without hints.
    NoHints,
}

impl SosMode {
    pub const ALL: [SosMode; 8] = [
        SosMode::Default,
        SosMode::NoTheoryLemmas,
        SosMode::NoSoS,
        SosMode::HintsOutOfSoS,
        SosMode::PremisesOutOfSoS,
        SosMode::UnitLemmasOnly,
        SosMode::WithAcLemmas,
        SosMode::NoHints,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SosMode::Default => "default",
            SosMode::NoTheoryLemmas => "no-theory-lemmas",
            SosMode::NoSoS => "no-sos",
            SosMode::HintsOutOfSoS => "hints-out-of-sos",
            SosMode::PremisesOutOfSoS => "premises-out-of-sos",
            SosMode::UnitLemmasOnly => "unit-lemmas-only",
            SosMode::WithAcLemmas => "with-ac-lemmas",
            SosMode::NoHints => "no-hints",
        }
    }

    pub fn from_name(s: &str) -> Option<SosMode> {
        SosMode::ALL.into_iter().find(|m| m.name() == s)
    }

    pub fn lemma_set(self) -> LemmaSet {
        match self {
            SosMode::NoTheoryLemmas => LemmaSet::None,
            SosMode::UnitLemmasOnly => LemmaSet::UnitOnly,
            SosMode::WithAcLemmas => LemmaSet::WithAc,
            _ => LemmaSet::Default,
        }
    }
}

impl fmt::Display for SosMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputRole {
    Hypothesis,
    NegatedGoal,
    Hint,
    SelectorFact,
    TheoryLemma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverInput {
    pub name: String,
    pub role: InputRole,
    pub statement: Term,
    pub in_sos: bool,
}

/// Build the prover inputs for a refutation goal.
///
/// `core` restricts the hypotheses to the ones the solver used; the negated
/// goal is always kept.
pub fn assign_sos(goal: &Goal, neg_goal: &str, core: Option<&BTreeSet<String>>, interp: &Interpretation, mode: SosMode) -> Vec<ProverInput> {
    let premise_in = !matches!(mode, SosMode::PremisesOutOfSoS);
    let hint_in = !matches!(mode, SosMode::HintsOutOfSoS);
    let all_in = mode == SosMode::NoSoS;
    let mut out = Vec::new();
    for h in &goal.hypotheses {
        let is_neg = h.name == neg_goal;
        if !is_neg && core.is_some_and(|c| !c.contains(&h.name)) {
            continue;
        }
        let (role, sos) = if is_neg { (InputRole::NegatedGoal, true) } else { (InputRole::Hypothesis, premise_in) };
        out.push(ProverInput { name: h.name.clone(), role, statement: h.prop.clone(), in_sos: sos || all_in });
    }
    if mode != SosMode::NoHints {
        for h in &interp.hints {
            out.push(ProverInput { name: h.name.clone(), role: InputRole::Hint, statement: h.statement.clone(), in_sos: hint_in || all_in });
        }
    }
    for s in &interp.selectors {
        out.push(ProverInput {
            name: s.fact_name.clone(),
            role: InputRole::SelectorFact,
            statement: s.characteristic_property.clone(),
            in_sos: true,
        });
    }
    for l in lemmas_for(mode.lemma_set()) {
        out.push(ProverInput { name: l.name.to_string(), role: InputRole::TheoryLemma, statement: l.statement.clone(), in_sos: all_in });
    }
    out
}

/// Clausify the inputs and saturate.
pub fn saturate(sig: &Signature, inputs: &[ProverInput], limits: Limits) -> Result<SaturationResult, ClausifyError> {
    let mut syms = Symbols::new();
    let mut clauses = Vec::new();
    let mut c = clausify::Clausifier::new(sig, &mut syms);
    for i in inputs {
        for ic in c.clausify(&i.name, &i.statement)? {
            clauses.push(SosClause { name: ic.name, lits: ic.lits, in_sos: i.in_sos });
        }
    }
    Ok(saturate_clauses(&syms, &clauses, limits))
}

#[derive(Clone, Debug)]
pub struct Minimized {
    pub inputs: Vec<ProverInput>,
    pub result: SaturationResult,
    /// The re-run on the used inputs failed; the original result is kept.
    pub regression: bool,
}

/// Re-run on just the inputs the first proof used.
pub fn minimize(sig: &Signature, inputs: &[ProverInput], first: SaturationResult, limits: Limits) -> Result<Minimized, ClausifyError> {
    if !first.is_proof() {
        return Ok(Minimized { inputs: inputs.to_vec(), result: first, regression: false });
    }
    let kept: Vec<ProverInput> = inputs.iter().filter(|i| first.used_inputs.contains(&i.name)).cloned().collect();
    let again = saturate(sig, &kept, limits)?;
    if again.is_proof() {
        Ok(Minimized { inputs: kept, result: again, regression: false })
    } else {
        Ok(Minimized { inputs: inputs.to_vec(), result: first, regression: true })
    }
}
