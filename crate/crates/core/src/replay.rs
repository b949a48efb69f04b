//! Read back a neutral-dialect script and redo the reconstruction from it
//! alone: no solver is consulted.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::interp::{selector_name, synthesize_selectors};
use crate::logic::parse::{parse_located_term, parse_type};
use crate::logic::{Goal, ParseError, SourceType, Term};
use crate::preprocess::{negate_goal, skolemize_all};
use crate::prover::{self, lemmas, ClausifyError, InputRole, Limits, ProverInput, SaturationResult};
use crate::sexp::{read_all_located, Located};

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("script syntax: {0}")]
    Syntax(String),
    #[error("script term: {0}")]
    Term(#[from] ParseError),
    #[error("unknown name `{0}` in the final call")]
    UnknownName(String),
    #[error("script disagrees with the goal: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
}

fn syntax(msg: impl Into<String>) -> ReplayError {
    ReplayError::Syntax(msg.into())
}

fn atom(l: &Located) -> Result<&str, ReplayError> {
    l.as_atom().ok_or_else(|| syntax(format!("expected a name at {}", l.pos())))
}

fn names(l: &Located) -> Result<Vec<String>, ReplayError> {
    let items = l.as_list().ok_or_else(|| syntax(format!("expected a name list at {}", l.pos())))?;
    items.iter().map(|i| atom(i).map(str::to_string)).collect()
}

/// Replay `script` against the original goal.
pub fn replay_script(goal: &Goal, script: &str, limits: Limits) -> Result<SaturationResult, ReplayError> {
    let forms = read_all_located(script).map_err(|e| syntax(e.to_string()))?;
    let mut g = goal.clone();
    let mut negated = false;
    let mut facts: Vec<(String, InputRole, Term)> = Vec::new();
    let mut call: Option<(Vec<String>, Vec<String>)> = None;
    for f in &forms {
        let items = f.as_list().ok_or_else(|| syntax(format!("expected a step at {}", f.pos())))?;
        match f.head() {
            Some("by-contradiction") => {
                let [_, name] = items else { return Err(syntax("(by-contradiction <name>)")) };
                let n = negate_goal(&g);
                let added = &n.hypotheses.last().expect("negation adds a hypothesis").name;
                if added != atom(name)? {
                    return Err(ReplayError::Mismatch(format!("negated goal is named {added}")));
                }
                g = n;
                negated = true;
            }
            Some("skolemize") => {
                let (s, rec) = skolemize_all(&g);
                let mut claimed = Vec::new();
                for b in &items[1..] {
                    let [n, ty] = b.as_list().ok_or_else(|| syntax("(skolemize (<name> <type>)*)"))? else {
                        return Err(syntax("(skolemize (<name> <type>)*)"));
                    };
                    claimed.push((atom(n)?.to_string(), parse_type(&s.signature, ty)?));
                }
                if claimed != rec.symbols() {
                    return Err(ReplayError::Mismatch("Skolem symbols differ".into()));
                }
                g = s;
            }
            Some("obtain") => {
                let [_, name, ty, fact, prop, by, _how] = items else {
                    return Err(syntax("(obtain <fn> <type> <fact> <prop> :by <how>)"));
                };
                if !by.as_atom().is_some_and(|b| b == ":by") {
                    return Err(syntax("expected :by"));
                }
                let name = atom(name)?.to_string();
                let ty: SourceType = parse_type(&g.signature, ty)?;
                let def = selector_def(&g, &name)?;
                if def.fn_type != ty {
                    return Err(ReplayError::Mismatch(format!("{name} has the wrong type")));
                }
                g.signature.consts.insert(name.clone(), ty);
                let stated = parse_located_term(&g.signature, prop, Some(&SourceType::Prop))?;
                if !stated.alpha_eq(&def.characteristic_property) {
                    return Err(ReplayError::Mismatch(format!("{name} is not characterized by its selector property")));
                }
                facts.push((atom(fact)?.to_string(), InputRole::SelectorFact, stated));
            }
            Some("have") => {
                let [_, name, prop, _, _] = items else { return Err(syntax("(have <name> <prop> :by <how>)")) };
                let stated = parse_located_term(&g.signature, prop, Some(&SourceType::Prop))?;
                facts.push((atom(name)?.to_string(), InputRole::Hint, stated));
            }
            Some("prove") => {
                let [_, used, _, lemmas] = items else { return Err(syntax("(prove (<name>*) :lemmas (<name>*))")) };
                call = Some((names(used)?, names(lemmas)?));
            }
            _ => return Err(syntax(format!("unknown step at {}", f.pos()))),
        }
    }
    if !negated {
        if g.target != Term::False {
            return Err(ReplayError::Mismatch("the goal is not a refutation and the script does not negate it".into()));
        }
        g = negate_goal(&g);
    }
    let (used, lemma_names) = call.ok_or_else(|| syntax("missing (prove ...)"))?;
    let mut inputs = Vec::new();
    for n in &used {
        let input = if let Some(h) = g.hypothesis(n) {
            let role = if g.hypotheses.last().is_some_and(|l| &l.name == n) && negated { InputRole::NegatedGoal } else { InputRole::Hypothesis };
            ProverInput { name: n.clone(), role, statement: h.prop.clone(), in_sos: true }
        } else if let Some((_, role, t)) = facts.iter().find(|(f, _, _)| f == n) {
            ProverInput { name: n.clone(), role: *role, statement: t.clone(), in_sos: true }
        } else {
            return Err(ReplayError::UnknownName(n.clone()));
        };
        inputs.push(input);
    }
    for n in &lemma_names {
        let l = lemmas::lemma(n).ok_or_else(|| ReplayError::UnknownName(n.clone()))?;
        inputs.push(ProverInput { name: n.clone(), role: InputRole::TheoryLemma, statement: l.statement.clone(), in_sos: false });
    }
    Ok(prover::saturate(&g.signature, &inputs, limits)?)
}

fn selector_def(g: &Goal, name: &str) -> Result<crate::interp::SelectorDef, ReplayError> {
    for d in &g.signature.datatypes {
        for c in &d.constructors {
            for j in 0..c.args.len() {
                if selector_name(&d.name, &c.name, j) == name {
                    let key = BTreeSet::from([(d.name.clone(), c.name.clone(), j)]);
                    if let Some(def) = synthesize_selectors(&g.signature, &key).pop() {
                        return Ok(def);
                    }
                }
            }
        }
    }
    Err(ReplayError::Mismatch(format!("{name} is not a selector of any datatype")))
}
