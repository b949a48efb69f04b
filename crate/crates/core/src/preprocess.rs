//! Refutation setup: negate the target, then Skolemize every hypothesis.

use std::collections::HashSet;

use thiserror::Error;

use crate::logic::term::*;
use crate::logic::{Goal, Hypothesis, Signature, SourceType};

/// Name given to the negated target.
pub const NEG_GOAL: &str = "negGoal";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SkolemError {
    #[error("cannot establish that {0} is inhabited")]
    InhabitationUnknown(SourceType),
}

/// A Skolemization failure that left one hypothesis untouched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemWarning {
    pub hypothesis: String,
    pub error: SkolemError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemStep {
    pub hypothesis: String,
    pub fresh_symbols: Vec<(String, SourceType)>,
    pub rewritten: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemizationRecord {
    pub steps: Vec<SkolemStep>,
    pub negated_target_name: String,
    pub changed: bool,
    pub warnings: Vec<SkolemWarning>,
}

impl SkolemizationRecord {
    /// All Skolem symbols in introduction order.
    pub fn symbols(&self) -> Vec<(String, SourceType)> {
        self.steps.iter().flat_map(|s| s.fresh_symbols.iter().cloned()).collect()
    }
}

/// Turn `Γ ⊢ p` into `Γ, negGoal : ¬p ⊢ ⊥`.
pub fn negate_goal(g: &Goal) -> Goal {
    let mut out = g.clone();
    let name = fresh_hyp_name(g, NEG_GOAL);
    out.hypotheses.push(Hypothesis { name, prop: not(g.target.clone()) });
    out.target = Term::False;
    out
}

fn fresh_hyp_name(g: &Goal, base: &str) -> String {
    let taken = |n: &str| g.hypothesis(n).is_some();
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}_{i}")).find(|n| !taken(n)).unwrap()
}

/// Skolemize every hypothesis of a refutation goal.
///
/// Existentials in positive positions and universals in negative positions
/// are replaced by fresh symbols `sk0, sk1, ...` applied to the universals in
/// scope. Negations are pushed through quantifiers only where needed to expose
/// them. A hypothesis whose Skolem symbol would need an inhabitation fact we do
/// not have (and whose witness is not guaranteed by the hypothesis itself) is
/// left as is and reported in `warnings`.
pub fn skolemize_all(g: &Goal) -> (Goal, SkolemizationRecord) {
    let neg_name = g
        .hypotheses
        .iter()
        .rev()
        .find(|h| h.name == NEG_GOAL || h.name.starts_with("negGoal_"))
        .map(|h| h.name.clone())
        .unwrap_or_else(|| NEG_GOAL.to_string());
    let mut sig = g.signature.clone();
    let mut counter = 0usize;
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    let mut hyps = Vec::new();
    for h in &g.hypotheses {
        if !needs_skolem(&h.prop, true) {
            hyps.push(h.clone());
            continue;
        }
        let mut sk = Skolemizer { sig: &sig, counter, fresh: Vec::new(), error: None };
        let rewritten = sk.pos(&h.prop, &mut Vec::new(), true);
        if let Some(error) = sk.error {
            warnings.push(SkolemWarning { hypothesis: h.name.clone(), error });
            hyps.push(h.clone());
            continue;
        }
        counter = sk.counter;
        let fresh = sk.fresh;
        for (n, ty) in &fresh {
            sig.consts.insert(n.clone(), ty.clone());
        }
        let rewritten = rewritten.alpha_normalize(&sig, &HashSet::new());
        steps.push(SkolemStep { hypothesis: h.name.clone(), fresh_symbols: fresh, rewritten: rewritten.clone() });
        hyps.push(Hypothesis { name: h.name.clone(), prop: rewritten });
    }
    let changed = !steps.is_empty();
    let goal = Goal { signature: sig, hypotheses: hyps, target: g.target.clone() };
    (goal, SkolemizationRecord { steps, negated_target_name: neg_name, changed, warnings })
}

/// Convenience: negate then Skolemize.
pub fn preprocess(g: &Goal) -> (Goal, SkolemizationRecord) {
    skolemize_all(&negate_goal(g))
}

/// Is there a quantifier to eliminate at a position reachable through the
/// propositional connectives?
fn needs_skolem(t: &Term, positive: bool) -> bool {
    match t {
        Term::Exists(_, _, b) => positive || needs_skolem(b, positive),
        Term::Forall(_, _, b) => !positive || needs_skolem(b, positive),
        Term::Not(a) => needs_skolem(a, !positive),
        Term::And(a, b) | Term::Or(a, b) => needs_skolem(a, positive) || needs_skolem(b, positive),
        Term::Implies(a, b) => needs_skolem(a, !positive) || needs_skolem(b, positive),
        Term::Iff(a, b) => {
            needs_skolem(a, true) || needs_skolem(a, false) || needs_skolem(b, true) || needs_skolem(b, false)
        }
        _ => false,
    }
}

struct Skolemizer<'a> {
    sig: &'a Signature,
    counter: usize,
    fresh: Vec<(String, SourceType)>,
    error: Option<SkolemError>,
}

impl Skolemizer<'_> {
    fn skolem_term(&mut self, ty: &SourceType, univ: &[(String, SourceType)], safe: bool) -> Term {
        let fty = SourceType::function(univ.iter().map(|(_, t)| t.clone()), ty.clone());
        if !safe && !self.sig.is_inhabited(&fty) && self.error.is_none() {
            self.error = Some(SkolemError::InhabitationUnknown(ty.clone()));
        }
        let name = loop {
            let n = format!("sk{}", self.counter);
            self.counter += 1;
            if !self.sig.is_symbol(&n) && !self.sig.has_type_name(&n) {
                break n;
            }
        };
        self.fresh.push((name.clone(), fty));
        if univ.is_empty() {
            cnst(name)
        } else {
            app(name, univ.iter().map(|(x, _)| var(x.clone())).collect())
        }
    }

    /// A formula equivalent to `t` (given the new symbols) with positive
    /// existentials removed. `safe` holds while the path from the root runs
    /// only through conjunctions and universals.
    fn pos(&mut self, t: &Term, univ: &mut Vec<(String, SourceType)>, safe: bool) -> Term {
        if !needs_skolem(t, true) {
            return t.clone();
        }
        match t {
            Term::Exists(x, ty, b) => {
                let w = self.skolem_term(ty, univ, safe);
                self.pos(&b.subst1(x, &w), univ, safe)
            }
            Term::Forall(x, ty, b) => {
                univ.push((x.clone(), ty.clone()));
                let body = self.pos(b, univ, safe);
                univ.pop();
                Term::Forall(x.clone(), ty.clone(), Box::new(body))
            }
            Term::Not(a) => self.neg(a, univ, safe),
            Term::And(a, b) => and(self.pos(a, univ, safe), self.pos(b, univ, safe)),
            Term::Or(a, b) => or(self.pos(a, univ, false), self.pos(b, univ, false)),
            Term::Implies(a, b) => {
                if needs_skolem(a, false) {
                    or(self.neg(a, univ, false), self.pos(b, univ, false))
                } else {
                    implies((**a).clone(), self.pos(b, univ, false))
                }
            }
            Term::Iff(a, b) => {
                let fwd = implies((**a).clone(), (**b).clone());
                let bwd = implies((**b).clone(), (**a).clone());
                and(self.pos(&fwd, univ, safe), self.pos(&bwd, univ, safe))
            }
            _ => t.clone(),
        }
    }

    /// A formula equivalent to `¬t` with positive existentials removed.
    fn neg(&mut self, t: &Term, univ: &mut Vec<(String, SourceType)>, safe: bool) -> Term {
        if !needs_skolem(t, false) {
            return match t {
                Term::Not(a) => (**a).clone(),
                _ => not(t.clone()),
            };
        }
        match t {
            Term::Forall(x, ty, b) => {
                let w = self.skolem_term(ty, univ, safe);
                self.neg(&b.subst1(x, &w), univ, safe)
            }
            Term::Exists(x, ty, b) => {
                univ.push((x.clone(), ty.clone()));
                let body = self.neg(b, univ, safe);
                univ.pop();
                Term::Forall(x.clone(), ty.clone(), Box::new(body))
            }
            Term::Not(a) => self.pos(a, univ, safe),
            Term::Or(a, b) => and(self.neg(a, univ, safe), self.neg(b, univ, safe)),
            Term::And(a, b) => or(self.neg(a, univ, false), self.neg(b, univ, false)),
            Term::Implies(a, b) => and(self.pos(a, univ, safe), self.neg(b, univ, safe)),
            Term::Iff(a, b) => {
                let l = and((**a).clone(), not((**b).clone()));
                let r = and((**b).clone(), not((**a).clone()));
                or(self.pos(&l, univ, false), self.pos(&r, univ, false))
            }
            _ => not(t.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::logic::print_term;

    const INJECTIVE: &str = "(declare-fun f (Int) Int)
        (hyp h1 (forall ((x Int) (y Int)) (=> (= (f x) (f y)) (= x y))))
        (hyp h2 (exists ((x Int)) (forall ((y Int)) (<= (f x) (f y)))))
        (goal (exists ((x Int)) (forall ((y Int)) (=> (not (= x y)) (< (f x) (f y))))))";

    #[test]
    fn negation_adds_neg_goal() {
        let g = parse_problem("(declare-const n Nat)(goal (<= 0 n))").unwrap();
        let n = negate_goal(&g);
        assert_eq!(n.target, Term::False);
        assert_eq!(print_term(&n.hypothesis("negGoal").unwrap().prop), "(not (<= 0 n))");
        let f = negate_goal(&parse_problem("(goal false)").unwrap());
        assert_eq!(f.hypothesis("negGoal").unwrap().prop, not(Term::False));
    }

    #[test]
    fn injective_minimum_skolem_symbols() {
        let g = parse_problem(INJECTIVE).unwrap();
        let (out, rec) = preprocess(&g);
        assert!(rec.changed);
        assert_eq!(
            rec.symbols(),
            vec![("sk0".into(), SourceType::Int), ("sk1".into(), SourceType::arrow(SourceType::Int, SourceType::Int))]
        );
        assert_eq!(print_term(&out.hypothesis("h2").unwrap().prop), "(forall ((y Int)) (<= (f sk0) (f y)))");
        assert_eq!(
            print_term(&out.hypothesis("negGoal").unwrap().prop),
            "(forall ((x Int)) (not (=> (not (= x (sk1 x))) (< (f x) (f (sk1 x))))))"
        );
        let (again, rec2) = skolemize_all(&out);
        assert!(!rec2.changed);
        assert_eq!(again, out);
    }

    #[test]
    fn unknown_inhabitation_under_disjunction_is_a_warning() {
        let g = parse_problem(
            "(declare-sort A)(declare-fun P (A) Prop)(hyp h (or (exists ((x A)) (P x)) true))(goal false)",
        )
        .unwrap();
        let (out, rec) = skolemize_all(&negate_goal(&g));
        assert_eq!(out.hypothesis("h"), g.hypothesis("h"));
        assert_eq!(rec.warnings.len(), 1);
        assert_eq!(rec.warnings[0].error, SkolemError::InhabitationUnknown(SourceType::Opaque("A".into())));
        assert!(!rec.changed);
    }

    #[test]
    fn top_level_existential_over_opaque_sort_is_fine() {
        let g = parse_problem("(declare-sort A)(declare-fun P (A) Prop)(hyp h (exists ((x A)) (P x)))(goal false)").unwrap();
        let (out, rec) = skolemize_all(&g);
        assert!(rec.warnings.is_empty());
        assert_eq!(print_term(&out.hypothesis("h").unwrap().prop), "(P sk0)");
    }

    #[test]
    fn skolem_names_avoid_signature() {
        let g = parse_problem("(declare-const sk0 Int)(hyp h (exists ((x Int)) (= x sk0)))(goal false)").unwrap();
        let (out, rec) = skolemize_all(&g);
        assert_eq!(rec.symbols()[0].0, "sk1");
        assert_eq!(print_term(&out.hypothesis("h").unwrap().prop), "(= sk1 sk0)");
    }

    #[test]
    fn double_negation_and_iff() {
        let g = parse_problem(
            "(declare-fun P (Int) Prop)(declare-const q Prop)\
             (hyp h1 (not (not (exists ((x Int)) (P x)))))\
             (hyp h2 (iff q (exists ((y Int)) (P y))))(goal false)",
        )
        .unwrap();
        let (out, rec) = skolemize_all(&g);
        assert_eq!(print_term(&out.hypothesis("h1").unwrap().prop), "(P sk0)");
        assert_eq!(
            print_term(&out.hypothesis("h2").unwrap().prop),
            "(and (=> q (P sk1)) (=> (exists ((y Int)) (P y)) q))"
        );
        assert_eq!(rec.steps.len(), 2);
    }
}
