use std::collections::{BTreeSet, HashMap};

use hintsmt::interp::backtranslate_term;
use hintsmt::logic::term::{and, app, bin, cmp, cnst, eq, exists, forall, iff, implies, not, or, var, ArithOp, CmpOp};
use hintsmt::logic::{parse_term, print_term, typecheck, Goal, Hypothesis, Signature, SourceType, Term};
use hintsmt::preprocess::{negate_goal, skolemize_all};
use hintsmt::translate::{translate_goal, translate_term, SymbolMap};
use proptest::prelude::*;

fn u() -> SourceType {
    SourceType::Opaque("U".into())
}

// ---------------------------------------------------------------------------
// Integer formulas over a fixed coercion-free signature.

fn int_signature() -> Signature {
    let mut sig = Signature::default();
    sig.consts.insert("a".into(), SourceType::Int);
    sig.consts.insert("b".into(), SourceType::Int);
    sig.consts.insert("f".into(), SourceType::arrow(SourceType::Int, SourceType::Int));
    sig.consts.insert("g".into(), SourceType::function([SourceType::Int, SourceType::Int], SourceType::Int));
    sig.consts.insert("p".into(), SourceType::arrow(SourceType::Int, SourceType::Prop));
    sig.consts.insert("q".into(), SourceType::Prop);
    sig
}

fn negate(t: Term) -> Term {
    match t {
        Term::IntLit(k) => Term::IntLit(-k),
        t => Term::Neg(Box::new(t)),
    }
}

fn int_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(cnst("a")),
        Just(cnst("b")),
        Just(var("x")),
        Just(var("y")),
        (-4i64..=4).prop_map(Term::IntLit),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| app("f", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| app("g", vec![s, t])),
            (prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul)], inner.clone(), inner.clone())
                .prop_map(|(op, s, t)| bin(op, s, t)),
            inner.clone().prop_map(negate),
            inner.prop_map(|t| Term::Abs(Box::new(t))),
        ]
    })
}

fn int_formula() -> impl Strategy<Value = Term> {
    let cmp_op = prop_oneof![Just(CmpOp::Le), Just(CmpOp::Lt), Just(CmpOp::Ge), Just(CmpOp::Gt)];
    let atom = prop_oneof![
        (cmp_op, int_term(), int_term()).prop_map(|(op, s, t)| cmp(op, s, t)),
        (int_term(), int_term()).prop_map(|(s, t)| eq(s, t)),
        int_term().prop_map(|t| app("p", vec![t])),
        Just(cnst("q")),
    ];
    atom.prop_recursive(3, 10, 2, |inner| {
        let binder = prop_oneof![Just("x"), Just("y")];
        prop_oneof![
            inner.clone().prop_map(not),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| and(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| or(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| implies(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| iff(s, t)),
            (binder.clone(), inner.clone()).prop_map(|(x, t)| forall(x, SourceType::Int, t)),
            (binder, inner).prop_map(|(x, t)| exists(x, SourceType::Int, t)),
        ]
    })
}

/// Close a formula by replacing its free variables with `a`.
fn close(t: Term) -> Term {
    let free: HashMap<String, Term> = t.free_vars().into_iter().map(|x| (x, cnst("a"))).collect();
    t.subst(&free)
}

fn int_goal(hyps: Vec<Term>, target: Term) -> Goal {
    Goal {
        signature: int_signature(),
        hypotheses: hyps.into_iter().enumerate().map(|(i, prop)| Hypothesis { name: format!("h{i}"), prop }).collect(),
        target,
    }
}

// ---------------------------------------------------------------------------
// Formulas over one opaque sort, evaluated in every small finite model.

fn u_term() -> impl Strategy<Value = Term> {
    prop_oneof![Just(var("x")), Just(var("y")), Just(cnst("c"))]
}

fn u_formula() -> impl Strategy<Value = Term> {
    let atom = prop_oneof![
        u_term().prop_map(|t| app("P", vec![t])),
        (u_term(), u_term()).prop_map(|(s, t)| app("R", vec![s, t])),
        (u_term(), u_term()).prop_map(|(s, t)| eq(s, t)),
    ];
    atom.prop_recursive(4, 12, 2, |inner| {
        let binder = prop_oneof![Just("x"), Just("y")];
        prop_oneof![
            inner.clone().prop_map(not),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| and(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| or(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| implies(s, t)),
            (inner.clone(), inner.clone()).prop_map(|(s, t)| iff(s, t)),
            (binder.clone(), inner.clone()).prop_map(|(x, t)| forall(x, u(), t)),
            (binder, inner).prop_map(|(x, t)| exists(x, u(), t)),
        ]
    })
}

fn close_u(t: Term) -> Term {
    let free: HashMap<String, Term> = t.free_vars().into_iter().map(|x| (x, cnst("c"))).collect();
    t.subst(&free)
}

fn u_goal(hyps: Vec<Term>, target: Term) -> Goal {
    let mut sig = Signature::default();
    sig.sorts.push("U".into());
    sig.inhabited.insert(u());
    sig.consts.insert("c".into(), u());
    sig.consts.insert("P".into(), SourceType::arrow(u(), SourceType::Prop));
    sig.consts.insert("R".into(), SourceType::function([u(), u()], SourceType::Prop));
    Goal {
        signature: sig,
        hypotheses: hyps.into_iter().enumerate().map(|(i, prop)| Hypothesis { name: format!("h{i}"), prop }).collect(),
        target,
    }
}

/// One interpreted symbol: a table indexed by its arguments in mixed radix.
struct Table {
    arity: usize,
    range: usize,
    values: Vec<usize>,
}

struct Model {
    size: usize,
    tables: HashMap<String, Table>,
}

impl Model {
    fn lookup(&self, f: &str, args: &[usize]) -> usize {
        let t = &self.tables[f];
        let idx = args.iter().fold(0, |acc, a| acc * self.size + a);
        t.values[idx]
    }

    fn value(&self, t: &Term, env: &mut Vec<(String, usize)>) -> usize {
        match t {
            Term::Var(x) => env.iter().rev().find(|(y, _)| y == x).unwrap().1,
            Term::Const(c) => self.lookup(c, &[]),
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.value(a, env)).collect();
                self.lookup(f, &vals)
            }
            _ => self.holds(t, env) as usize,
        }
    }

    fn holds(&self, t: &Term, env: &mut Vec<(String, usize)>) -> bool {
        match t {
            Term::True => true,
            Term::False => false,
            Term::Not(a) => !self.holds(a, env),
            Term::And(a, b) => self.holds(a, env) && self.holds(b, env),
            Term::Or(a, b) => self.holds(a, env) || self.holds(b, env),
            Term::Implies(a, b) => !self.holds(a, env) || self.holds(b, env),
            Term::Iff(a, b) => self.holds(a, env) == self.holds(b, env),
            Term::Eq(a, b) => self.value(a, env) == self.value(b, env),
            Term::Forall(x, _, b) | Term::Exists(x, _, b) => {
                let want = matches!(t, Term::Forall(..));
                for d in 0..self.size {
                    env.push((x.clone(), d));
                    let r = self.holds(b, env);
                    env.pop();
                    if r != want {
                        return !want;
                    }
                }
                want
            }
            Term::Const(_) | Term::App(..) => self.value(t, env) == 1,
            other => panic!("unexpected term {other:?}"),
        }
    }
}

fn model_count(sig: &Signature, size: usize) -> u128 {
    sig.consts
        .values()
        .map(|ty| {
            let (params, ret) = ty.uncurry();
            let range = if *ret == SourceType::Prop { 2u128 } else { size as u128 };
            range.pow((size as u32).pow(params.len() as u32))
        })
        .product()
}

/// Is there a model with `size` elements satisfying every hypothesis?
fn satisfiable_in(goal: &Goal, size: usize) -> bool {
    let mut tables: HashMap<String, Table> = goal
        .signature
        .consts
        .iter()
        .map(|(name, ty)| {
            let (params, ret) = ty.uncurry();
            let range = if *ret == SourceType::Prop { 2 } else { size };
            let arity = params.len();
            (name.clone(), Table { arity, range, values: vec![0; size.pow(arity as u32)] })
        })
        .collect();
    let names: Vec<String> = tables.keys().cloned().collect();
    loop {
        let m = Model { size, tables };
        if goal.hypotheses.iter().all(|h| m.holds(&h.prop, &mut Vec::new())) {
            return true;
        }
        tables = m.tables;
        // Odometer step over every table entry.
        let mut carried = true;
        'outer: for n in &names {
            let t = tables.get_mut(n).unwrap();
            debug_assert_eq!(t.values.len(), size.pow(t.arity as u32));
            for v in t.values.iter_mut() {
                *v += 1;
                if *v < t.range {
                    carried = false;
                    break 'outer;
                }
                *v = 0;
            }
        }
        if carried {
            return false;
        }
    }
}

fn alpha_eq_goals(a: &Goal, b: &Goal) -> bool {
    a.hypotheses.len() == b.hypotheses.len()
        && a.hypotheses.iter().zip(&b.hypotheses).all(|(x, y)| x.name == y.name && x.prop.alpha_eq(&y.prop))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_terms_parse_back(t in int_formula().prop_map(close)) {
        let sig = int_signature();
        prop_assert_eq!(typecheck(&sig, &t), Ok(SourceType::Prop));
        let text = print_term(&t);
        let back = parse_term(&sig, &text, Some(&SourceType::Prop)).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} reparsed as {}", text, print_term(&back));
    }

    #[test]
    fn coercion_free_terms_survive_translation(t in int_formula().prop_map(close)) {
        let m = SymbolMap::new(&int_signature()).unwrap();
        let smt = translate_term(&m, &t).unwrap();
        let back = backtranslate_term(&m, &smt, &SourceType::Prop).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} came back as {}", print_term(&t), print_term(&back));
    }

    #[test]
    fn translation_is_deterministic(
        hyps in prop::collection::vec(int_formula().prop_map(close), 0..3),
        target in int_formula().prop_map(close),
    ) {
        let g = int_goal(hyps, target);
        let (first, _) = translate_goal(&skolemize_all(&negate_goal(&g)).0).unwrap();
        let (second, _) = translate_goal(&skolemize_all(&negate_goal(&g)).0).unwrap();
        prop_assert_eq!(first.text(), second.text());
    }

    #[test]
    fn skolemization_is_idempotent_and_fresh(
        hyps in prop::collection::vec(int_formula().prop_map(close), 0..3),
        target in int_formula().prop_map(close),
    ) {
        let g = negate_goal(&int_goal(hyps, target));
        let (once, rec) = skolemize_all(&g);
        prop_assert!(rec.warnings.is_empty());
        let (twice, rec2) = skolemize_all(&once);
        prop_assert!(!rec2.changed);
        prop_assert_eq!(&twice, &once);

        let original: BTreeSet<String> = g.signature.symbol_names().into_iter().collect();
        let fresh: Vec<String> = rec.symbols().into_iter().map(|(n, _)| n).collect();
        let distinct: BTreeSet<&String> = fresh.iter().collect();
        prop_assert_eq!(distinct.len(), fresh.len());
        for n in &fresh {
            prop_assert!(!original.contains(n), "{} clashes with the signature", n);
        }
        for h in &once.hypotheses {
            prop_assert_eq!(typecheck(&once.signature, &h.prop), Ok(SourceType::Prop));
        }
    }

    #[test]
    fn skolemization_preserves_finite_satisfiability(
        hyps in prop::collection::vec(u_formula().prop_map(close_u), 0..3),
        target in u_formula().prop_map(close_u),
    ) {
        let before = negate_goal(&u_goal(hyps, target));
        let (after, rec) = skolemize_all(&before);
        prop_assert!(rec.warnings.is_empty());
        prop_assume!(model_count(&after.signature, 2) <= 1 << 16);
        for size in 1..=2 {
            prop_assert_eq!(
                satisfiable_in(&before, size),
                satisfiable_in(&after, size),
                "size {}: {:?}",
                size,
                after.hypotheses.iter().map(|h| print_term(&h.prop)).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn skolemization_only_renames_when_nothing_to_eliminate(
        hyps in prop::collection::vec(u_formula().prop_map(close_u), 1..3),
    ) {
        let g = u_goal(hyps, Term::False);
        let (out, rec) = skolemize_all(&g);
        if !rec.changed {
            prop_assert!(alpha_eq_goals(&out, &g));
            prop_assert_eq!(out.signature, g.signature);
        }
    }
}

#[test]
fn finite_model_search_sees_domain_size() {
    let px = app("P", vec![var("x")]);
    let both = and(exists("x", u(), px.clone()), exists("x", u(), not(px)));
    let g = u_goal(vec![both], Term::False);
    assert!(!satisfiable_in(&g, 1));
    assert!(satisfiable_in(&g, 2));
    let (sk, _) = skolemize_all(&g);
    assert_eq!(sk.signature.consts.len(), 5);
    assert!(!satisfiable_in(&sk, 1));
    assert!(satisfiable_in(&sk, 2));
}
