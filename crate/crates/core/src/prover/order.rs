//! Knuth-Bendix ordering with unit weights.
//!
//! Precedence follows declaration order, except that Skolem symbols are
//! above every other symbol.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::terms::{Lit, PTerm, Sym, Symbols};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

fn precedence(syms: &Symbols, f: Sym) -> (bool, Sym) {
    (syms.info(f).skolem, f)
}

fn stats(t: &PTerm, vars: &mut HashMap<u32, i64>, sign: i64) -> usize {
    match t {
        PTerm::Var(v, _) => {
            *vars.entry(*v).or_default() += sign;
            1
        }
        PTerm::App(_, args) => 1 + args.iter().map(|a| stats(a, vars, sign)).sum::<usize>(),
    }
}

pub fn kbo(syms: &Symbols, s: &PTerm, t: &PTerm) -> Cmp {
    if s == t {
        return Cmp::Equal;
    }
    let mut balance = HashMap::new();
    let ws = stats(s, &mut balance, 1);
    let wt = stats(t, &mut balance, -1);
    let s_covers = balance.values().all(|&c| c >= 0);
    let t_covers = balance.values().all(|&c| c <= 0);
    let greater = if s_covers { Cmp::Greater } else { Cmp::Incomparable };
    let less = if t_covers { Cmp::Less } else { Cmp::Incomparable };
    match ws.cmp(&wt) {
        Ordering::Greater => greater,
        Ordering::Less => less,
        Ordering::Equal => match (s, t) {
            (PTerm::App(f, fa), PTerm::App(g, ga)) => {
                if f != g {
                    return if precedence(syms, *f) > precedence(syms, *g) { greater } else { less };
                }
                for (a, b) in fa.iter().zip(ga) {
                    match kbo(syms, a, b) {
                        Cmp::Equal => continue,
                        Cmp::Greater => return greater,
                        Cmp::Less => return less,
                        Cmp::Incomparable => return Cmp::Incomparable,
                    }
                }
                Cmp::Equal
            }
            _ => Cmp::Incomparable,
        },
    }
}

/// Literals as multisets of terms: `s = t` is {s, t}, `s != t` is {s, s, t, t}.
fn lit_terms(l: &Lit) -> Vec<&PTerm> {
    if l.pos {
        vec![&l.lhs, &l.rhs]
    } else {
        vec![&l.lhs, &l.lhs, &l.rhs, &l.rhs]
    }
}

fn multiset_cmp(syms: &Symbols, mut a: Vec<&PTerm>, mut b: Vec<&PTerm>) -> Cmp {
    let mut i = 0;
    while i < a.len() {
        if let Some(j) = b.iter().position(|y| *y == a[i]) {
            a.swap_remove(i);
            b.swap_remove(j);
        } else {
            i += 1;
        }
    }
    if a.is_empty() && b.is_empty() {
        return Cmp::Equal;
    }
    let dominates = |x: &[&PTerm], y: &[&PTerm], want: Cmp| {
        y.iter().all(|t| x.iter().any(|s| kbo(syms, s, t) == want))
    };
    if dominates(&a, &b, Cmp::Greater) {
        Cmp::Greater
    } else if dominates(&b, &a, Cmp::Greater) {
        Cmp::Less
    } else {
        Cmp::Incomparable
    }
}

pub fn lit_cmp(syms: &Symbols, a: &Lit, b: &Lit) -> Cmp {
    multiset_cmp(syms, lit_terms(a), lit_terms(b))
}

/// Is literal `i` not smaller than any other literal of the clause?
pub fn is_maximal(syms: &Symbols, lits: &[Lit], i: usize) -> bool {
    lits.iter().enumerate().all(|(j, l)| j == i || lit_cmp(syms, l, &lits[i]) != Cmp::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::terms::Symbols;

    fn setup() -> (Symbols, Sym, Sym, Sym, Sym) {
        let mut s = Symbols::new();
        let i = s.sort("Int");
        let a = s.intern("a", "a", vec![], i, false);
        let b = s.intern("b", "b", vec![], i, false);
        let f = s.intern("f", "f", vec![i], i, false);
        let sk = s.intern("sk0", "sk0", vec![], i, true);
        (s, a, b, f, sk)
    }

    #[test]
    fn weight_then_precedence() {
        let (s, a, b, f, sk) = setup();
        let fa = PTerm::App(f, vec![PTerm::constant(a)]);
        assert_eq!(kbo(&s, &fa, &PTerm::constant(a)), Cmp::Greater);
        assert_eq!(kbo(&s, &PTerm::constant(b), &PTerm::constant(a)), Cmp::Greater);
        assert_eq!(kbo(&s, &PTerm::constant(sk), &PTerm::constant(b)), Cmp::Greater);
        assert_eq!(kbo(&s, &PTerm::constant(a), &PTerm::top()), Cmp::Greater);
    }

    #[test]
    fn variable_condition() {
        let (s, a, _, f, _) = setup();
        let x = PTerm::Var(0, 1);
        let y = PTerm::Var(1, 1);
        let fx = PTerm::App(f, vec![x.clone()]);
        assert_eq!(kbo(&s, &fx, &x), Cmp::Greater);
        assert_eq!(kbo(&s, &fx, &y), Cmp::Incomparable);
        assert_eq!(kbo(&s, &x, &PTerm::constant(a)), Cmp::Incomparable);
    }
}
