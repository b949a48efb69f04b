//! Sorted syntactic unification and matching.

use super::terms::{Lit, PTerm, Subst, Symbols};

fn walk<'a>(t: &'a PTerm, s: &'a Subst) -> &'a PTerm {
    let mut t = t;
    while let PTerm::Var(v, _) = t {
        match s.get(v) {
            Some(b) => t = b,
            None => break,
        }
    }
    t
}

/// Apply a (triangular) substitution all the way down.
pub fn apply(t: &PTerm, s: &Subst) -> PTerm {
    match walk(t, s) {
        PTerm::Var(v, so) => PTerm::Var(*v, *so),
        PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| apply(a, s)).collect()),
    }
}

pub fn apply_lit(l: &Lit, s: &Subst) -> Lit {
    l.map(&mut |t| apply(t, s))
}

fn occurs(v: u32, t: &PTerm, s: &Subst) -> bool {
    match walk(t, s) {
        PTerm::Var(x, _) => *x == v,
        PTerm::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
    }
}

/// Extend `s` to a unifier of `a` and `b`; on failure `s` may be left extended.
pub fn unify(syms: &Symbols, a: &PTerm, b: &PTerm, s: &mut Subst) -> bool {
    let a = walk(a, s).clone();
    let b = walk(b, s).clone();
    match (&a, &b) {
        (PTerm::Var(x, sx), PTerm::Var(y, sy)) => {
            if x == y {
                return true;
            }
            if sx != sy {
                return false;
            }
            s.insert(*x, b.clone());
            true
        }
        (PTerm::Var(x, sx), t) | (t, PTerm::Var(x, sx)) => {
            if syms.sort_of(t) != *sx || occurs(*x, t, s) {
                return false;
            }
            s.insert(*x, t.clone());
            true
        }
        (PTerm::App(f, fa), PTerm::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| unify(syms, x, y, s))
        }
    }
}

pub fn unifier(syms: &Symbols, a: &PTerm, b: &PTerm) -> Option<Subst> {
    let mut s = Subst::new();
    unify(syms, a, b, &mut s).then_some(s)
}

/// One-way matching: bind variables of `pattern` so that it equals `target`.
pub fn matches(syms: &Symbols, pattern: &PTerm, target: &PTerm, s: &mut Subst) -> bool {
    match pattern {
        PTerm::Var(x, sx) => match s.get(x) {
            Some(b) => b == target,
            None => {
                if syms.sort_of(target) != *sx {
                    return false;
                }
                s.insert(*x, target.clone());
                true
            }
        },
        PTerm::App(f, fa) => match target {
            PTerm::App(g, ga) => f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(p, t)| matches(syms, p, t, s)),
            PTerm::Var(..) => false,
        },
    }
}

/// Flatten a triangular substitution into one whose bindings are fully applied.
pub fn resolve(s: &Subst) -> Subst {
    s.iter().map(|(v, t)| (*v, apply(t, s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unify_and_match() {
        let mut syms = Symbols::new();
        let i = syms.sort("Int");
        let n = syms.sort("Nat");
        let f = syms.intern("f", "f", vec![i, i], i, false);
        let a = syms.intern("a", "a", vec![], i, false);
        let x = PTerm::Var(0, i);
        let y = PTerm::Var(1, i);
        let t1 = PTerm::App(f, vec![x.clone(), PTerm::constant(a)]);
        let t2 = PTerm::App(f, vec![y.clone(), y.clone()]);
        let s = unifier(&syms, &t1, &t2).unwrap();
        assert_eq!(apply(&t1, &s), apply(&t2, &s));
        assert_eq!(apply(&x, &s), PTerm::constant(a));
        assert!(unifier(&syms, &x, &PTerm::App(f, vec![x.clone(), x.clone()])).is_none());
        assert!(unifier(&syms, &PTerm::Var(2, n), &PTerm::constant(a)).is_none());
        let mut m = Subst::new();
        assert!(!matches(&syms, &t1, &t2, &mut m));
        let mut m = Subst::new();
        assert!(matches(&syms, &t2, &PTerm::App(f, vec![PTerm::constant(a), PTerm::constant(a)]), &mut m));
    }
}
