use std::collections::{BTreeSet, HashMap, HashSet};

use super::types::{Signature, SourceType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "div",
            ArithOp::Mod => "mod",
        }
    }

    pub fn from_symbol(s: &str) -> Option<ArithOp> {
        Some(match s {
            "+" => ArithOp::Add,
            "-" => ArithOp::Sub,
            "*" => ArithOp::Mul,
            "div" => ArithOp::Div,
            "mod" => ArithOp::Mod,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        Some(match s {
            "<=" => CmpOp::Le,
            "<" => CmpOp::Lt,
            ">=" => CmpOp::Ge,
            ">" => CmpOp::Gt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchArm {
    pub ctor: String,
    pub binders: Vec<String>,
    pub body: Term,
}

/// Terms and formulas of the first-order source logic.
///
/// Whether `Bin(Sub, ..)` is truncated natural subtraction or integer
/// subtraction is decided by the types of its operands.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A variable bound by an enclosing quantifier or match arm.
    Var(String),
    /// A nullary symbol from the signature.
    Const(String),
    NatLit(u64),
    IntLit(i64),
    /// A fully applied function, constructor or projection.
    App(String, Vec<Term>),
    Forall(String, SourceType, Box<Term>),
    Exists(String, SourceType, Box<Term>),
    True,
    False,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Iff(Box<Term>, Box<Term>),
    Eq(Box<Term>, Box<Term>),
    Bin(ArithOp, Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Abs(Box<Term>),
    Cmp(CmpOp, Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    Match(Box<Term>, Vec<MatchArm>),
    CoerceNatToInt(Box<Term>),
    IntNatAbs(Box<Term>),
}

pub fn not(t: Term) -> Term {
    Term::Not(Box::new(t))
}
pub fn and(a: Term, b: Term) -> Term {
    Term::And(Box::new(a), Box::new(b))
}
pub fn or(a: Term, b: Term) -> Term {
    Term::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Term, b: Term) -> Term {
    Term::Implies(Box::new(a), Box::new(b))
}
pub fn iff(a: Term, b: Term) -> Term {
    Term::Iff(Box::new(a), Box::new(b))
}
pub fn eq(a: Term, b: Term) -> Term {
    Term::Eq(Box::new(a), Box::new(b))
}
pub fn bin(op: ArithOp, a: Term, b: Term) -> Term {
    Term::Bin(op, Box::new(a), Box::new(b))
}
pub fn cmp(op: CmpOp, a: Term, b: Term) -> Term {
    Term::Cmp(op, Box::new(a), Box::new(b))
}
pub fn forall(x: impl Into<String>, ty: SourceType, body: Term) -> Term {
    Term::Forall(x.into(), ty, Box::new(body))
}
pub fn exists(x: impl Into<String>, ty: SourceType, body: Term) -> Term {
    Term::Exists(x.into(), ty, Box::new(body))
}
pub fn var(x: impl Into<String>) -> Term {
    Term::Var(x.into())
}
pub fn cnst(x: impl Into<String>) -> Term {
    Term::Const(x.into())
}
pub fn app(f: impl Into<String>, args: Vec<Term>) -> Term {
    Term::App(f.into(), args)
}
pub fn ofnat(t: Term) -> Term {
    Term::CoerceNatToInt(Box::new(t))
}
pub fn natabs(t: Term) -> Term {
    Term::IntNatAbs(Box::new(t))
}

/// Fold a non-empty list with a binary connective, left-nested.
pub fn fold_left(items: Vec<Term>, f: fn(Term, Term) -> Term, empty: Term) -> Term {
    let mut it = items.into_iter();
    match it.next() {
        None => empty,
        Some(first) => it.fold(first, f),
    }
}

impl Term {
    /// Immediate subterms, not descending into binders' types.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) | Term::NatLit(_) | Term::IntLit(_) | Term::True | Term::False => vec![],
            Term::App(_, args) => args.iter().collect(),
            Term::Forall(_, _, b) | Term::Exists(_, _, b) => vec![b],
            Term::Not(a) | Term::Neg(a) | Term::Abs(a) | Term::CoerceNatToInt(a) | Term::IntNatAbs(a) => vec![a],
            Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Iff(a, b)
            | Term::Eq(a, b)
            | Term::Bin(_, a, b)
            | Term::Cmp(_, a, b) => vec![a, b],
            Term::Ite(c, a, b) => vec![c, a, b],
            Term::Match(s, arms) => {
                let mut v = vec![s.as_ref()];
                v.extend(arms.iter().map(|a| &a.body));
                v
            }
        }
    }

    /// Rebuild this node with `f` applied to each immediate subterm.
    pub fn map_children(&self, f: &mut impl FnMut(&Term) -> Term) -> Term {
        let b = |t: &Term, f: &mut dyn FnMut(&Term) -> Term| Box::new(f(t));
        match self {
            Term::Var(_) | Term::Const(_) | Term::NatLit(_) | Term::IntLit(_) | Term::True | Term::False => self.clone(),
            Term::App(n, args) => Term::App(n.clone(), args.iter().map(&mut *f).collect()),
            Term::Forall(x, t, body) => Term::Forall(x.clone(), t.clone(), b(body, f)),
            Term::Exists(x, t, body) => Term::Exists(x.clone(), t.clone(), b(body, f)),
            Term::Not(a) => Term::Not(b(a, f)),
            Term::Neg(a) => Term::Neg(b(a, f)),
            Term::Abs(a) => Term::Abs(b(a, f)),
            Term::CoerceNatToInt(a) => Term::CoerceNatToInt(b(a, f)),
            Term::IntNatAbs(a) => Term::IntNatAbs(b(a, f)),
            Term::And(x, y) => Term::And(b(x, f), b(y, f)),
            Term::Or(x, y) => Term::Or(b(x, f), b(y, f)),
            Term::Implies(x, y) => Term::Implies(b(x, f), b(y, f)),
            Term::Iff(x, y) => Term::Iff(b(x, f), b(y, f)),
            Term::Eq(x, y) => Term::Eq(b(x, f), b(y, f)),
            Term::Bin(op, x, y) => Term::Bin(*op, b(x, f), b(y, f)),
            Term::Cmp(op, x, y) => Term::Cmp(*op, b(x, f), b(y, f)),
            Term::Ite(c, x, y) => Term::Ite(b(c, f), b(x, f), b(y, f)),
            Term::Match(s, arms) => Term::Match(
                b(s, f),
                arms.iter()
                    .map(|a| MatchArm { ctor: a.ctor.clone(), binders: a.binders.clone(), body: f(&a.body) })
                    .collect(),
            ),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    /// Free variables, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Forall(x, _, b) | Term::Exists(x, _, b) => {
                bound.push(x.clone());
                b.free_vars_into(bound, out);
                bound.pop();
            }
            Term::Match(s, arms) => {
                s.free_vars_into(bound, out);
                for a in arms {
                    let n = a.binders.len();
                    bound.extend(a.binders.iter().cloned());
                    a.body.free_vars_into(bound, out);
                    bound.truncate(bound.len() - n);
                }
            }
            _ => {
                for c in self.children() {
                    c.free_vars_into(bound, out);
                }
            }
        }
    }

    /// All symbol names (constants and function heads) occurring in the term.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.symbols_into(&mut out);
        out
    }

    fn symbols_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(f, _) => {
                out.insert(f.clone());
            }
            Term::Match(_, arms) => {
                for a in arms {
                    out.insert(a.ctor.clone());
                }
            }
            _ => {}
        }
        for c in self.children() {
            c.symbols_into(out);
        }
    }

    /// Names of every binder in the term.
    pub fn binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.binders_into(&mut out);
        out
    }

    fn binders_into(&self, out: &mut Vec<String>) {
        match self {
            Term::Forall(x, _, _) | Term::Exists(x, _, _) => out.push(x.clone()),
            Term::Match(_, arms) => {
                for a in arms {
                    out.extend(a.binders.iter().cloned());
                }
            }
            _ => {}
        }
        for c in self.children() {
            c.binders_into(out);
        }
    }

    /// Substitute free occurrences of variables. Substituted terms are assumed
    /// not to mention binders of `self` (binders are unique after
    /// alpha-normalization), so no renaming is performed.
    pub fn subst(&self, map: &HashMap<String, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Forall(x, ty, b) | Term::Exists(x, ty, b) if map.contains_key(x) => {
                let mut inner = map.clone();
                inner.remove(x);
                let body = Box::new(b.subst(&inner));
                if matches!(self, Term::Forall(..)) {
                    Term::Forall(x.clone(), ty.clone(), body)
                } else {
                    Term::Exists(x.clone(), ty.clone(), body)
                }
            }
            Term::Match(s, arms) => Term::Match(
                Box::new(s.subst(map)),
                arms.iter()
                    .map(|a| {
                        let mut inner = map.clone();
                        for x in &a.binders {
                            inner.remove(x);
                        }
                        MatchArm { ctor: a.ctor.clone(), binders: a.binders.clone(), body: a.body.subst(&inner) }
                    })
                    .collect(),
            ),
            _ => self.map_children(&mut |c| c.subst(map)),
        }
    }

    pub fn subst1(&self, x: &str, t: &Term) -> Term {
        let mut m = HashMap::new();
        m.insert(x.to_string(), t.clone());
        self.subst(&m)
    }

    /// Does this formula contain a quantifier anywhere?
    pub fn has_quantifier(&self) -> bool {
        matches!(self, Term::Forall(..) | Term::Exists(..)) || self.children().into_iter().any(Term::has_quantifier)
    }

    /// Rename binders so that every binder in the term is distinct and none
    /// collides with a signature symbol or with `reserved`. A binder keeps its
    /// name when possible; otherwise it gets the first free `name_k`.
    pub fn alpha_normalize(&self, sig: &Signature, reserved: &HashSet<String>) -> Term {
        let mut used: HashSet<String> = reserved.clone();
        for v in self.free_vars() {
            used.insert(v);
        }
        self.alpha_rec(sig, &mut used, &HashMap::new())
    }

    fn alpha_rec(&self, sig: &Signature, used: &mut HashSet<String>, ren: &HashMap<String, String>) -> Term {
        let pick = |x: &str, used: &mut HashSet<String>| -> String {
            let name = sig.fresh_name(x, &|n| used.contains(n));
            used.insert(name.clone());
            name
        };
        match self {
            Term::Var(x) => Term::Var(ren.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Forall(x, ty, b) | Term::Exists(x, ty, b) => {
                let nx = pick(x, used);
                let mut inner = ren.clone();
                inner.insert(x.clone(), nx.clone());
                let body = Box::new(b.alpha_rec(sig, used, &inner));
                if matches!(self, Term::Forall(..)) {
                    Term::Forall(nx, ty.clone(), body)
                } else {
                    Term::Exists(nx, ty.clone(), body)
                }
            }
            Term::Match(s, arms) => {
                let s2 = s.alpha_rec(sig, used, ren);
                let arms2 = arms
                    .iter()
                    .map(|a| {
                        let mut inner = ren.clone();
                        let binders: Vec<String> = a
                            .binders
                            .iter()
                            .map(|x| {
                                let nx = pick(x, used);
                                inner.insert(x.clone(), nx.clone());
                                nx
                            })
                            .collect();
                        MatchArm { ctor: a.ctor.clone(), binders, body: a.body.alpha_rec(sig, used, &inner) }
                    })
                    .collect();
                Term::Match(Box::new(s2), arms2)
            }
            _ => self.map_children(&mut |c| c.alpha_rec(sig, used, ren)),
        }
    }

    /// Alpha-equivalence: equal up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq_rec(self, other, &mut Vec::new())
    }
}

fn alpha_eq_rec(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Term::Forall(x, tx, bx), Term::Forall(y, ty, by)) | (Term::Exists(x, tx, bx), Term::Exists(y, ty, by)) => {
            if tx != ty {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_eq_rec(bx, by, env);
            env.pop();
            r
        }
        (Term::Match(s1, a1), Term::Match(s2, a2)) => {
            if !alpha_eq_rec(s1, s2, env) || a1.len() != a2.len() {
                return false;
            }
            a1.iter().zip(a2).all(|(m1, m2)| {
                if m1.ctor != m2.ctor || m1.binders.len() != m2.binders.len() {
                    return false;
                }
                let n = m1.binders.len();
                env.extend(m1.binders.iter().cloned().zip(m2.binders.iter().cloned()));
                let r = alpha_eq_rec(&m1.body, &m2.body, env);
                env.truncate(env.len() - n);
                r
            })
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_rec(x, y, env))
        }
        (Term::Bin(o1, ..), Term::Bin(o2, ..)) if o1 != o2 => false,
        (Term::Cmp(o1, ..), Term::Cmp(o2, ..)) if o1 != o2 => false,
        _ => {
            if std::mem::discriminant(a) != std::mem::discriminant(b) {
                return false;
            }
            match (a, b) {
                (Term::Const(x), Term::Const(y)) => x == y,
                (Term::NatLit(x), Term::NatLit(y)) => x == y,
                (Term::IntLit(x), Term::IntLit(y)) => x == y,
                _ => {
                    let (ca, cb) = (a.children(), b.children());
                    ca.len() == cb.len() && ca.into_iter().zip(cb).all(|(x, y)| alpha_eq_rec(x, y, env))
                }
            }
        }
    }
}

/// A named hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub prop: Term,
}

/// A goal `hypotheses ⊢ target` over a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub signature: Signature,
    pub hypotheses: Vec<Hypothesis>,
    pub target: Term,
}

impl Goal {
    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_eq_respects_binding_structure() {
        let a = forall("x", SourceType::Int, eq(var("x"), var("x")));
        let b = forall("y", SourceType::Int, eq(var("y"), var("y")));
        let c = forall("y", SourceType::Int, eq(var("y"), var("x")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        let d = forall("y", SourceType::Nat, eq(var("y"), var("y")));
        assert!(!a.alpha_eq(&d));
    }

    #[test]
    fn alpha_normalize_makes_binders_unique() {
        let t = and(
            forall("x", SourceType::Int, cmp(CmpOp::Le, var("x"), Term::IntLit(0))),
            exists("x", SourceType::Int, cmp(CmpOp::Le, var("x"), Term::IntLit(0))),
        );
        let mut sig = Signature::default();
        sig.consts.insert("x_1".into(), SourceType::Int);
        let n = t.alpha_normalize(&sig, &HashSet::new());
        let b = n.binders();
        assert_eq!(b, vec!["x".to_string(), "x_2".to_string()]);
        assert!(n.alpha_eq(&t));
    }

    #[test]
    fn subst_stops_at_shadowing_binder() {
        let t = and(cmp(CmpOp::Le, var("x"), var("y")), forall("x", SourceType::Int, eq(var("x"), var("y"))));
        let s = t.subst1("x", &cnst("c"));
        assert_eq!(
            s,
            and(cmp(CmpOp::Le, cnst("c"), var("y")), forall("x", SourceType::Int, eq(var("x"), var("y"))))
        );
        assert_eq!(t.free_vars(), vec!["x".to_string(), "y".to_string()]);
    }
}
