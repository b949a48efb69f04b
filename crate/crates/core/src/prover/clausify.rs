//! Clause normal form for source propositions.
//!
//! Term-level `ite` and `match` are lifted to the enclosing atom, the result
//! is put in negation normal form, existentials are Skolemized over the
//! enclosing universals, and the matrix is distributed into clauses. A
//! disjunction whose naive product more than doubles the clause count gets
//! a definition predicate for its larger side instead.

use std::collections::BTreeMap;

use thiserror::Error;

use super::terms::{normalize, Lit, PTerm, Sort, Symbols, BOOL};
use crate::logic::term::{self, ArithOp, MatchArm, Term};
use crate::logic::typecheck::type_of;
use crate::logic::{Signature, SourceType, TypeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClausifyError {
    #[error("higher-order construct: {0}")]
    HigherOrder(String),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A clause together with the name of the proposition it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputClause {
    pub name: String,
    pub lits: Vec<Lit>,
}

#[derive(Clone, Debug)]
enum F {
    True,
    False,
    Lit(Lit),
    And(Vec<F>),
    Or(Vec<F>),
    All(u32, Sort, Box<F>),
    Ex(u32, Sort, Box<F>),
}

pub struct Clausifier<'a> {
    sig: &'a Signature,
    pub syms: &'a mut Symbols,
    next_var: u32,
    next_bound: usize,
}

/// Prover sort name for a first-order source type.
pub fn sort_name(ty: &SourceType) -> Option<String> {
    match ty {
        SourceType::Nat => Some("Nat".into()),
        SourceType::Int => Some("Int".into()),
        SourceType::Data(n) | SourceType::Opaque(n) => Some(n.clone()),
        _ => None,
    }
}

fn type_prefix(ty: &SourceType) -> &'static str {
    if *ty == SourceType::Nat {
        "Nat"
    } else {
        "Int"
    }
}

impl<'a> Clausifier<'a> {
    pub fn new(sig: &'a Signature, syms: &'a mut Symbols) -> Self {
        Clausifier { sig, syms, next_var: 0, next_bound: 0 }
    }

    fn sort(&mut self, ty: &SourceType) -> Result<Sort, ClausifyError> {
        match ty {
            SourceType::Prop => Ok(BOOL),
            _ => match sort_name(ty) {
                Some(n) => Ok(self.syms.sort(&n)),
                None => Err(ClausifyError::HigherOrder(format!("value of type {ty}"))),
            },
        }
    }

    /// Declare a signature symbol with its sorts.
    fn symbol(&mut self, name: &str) -> Result<(u32, SourceType), ClausifyError> {
        let (_, ty) = self.sig.lookup(name).ok_or_else(|| TypeError::Unbound(name.to_string()))?;
        let (params, ret) = ty.uncurry();
        let args = params.iter().map(|p| self.sort(p)).collect::<Result<Vec<_>, _>>()?;
        let sort = self.sort(ret)?;
        Ok((self.syms.intern(name, name, args, sort, false), ret.clone()))
    }

    fn builtin(&mut self, key: &str, display: &str, args: &[SourceType], ret: &SourceType) -> Result<u32, ClausifyError> {
        let a = args.iter().map(|t| self.sort(t)).collect::<Result<Vec<_>, _>>()?;
        let r = self.sort(ret)?;
        Ok(self.syms.intern(key, display, a, r, false))
    }

    fn fresh_symbol(&mut self, prefix: &str, args: Vec<Sort>, sort: Sort, skolem: bool) -> u32 {
        let key = format!("${prefix}{}", self.syms.syms.len());
        self.syms.intern(&key, &key, args, sort, skolem)
    }

    pub fn clausify(&mut self, name: &str, prop: &Term) -> Result<Vec<InputClause>, ClausifyError> {
        self.next_var = 0;
        let mut env = Env::default();
        let f = self.nnf(prop, true, &mut env)?;
        let f = self.skolemize(f, &mut Vec::new());
        let mut defs = Vec::new();
        let clauses = self.cnf(&f, &mut defs);
        let mut out: Vec<InputClause> = Vec::new();
        for lits in defs.into_iter().chain(clauses) {
            if lits.iter().any(|l| l.pos && l.lhs == l.rhs) {
                continue;
            }
            out.push(InputClause { name: name.to_string(), lits: normalize(&lits) });
        }
        Ok(out)
    }

    fn nnf(&mut self, t: &Term, pos: bool, env: &mut Env) -> Result<F, ClausifyError> {
        let both = |s: &mut Self, a: &Term, pa: bool, b: &Term, pb: bool, env: &mut Env| -> Result<Vec<F>, ClausifyError> {
            Ok(vec![s.nnf(a, pa, env)?, s.nnf(b, pb, env)?])
        };
        Ok(match t {
            Term::True => if pos { F::True } else { F::False },
            Term::False => if pos { F::False } else { F::True },
            Term::Not(a) => self.nnf(a, !pos, env)?,
            Term::And(a, b) => {
                let v = both(self, a, pos, b, pos, env)?;
                if pos { F::And(v) } else { F::Or(v) }
            }
            Term::Or(a, b) => {
                let v = both(self, a, pos, b, pos, env)?;
                if pos { F::Or(v) } else { F::And(v) }
            }
            Term::Implies(a, b) => {
                let v = both(self, a, !pos, b, pos, env)?;
                if pos { F::Or(v) } else { F::And(v) }
            }
            Term::Iff(a, b) => {
                let l = F::Or(both(self, a, false, b, pos, env)?);
                let r = F::Or(both(self, a, true, b, !pos, env)?);
                F::And(vec![l, r])
            }
            Term::Ite(c, a, b) if self.is_prop(t, env)? => {
                let l = F::Or(both(self, c, false, a, pos, env)?);
                let r = F::Or(both(self, c, true, b, pos, env)?);
                F::And(vec![l, r])
            }
            Term::Match(..) if self.is_prop(t, env)? => {
                let lifted = self.lift_at(t, t, env)?;
                self.nnf(&lifted, pos, env)?
            }
            Term::Forall(x, ty, body) | Term::Exists(x, ty, body) => {
                if ty.is_arrow() || *ty == SourceType::Prop {
                    return Err(ClausifyError::HigherOrder(format!("quantifier over {ty}")));
                }
                let sort = self.sort(ty)?;
                let v = self.next_var;
                self.next_var += 1;
                env.push(x.clone(), ty.clone(), PTerm::Var(v, sort));
                let inner = self.nnf(body, pos, env);
                env.pop();
                let inner = Box::new(inner?);
                let universal = matches!(t, Term::Forall(..)) == pos;
                if universal { F::All(v, sort, inner) } else { F::Ex(v, sort, inner) }
            }
            _ => {
                if let Some(lifted) = self.lift(t, env)? {
                    return self.nnf(&lifted, pos, env);
                }
                self.atom(t, pos, env)?
            }
        })
    }

    fn is_prop(&self, t: &Term, env: &Env) -> Result<bool, ClausifyError> {
        let mut tys = env.types.clone();
        Ok(type_of(self.sig, &mut tys, t)? == SourceType::Prop)
    }

    /// Rewrite an atom containing a term-level `ite` or `match` into an
    /// equivalent formula without it.
    fn lift(&mut self, atom: &Term, env: &Env) -> Result<Option<Term>, ClausifyError> {
        let Some(sub) = find_liftable(atom, true) else { return Ok(None) };
        self.lift_at(atom, &sub, env).map(Some)
    }

    fn lift_at(&mut self, atom: &Term, sub: &Term, env: &Env) -> Result<Term, ClausifyError> {
        Ok(match sub {
            Term::Ite(c, a, b) => {
                let pa = replace(atom, sub, a);
                let pb = replace(atom, sub, b);
                term::and(term::implies((**c).clone(), pa), term::implies(term::not((**c).clone()), pb))
            }
            Term::Match(s, arms) => {
                let mut tys = env.types.clone();
                let SourceType::Data(d) = type_of(self.sig, &mut tys, s)? else {
                    return Err(ClausifyError::Unsupported("match on a non-datatype".into()));
                };
                let decl = self.sig.datatype(&d).unwrap().clone();
                let mut parts = Vec::new();
                for MatchArm { ctor, binders, body } in arms {
                    let (_, c) = decl.constructor(ctor).unwrap();
                    let fresh: Vec<String> = binders
                        .iter()
                        .map(|_| {
                            self.next_bound += 1;
                            format!("$m{}", self.next_bound)
                        })
                        .collect();
                    let mut body = body.clone();
                    for (b, f) in binders.iter().zip(&fresh) {
                        body = body.subst1(b, &term::var(f.clone()));
                    }
                    let value = if fresh.is_empty() {
                        term::cnst(ctor.clone())
                    } else {
                        term::app(ctor.clone(), fresh.iter().map(|f| term::var(f.clone())).collect())
                    };
                    let case = term::implies(term::eq((**s).clone(), value), replace(atom, sub, &body));
                    let closed =
                        fresh.iter().zip(&c.args).rev().fold(case, |acc, (f, ty)| term::forall(f.clone(), ty.clone(), acc));
                    parts.push(closed);
                }
                term::fold_left(parts, term::and, Term::True)
            }
            _ => unreachable!(),
        })
    }

    fn atom(&mut self, t: &Term, pos: bool, env: &mut Env) -> Result<F, ClausifyError> {
        match t {
            Term::Eq(a, b) => {
                let mut tys = env.types.clone();
                if type_of(self.sig, &mut tys, a)? == SourceType::Prop {
                    return self.nnf(&term::iff((**a).clone(), (**b).clone()), pos, env);
                }
                Ok(F::Lit(Lit::eq(pos, self.term(a, env)?, self.term(b, env)?)))
            }
            Term::Cmp(op, a, b) => {
                let mut tys = env.types.clone();
                let ty = type_of(self.sig, &mut tys, a)?;
                let p = self.builtin(&format!("{}.{}", type_prefix(&ty), op.symbol()), op.symbol(), &[ty.clone(), ty], &SourceType::Prop)?;
                Ok(F::Lit(Lit::pred(pos, PTerm::App(p, vec![self.term(a, env)?, self.term(b, env)?]))))
            }
            Term::Const(_) | Term::App(..) => Ok(F::Lit(Lit::pred(pos, self.term(t, env)?))),
            Term::Var(x) => Err(ClausifyError::HigherOrder(format!("propositional variable {x}"))),
            other => Err(ClausifyError::Unsupported(format!("{other:?}"))),
        }
    }

    /// Translate a first-order term.
    pub fn term(&mut self, t: &Term, env: &mut Env) -> Result<PTerm, ClausifyError> {
        let ty_of = |s: &Self, t: &Term, env: &Env| -> Result<SourceType, ClausifyError> {
            let mut tys = env.types.clone();
            Ok(type_of(s.sig, &mut tys, t)?)
        };
        Ok(match t {
            Term::Var(x) => env.lookup(x).ok_or_else(|| TypeError::Unbound(x.clone()))?,
            Term::Const(c) => PTerm::constant(self.symbol(c)?.0),
            Term::App(f, args) => {
                let (s, _) = self.symbol(f)?;
                let args = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                PTerm::App(s, args)
            }
            Term::NatLit(k) => PTerm::constant(self.builtin(&format!("nat:{k}"), &k.to_string(), &[], &SourceType::Nat)?),
            Term::IntLit(k) => PTerm::constant(self.builtin(&format!("int:{k}"), &k.to_string(), &[], &SourceType::Int)?),
            Term::Bin(op, a, b) => {
                let ty = ty_of(self, a, env)?;
                let key = format!("{}.{}", type_prefix(&ty), op_name(*op));
                let f = self.builtin(&key, op.symbol(), &[ty.clone(), ty.clone()], &ty)?;
                PTerm::App(f, vec![self.term(a, env)?, self.term(b, env)?])
            }
            Term::Neg(a) => {
                let f = self.builtin("Int.neg", "-", &[SourceType::Int], &SourceType::Int)?;
                PTerm::App(f, vec![self.term(a, env)?])
            }
            Term::Abs(a) => {
                let f = self.builtin("Int.abs", "abs", &[SourceType::Int], &SourceType::Int)?;
                PTerm::App(f, vec![self.term(a, env)?])
            }
            Term::CoerceNatToInt(a) => {
                let f = self.builtin("Int.ofNat", "Int.ofNat", &[SourceType::Nat], &SourceType::Int)?;
                PTerm::App(f, vec![self.term(a, env)?])
            }
            Term::IntNatAbs(a) => {
                let f = self.builtin("Int.natAbs", "natAbs", &[SourceType::Int], &SourceType::Nat)?;
                PTerm::App(f, vec![self.term(a, env)?])
            }
            other => return Err(ClausifyError::Unsupported(format!("term {other:?}"))),
        })
    }

    fn skolemize(&mut self, f: F, univ: &mut Vec<(u32, Sort)>) -> F {
        match f {
            F::All(v, s, body) => {
                univ.push((v, s));
                let out = self.skolemize(*body, univ);
                univ.pop();
                out
            }
            F::Ex(v, s, body) => {
                let mut free = Vec::new();
                collect_vars(&body, &mut free);
                let params: Vec<(u32, Sort)> = univ.iter().filter(|(u, _)| free.contains(u)).copied().collect();
                let sym = self.fresh_symbol("sk", params.iter().map(|p| p.1).collect(), s, true);
                let sk = PTerm::App(sym, params.iter().map(|(u, so)| PTerm::Var(*u, *so)).collect());
                let body = subst_f(*body, v, &sk);
                self.skolemize(body, univ)
            }
            F::And(fs) => F::And(fs.into_iter().map(|g| self.skolemize(g, univ)).collect()),
            F::Or(fs) => F::Or(fs.into_iter().map(|g| self.skolemize(g, univ)).collect()),
            other => other,
        }
    }

    fn cnf(&mut self, f: &F, defs: &mut Vec<Vec<Lit>>) -> Vec<Vec<Lit>> {
        match f {
            F::True => Vec::new(),
            F::False => vec![Vec::new()],
            F::Lit(l) => vec![vec![l.clone()]],
            F::And(fs) => fs.iter().flat_map(|g| self.cnf(g, defs)).collect(),
            F::Or(fs) => {
                let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
                for g in fs {
                    let mut part = self.cnf(g, defs);
                    let (m, n) = (acc.len(), part.len());
                    if m > 1 && n > 1 && m * n > m + n + 4 {
                        if m > n {
                            acc = self.define(acc, defs);
                        } else {
                            part = self.define(part, defs);
                        }
                    }
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &part {
                            let mut c = a.clone();
                            c.extend(b.iter().cloned());
                            next.push(c);
                        }
                    }
                    acc = next;
                }
                acc
            }
            F::All(..) | F::Ex(..) => unreachable!("quantifiers removed before distribution"),
        }
    }

    /// Replace a clause set by a single definition atom `d(vars)` with
    /// `d(vars) -> C` for each clause C.
    fn define(&mut self, clauses: Vec<Vec<Lit>>, defs: &mut Vec<Vec<Lit>>) -> Vec<Vec<Lit>> {
        let mut vars: BTreeMap<u32, Sort> = BTreeMap::new();
        for c in &clauses {
            for l in c {
                collect_term_vars(&l.lhs, &mut vars);
                collect_term_vars(&l.rhs, &mut vars);
            }
        }
        let sym = self.fresh_symbol("def", vars.values().copied().collect(), BOOL, false);
        let atom = PTerm::App(sym, vars.iter().map(|(v, s)| PTerm::Var(*v, *s)).collect());
        for c in clauses {
            let mut d = vec![Lit::pred(false, atom.clone())];
            d.extend(c);
            defs.push(d);
        }
        vec![vec![Lit::pred(true, atom)]]
    }
}

fn op_name(op: ArithOp) -> &'static str {
    match op {
        ArithOp::Add => "add",
        ArithOp::Sub => "sub",
        ArithOp::Mul => "mul",
        ArithOp::Div => "div",
        ArithOp::Mod => "mod",
    }
}

/// Bound variables in scope during clausification.
#[derive(Clone, Debug, Default)]
pub struct Env {
    names: Vec<(String, PTerm)>,
    types: Vec<(String, SourceType)>,
}

impl Env {
    fn push(&mut self, x: String, ty: SourceType, v: PTerm) {
        self.names.push((x.clone(), v));
        self.types.push((x, ty));
    }

    fn pop(&mut self) {
        self.names.pop();
        self.types.pop();
    }

    fn lookup(&self, x: &str) -> Option<PTerm> {
        self.names.iter().rev().find(|(n, _)| n == x).map(|(_, v)| v.clone())
    }
}

fn find_liftable(t: &Term, top: bool) -> Option<Term> {
    if !top && matches!(t, Term::Ite(..) | Term::Match(..)) {
        return Some(t.clone());
    }
    match t {
        Term::Eq(a, b) | Term::Cmp(_, a, b) | Term::Bin(_, a, b) => find_liftable(a, false).or_else(|| find_liftable(b, false)),
        Term::App(_, args) => args.iter().find_map(|a| find_liftable(a, false)),
        Term::Neg(a) | Term::Abs(a) | Term::CoerceNatToInt(a) | Term::IntNatAbs(a) => find_liftable(a, false),
        _ => None,
    }
}

fn replace(t: &Term, target: &Term, by: &Term) -> Term {
    if t == target {
        return by.clone();
    }
    t.map_children(&mut |c| replace(c, target, by))
}

fn collect_term_vars(t: &PTerm, out: &mut BTreeMap<u32, Sort>) {
    match t {
        PTerm::Var(v, s) => {
            out.insert(*v, *s);
        }
        PTerm::App(_, args) => args.iter().for_each(|a| collect_term_vars(a, out)),
    }
}

fn collect_vars(f: &F, out: &mut Vec<u32>) {
    let mut m = BTreeMap::new();
    walk_f(f, &mut |t| collect_term_vars(t, &mut m));
    out.extend(m.keys());
}

fn walk_f(f: &F, visit: &mut impl FnMut(&PTerm)) {
    match f {
        F::Lit(l) => {
            visit(&l.lhs);
            visit(&l.rhs);
        }
        F::And(fs) | F::Or(fs) => fs.iter().for_each(|g| walk_f(g, visit)),
        F::All(_, _, b) | F::Ex(_, _, b) => walk_f(b, visit),
        F::True | F::False => {}
    }
}

fn subst_term(t: &PTerm, v: u32, by: &PTerm) -> PTerm {
    match t {
        PTerm::Var(x, _) if *x == v => by.clone(),
        PTerm::Var(..) => t.clone(),
        PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| subst_term(a, v, by)).collect()),
    }
}

fn subst_f(f: F, v: u32, by: &PTerm) -> F {
    match f {
        F::Lit(l) => F::Lit(l.map(&mut |t| subst_term(t, v, by))),
        F::And(fs) => F::And(fs.into_iter().map(|g| subst_f(g, v, by)).collect()),
        F::Or(fs) => F::Or(fs.into_iter().map(|g| subst_f(g, v, by)).collect()),
        F::All(x, s, b) => F::All(x, s, Box::new(subst_f(*b, v, by))),
        F::Ex(x, s, b) => F::Ex(x, s, Box::new(subst_f(*b, v, by))),
        other => other,
    }
}

/// Clausify named propositions into one shared symbol table.
pub fn clausify(sig: &Signature, syms: &mut Symbols, props: &[(String, Term)]) -> Result<Vec<InputClause>, ClausifyError> {
    let mut c = Clausifier::new(sig, syms);
    let mut out = Vec::new();
    for (name, p) in props {
        out.extend(c.clausify(name, p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;

    fn clauses(src: &str) -> (Symbols, Vec<InputClause>) {
        let g = parse_problem(src).unwrap();
        let mut syms = Symbols::new();
        let props: Vec<(String, Term)> = g.hypotheses.iter().map(|h| (h.name.clone(), h.prop.clone())).collect();
        let cs = clausify(&g.signature, &mut syms, &props).unwrap();
        (syms, cs)
    }

    fn shown(syms: &Symbols, cs: &[InputClause]) -> Vec<String> {
        cs.iter().map(|c| syms.show_clause(&c.lits)).collect()
    }

    #[test]
    fn de_morgan() {
        let (s, cs) = clauses("(declare-const a Prop)(declare-const b Prop)(hyp h (not (and a b)))(goal false)");
        assert_eq!(shown(&s, &cs), vec!["(not a) | (not b)"]);
    }

    #[test]
    fn iff_gives_two_clauses() {
        let (s, cs) = clauses("(declare-const p Prop)(declare-const q Prop)(hyp h (iff p q))(goal false)");
        assert_eq!(shown(&s, &cs), vec!["(not p) | q", "p | (not q)"]);
    }

    #[test]
    fn existentials_under_universals_become_functions() {
        let (s, cs) = clauses("(declare-fun r (Int Int) Prop)(hyp h (forall ((x Int)) (exists ((y Int)) (r x y))))(goal false)");
        let out = shown(&s, &cs);
        assert_eq!(out.len(), 1);
        assert!(out[0].starts_with("(r X0 ($sk"), "{out:?}");
        let PTerm::App(_, args) = &cs[0].lits[0].lhs else { panic!() };
        let PTerm::App(sk, _) = &args[1] else { panic!() };
        assert!(s.info(*sk).skolem);
    }

    #[test]
    fn ite_and_match_are_lifted() {
        let (s, cs) = clauses(
            "(declare-datatype L ((nil) (cons Int L)))(declare-const l L)(declare-const c Prop)(declare-const a Int)\
             (hyp h1 (= (ite c 1 2) a))(hyp h2 (= (match l ((nil 0) ((cons x t) x))) a))(goal false)",
        );
        let out = shown(&s, &cs);
        assert_eq!(out.len(), 4, "{out:?}");
        assert!(out.contains(&"(not c) | (= 1 a)".to_string()), "{out:?}");
        assert!(out.contains(&"(!= l (cons X0 X1)) | (= X0 a)".to_string()), "{out:?}");
    }

    #[test]
    fn big_products_get_definitions() {
        let (s, cs) = clauses(
            "(declare-const a Prop)(declare-const b Prop)(declare-const c Prop)(declare-const d Prop)\
             (declare-const e Prop)(declare-const f Prop)(declare-const g Prop)(declare-const h Prop)\
             (hyp h0 (or (and a b c d) (and e f g h)))(goal false)",
        );
        assert!(cs.len() < 16);
        assert!(shown(&s, &cs).iter().any(|c| c.contains("$def")));
    }
}
