//! Translation of refutation goals to SMT-LIB.
//!
//! `Nat` and `Int` share the SMT `Int` sort. Nonnegativity is recovered through
//! well-formedness predicates: every declared symbol gets a wf assertion,
//! universals are guarded by an implication and existentials by a conjunction.

pub mod coverage;
pub mod smt;

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use thiserror::Error;

use crate::logic::term::{ArithOp, Term};
use crate::logic::typecheck::{type_of, Env, TypeError};
use crate::logic::types::SymbolKind;
use crate::logic::{Goal, Signature, SourceType};
use crate::sexp::Sexp;

pub use coverage::{check_wf_coverage, CoverageReport, Violation};
pub use smt::{sort_of, Rank, SmtSignature, SmtSort, SortError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
    #[error("goal target must be `false` after preprocessing")]
    NotRefutation,
    #[error(transparent)]
    Type(#[from] TypeError),
}

const SMT_RESERVED: &[&str] = &[
    "true", "false", "not", "and", "or", "=>", "xor", "=", "distinct", "ite", "+", "-", "*", "div", "mod", "abs", "<=",
    "<", ">=", ">", "forall", "exists", "let", "match", "par", "as", "!", "_", "Bool", "Int", "Real", "Array",
    "select", "store", "to_real", "to_int", "is_int", "/", "is", "NUMERAL", "DECIMAL", "STRING", "BINARY",
    "HEXADECIMAL", "assert", "check-sat", "declare-fun", "declare-const", "define-fun", "declare-sort",
    "declare-datatype", "declare-datatypes", "push", "pop", "exit", "lambda", "choose", "set-option", "set-logic",
    "get-value", "get-model", "get-unsat-core",
];

/// SMT-LIB identifier for a source name: the name itself when it is a plain
/// symbol, otherwise a `|quoted|` symbol.
pub fn smt_ident(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit() || c == '@' || c == '.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple && !SMT_RESERVED.contains(&name) {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

/// Bidirectional correspondence between source and SMT symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMap {
    /// Source symbol to SMT identifier (constants, functions, constructors, projections).
    pub forward: IndexMap<String, String>,
    pub backward: IndexMap<String, (String, SourceType)>,
    /// (datatype, constructor, argument index) to selector name.
    pub selector_table: IndexMap<(String, String, usize), String>,
    /// Datatype types with a nontrivial wf predicate, to the predicate name.
    pub wf_names: IndexMap<SourceType, String>,
    /// Source datatype/sort names to SMT sort names.
    pub sort_names: IndexMap<String, String>,
    pub signature: Signature,
}

impl SymbolMap {
    pub fn new(sig: &Signature) -> Result<SymbolMap, TranslateError> {
        let mut m = SymbolMap {
            forward: IndexMap::new(),
            backward: IndexMap::new(),
            selector_table: IndexMap::new(),
            wf_names: IndexMap::new(),
            sort_names: IndexMap::new(),
            signature: sig.clone(),
        };
        for s in &sig.sorts {
            m.sort_names.insert(s.clone(), smt_ident(s));
        }
        for d in &sig.datatypes {
            m.sort_names.insert(d.name.clone(), smt_ident(&d.name));
            for c in &d.constructors {
                for a in &c.args {
                    if a.is_arrow() {
                        return Err(TranslateError::UnsupportedFeature(format!(
                            "function-typed field in constructor {}",
                            c.name
                        )));
                    }
                }
            }
        }
        for name in sig.symbol_names() {
            let (_, ty) = sig.lookup(&name).unwrap();
            let id = smt_ident(&name);
            m.forward.insert(name.clone(), id.clone());
            m.backward.insert(id, (name, ty));
        }
        for d in &sig.datatypes {
            for c in &d.constructors {
                for j in 0..c.args.len() {
                    let sel = smt_ident(&format!("{}_{}_sel{j}", d.name, c.name));
                    if m.backward.contains_key(&sel) {
                        return Err(TranslateError::UnsupportedFeature(format!("selector name {sel} clashes with a symbol")));
                    }
                    if d.is_structure {
                        // Structure selectors stand for the declared projections.
                        let proj = &d.projections[j];
                        m.forward.insert(proj.name.clone(), sel.clone());
                        m.backward.shift_remove(&smt_ident(&proj.name));
                        let ty = SourceType::arrow(SourceType::Data(d.name.clone()), proj.result.clone());
                        m.backward.insert(sel.clone(), (proj.name.clone(), ty));
                    }
                    m.selector_table.insert((d.name.clone(), c.name.clone(), j), sel);
                }
            }
        }
        // Greatest fixpoint: a datatype needs a wf predicate when some field
        // is Nat or a datatype that needs one.
        let mut nontrivial: BTreeSet<String> = BTreeSet::new();
        loop {
            let before = nontrivial.len();
            for d in &sig.datatypes {
                let needs = d.constructors.iter().flat_map(|c| &c.args).any(|a| match a {
                    SourceType::Nat => true,
                    SourceType::Data(n) => nontrivial.contains(n),
                    _ => false,
                });
                if needs {
                    nontrivial.insert(d.name.clone());
                }
            }
            if nontrivial.len() == before {
                break;
            }
        }
        for d in &sig.datatypes {
            if nontrivial.contains(&d.name) {
                let name = smt_ident(&format!("wf_{}", d.name));
                if m.backward.contains_key(&name) {
                    return Err(TranslateError::UnsupportedFeature(format!("predicate name {name} clashes with a symbol")));
                }
                m.wf_names.insert(SourceType::Data(d.name.clone()), name);
            }
        }
        Ok(m)
    }

    pub fn smt_name(&self, source: &str) -> Option<&str> {
        self.forward.get(source).map(String::as_str)
    }

    pub fn source(&self, smt: &str) -> Option<&(String, SourceType)> {
        self.backward.get(smt)
    }

    pub fn selector(&self, datatype: &str, ctor: &str, index: usize) -> &str {
        &self.selector_table[&(datatype.to_string(), ctor.to_string(), index)]
    }

    /// Reverse lookup of a selector name.
    pub fn selector_key(&self, smt: &str) -> Option<&(String, String, usize)> {
        self.selector_table.iter().find(|(_, v)| v.as_str() == smt).map(|(k, _)| k)
    }

    /// Reverse lookup of a wf predicate name.
    pub fn wf_type(&self, smt: &str) -> Option<&SourceType> {
        self.wf_names.iter().find(|(_, v)| v.as_str() == smt).map(|(k, _)| k)
    }

    pub fn sort(&self, ty: &SourceType) -> SmtSort {
        sort_of(ty, &self.sort_names)
    }

    /// Does `wf_ty` simplify to `true`?
    pub fn wf_trivial(&self, ty: &SourceType) -> bool {
        match ty {
            SourceType::Nat => false,
            SourceType::Data(_) => !self.wf_names.contains_key(ty),
            SourceType::Arrow(..) => self.wf_trivial(ty.uncurry().1),
            _ => true,
        }
    }

    fn fresh_binder(&self, base: &str, used: &mut Vec<String>) -> String {
        let taken = |n: &str, used: &Vec<String>| {
            used.iter().any(|u| u == n) || self.backward.contains_key(n) || self.selector_key(n).is_some()
        };
        let name = if !taken(base, used) {
            base.to_string()
        } else {
            (1..).map(|i| format!("{base}_{i}")).find(|n| !taken(n, used)).unwrap()
        };
        used.push(name.clone());
        name
    }

    /// Simplified wf formula for a term `x` of type `ty`; `true` when trivial.
    /// For arrow types `x` must be the function symbol.
    pub fn wf(&self, ty: &SourceType, x: &Sexp) -> Sexp {
        self.wf_with(ty, x, &mut Vec::new())
    }

    fn wf_with(&self, ty: &SourceType, x: &Sexp, used: &mut Vec<String>) -> Sexp {
        match ty {
            SourceType::Nat => Sexp::app(">=", [x.clone(), Sexp::atom("0")]),
            SourceType::Data(_) => match self.wf_names.get(ty) {
                Some(p) => Sexp::app(p.clone(), [x.clone()]),
                None => Sexp::atom("true"),
            },
            SourceType::Arrow(..) => {
                let (params, ret) = ty.uncurry();
                if self.wf_trivial(ret) {
                    return Sexp::atom("true");
                }
                let names: Vec<String> = params.iter().map(|_| self.fresh_binder("y", used)).collect();
                let binders = Sexp::list(
                    names.iter().zip(&params).map(|(n, p)| Sexp::list([Sexp::atom(n.clone()), self.sort(p).to_sexp()])),
                );
                let head = x.as_atom().unwrap_or("_").to_string();
                let call = Sexp::app(head, names.iter().map(|n| Sexp::atom(n.clone())));
                let guards: Vec<Sexp> = names
                    .iter()
                    .zip(&params)
                    .filter(|(_, p)| !self.wf_trivial(p))
                    .map(|(n, p)| self.wf_with(p, &Sexp::atom(n.clone()), used))
                    .collect();
                let concl = self.wf_with(ret, &call, used);
                let body = match guards.len() {
                    0 => concl,
                    1 => Sexp::app("=>", [guards[0].clone(), concl]),
                    _ => Sexp::app("=>", [Sexp::app("and", guards), concl]),
                };
                Sexp::app("forall", [binders, body])
            }
            _ => Sexp::atom("true"),
        }
    }

    /// The literal wf body over the free variable `x`, one case per type
    /// former with no simplification. Datatype fields refer to the predicate
    /// of their own type by name.
    pub fn build_wf(&self, ty: &SourceType) -> Sexp {
        let x = Sexp::atom("x");
        match ty {
            SourceType::Data(d) => {
                let decl = self.signature.datatype(d).expect("declared datatype");
                if decl.is_structure {
                    let c = &decl.constructors[0];
                    let parts: Vec<Sexp> = c
                        .args
                        .iter()
                        .enumerate()
                        .map(|(j, a)| self.field_wf(a, Sexp::app(self.selector(d, &c.name, j), [x.clone()])))
                        .collect();
                    conj(parts)
                } else {
                    let parts = decl
                        .constructors
                        .iter()
                        .map(|c| {
                            let fields: Vec<Sexp> = c
                                .args
                                .iter()
                                .enumerate()
                                .map(|(j, a)| self.field_wf(a, Sexp::app(self.selector(d, &c.name, j), [x.clone()])))
                                .collect();
                            Sexp::app("=>", [tester(&self.forward[&c.name], x.clone()), conj(fields)])
                        })
                        .collect();
                    conj(parts)
                }
            }
            SourceType::Arrow(d, c) => {
                let y = Sexp::atom("y");
                let inner = self.build_wf_at(c, Sexp::app("x", [y.clone()]));
                Sexp::app(
                    "forall",
                    [Sexp::list([Sexp::list([y.clone(), self.sort(d).to_sexp()])]), Sexp::app("=>", [self.field_wf(d, y), inner])],
                )
            }
            _ => self.field_wf(ty, x),
        }
    }

    fn build_wf_at(&self, ty: &SourceType, at: Sexp) -> Sexp {
        match ty {
            SourceType::Arrow(..) => {
                // Uncurry further applications: (x y) y' becomes (x y y').
                let (params, ret) = ty.uncurry();
                let mut used = vec!["y".to_string()];
                let names: Vec<String> = params.iter().map(|_| self.fresh_binder("y", &mut used)).collect();
                let mut call = match &at {
                    Sexp::List(items) => items.clone(),
                    a => vec![a.clone()],
                };
                call.extend(names.iter().map(|n| Sexp::atom(n.clone())));
                let mut body = self.field_wf(ret, Sexp::List(call));
                for (n, p) in names.iter().zip(&params).rev() {
                    body = Sexp::app(
                        "forall",
                        [
                            Sexp::list([Sexp::list([Sexp::atom(n.clone()), self.sort(p).to_sexp()])]),
                            Sexp::app("=>", [self.field_wf(p, Sexp::atom(n.clone())), body]),
                        ],
                    );
                }
                body
            }
            _ => self.field_wf(ty, at),
        }
    }

    fn field_wf(&self, ty: &SourceType, at: Sexp) -> Sexp {
        match ty {
            SourceType::Nat => Sexp::app(">=", [at, Sexp::atom("0")]),
            SourceType::Data(d) => {
                let name = self.wf_names.get(ty).cloned().unwrap_or_else(|| smt_ident(&format!("wf_{d}")));
                Sexp::app(name, [at])
            }
            _ => Sexp::atom("true"),
        }
    }
}

fn conj(mut parts: Vec<Sexp>) -> Sexp {
    match parts.len() {
        0 => Sexp::atom("true"),
        1 => parts.pop().unwrap(),
        _ => Sexp::app("and", parts),
    }
}

pub fn tester(ctor: &str, t: Sexp) -> Sexp {
    Sexp::list([Sexp::app("_", [Sexp::atom("is"), Sexp::atom(ctor)]), t])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssertKind {
    /// Well-formedness of a declared symbol (SMT name).
    Wf { symbol: String },
    /// A translated hypothesis, named `hN`.
    Hyp { label: String, source: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub term: Sexp,
    pub kind: AssertKind,
}

impl Assertion {
    pub fn to_sexp(&self) -> Sexp {
        match &self.kind {
            AssertKind::Wf { .. } => Sexp::app("assert", [self.term.clone()]),
            AssertKind::Hyp { label, .. } => Sexp::app(
                "assert",
                [Sexp::app("!", [self.term.clone(), Sexp::atom(":named"), Sexp::atom(label.clone())])],
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorMeta {
    pub datatype: String,
    pub ctor: String,
    pub index: usize,
    pub result: SourceType,
    pub structure: bool,
}

/// Source-level facts about the script, consumed by the coverage checker.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScriptMeta {
    /// Declared SMT symbols and their source types.
    pub symbol_types: IndexMap<String, SourceType>,
    /// Constructors: SMT name to (datatype SMT name, field types).
    pub constructors: IndexMap<String, (String, Vec<SourceType>)>,
    pub selectors: IndexMap<String, SelectorMeta>,
    /// wf predicate name to the datatype it constrains.
    pub wf_preds: IndexMap<String, SourceType>,
    /// Source types of the binders in each assertion, parallel to `asserts`.
    pub binder_types: Vec<IndexMap<String, SourceType>>,
}

/// An SMT-LIB problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtScript {
    pub preamble: Vec<Sexp>,
    pub decls: Vec<Sexp>,
    pub wf_defs: Vec<Sexp>,
    pub asserts: Vec<Assertion>,
    pub epilogue: Vec<Sexp>,
    pub signature: SmtSignature,
    pub meta: ScriptMeta,
}

impl SmtScript {
    pub fn text(&self) -> String {
        self.render(&[], true)
    }

    /// The script with extra plain assertions and no unsat-core request.
    pub fn text_with(&self, extra: &[Sexp]) -> String {
        self.render(extra, false)
    }

    fn render(&self, extra: &[Sexp], full: bool) -> String {
        let mut out = String::new();
        let mut line = |s: &Sexp| {
            out.push_str(&s.to_string());
            out.push('\n');
        };
        if full {
            self.preamble.iter().for_each(&mut line);
        } else {
            line(&Sexp::app("set-logic", [Sexp::atom("ALL")]));
        }
        self.decls.iter().for_each(&mut line);
        self.wf_defs.iter().for_each(&mut line);
        for a in &self.asserts {
            line(&a.to_sexp());
        }
        for e in extra {
            line(&Sexp::app("assert", [e.clone()]));
        }
        if full {
            self.epilogue.iter().for_each(&mut line);
        } else {
            line(&Sexp::list([Sexp::atom("check-sat")]));
        }
        out
    }

    /// Map an unsat-core label back to the source hypothesis name.
    pub fn hypothesis_for_label(&self, label: &str) -> Option<&str> {
        self.asserts.iter().find_map(|a| match &a.kind {
            AssertKind::Hyp { label: l, source } if l == label => Some(source.as_str()),
            _ => None,
        })
    }
}

/// Translate a single source term (formula or value) under a symbol map.
pub fn translate_term(m: &SymbolMap, t: &Term) -> Result<Sexp, TranslateError> {
    Translator::new(m).term(t)
}

struct Translator<'a> {
    m: &'a SymbolMap,
    env: Env,
    subst: HashMap<String, Sexp>,
    binder_types: IndexMap<String, SourceType>,
}

impl<'a> Translator<'a> {
    fn new(m: &'a SymbolMap) -> Self {
        Translator { m, env: Vec::new(), subst: HashMap::new(), binder_types: IndexMap::new() }
    }

    fn type_of(&mut self, t: &Term) -> Result<SourceType, TranslateError> {
        Ok(type_of(&self.m.signature, &mut self.env, t)?)
    }

    fn sym(&self, name: &str) -> Sexp {
        Sexp::atom(self.m.forward.get(name).cloned().unwrap_or_else(|| smt_ident(name)))
    }

    fn term(&mut self, t: &Term) -> Result<Sexp, TranslateError> {
        let b = |s: &str, args: Vec<Sexp>| Sexp::app(s, args);
        Ok(match t {
            Term::Var(x) => match self.subst.get(x) {
                Some(s) => s.clone(),
                None => Sexp::atom(smt_ident(x)),
            },
            Term::Const(c) => self.sym(c),
            Term::NatLit(k) => Sexp::atom(k.to_string()),
            Term::IntLit(k) => int_literal(*k),
            Term::True => Sexp::atom("true"),
            Term::False => Sexp::atom("false"),
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match self.m.signature.lookup(f) {
                    Some((SymbolKind::Projection { datatype, index }, _)) => {
                        let d = self.m.signature.datatype(&datatype).unwrap();
                        Sexp::app(self.m.selector(&datatype, &d.constructors[0].name, index), args)
                    }
                    _ => Sexp::app(self.sym(f).as_atom().unwrap(), args),
                }
            }
            Term::Forall(x, ty, body) | Term::Exists(x, ty, body) => {
                if ty.is_arrow() {
                    return Err(TranslateError::UnsupportedFeature(format!("quantifier over {ty}")));
                }
                let id = smt_ident(x);
                self.binder_types.insert(id.clone(), ty.clone());
                self.env.push((x.clone(), ty.clone()));
                let inner = self.term(body);
                self.env.pop();
                let inner = inner?;
                let wf = self.m.wf(ty, &Sexp::atom(id.clone()));
                let binders = Sexp::list([Sexp::list([Sexp::atom(id), self.m.sort(ty).to_sexp()])]);
                let forall = matches!(t, Term::Forall(..));
                let body = if wf.is_atom("true") {
                    inner
                } else if forall {
                    b("=>", vec![wf, inner])
                } else {
                    b("and", vec![wf, inner])
                };
                b(if forall { "forall" } else { "exists" }, vec![binders, body])
            }
            Term::Not(a) => b("not", vec![self.term(a)?]),
            Term::And(x, y) => b("and", vec![self.term(x)?, self.term(y)?]),
            Term::Or(x, y) => b("or", vec![self.term(x)?, self.term(y)?]),
            Term::Implies(x, y) => b("=>", vec![self.term(x)?, self.term(y)?]),
            Term::Iff(x, y) | Term::Eq(x, y) => b("=", vec![self.term(x)?, self.term(y)?]),
            Term::Bin(op, x, y) => {
                let nat_sub = *op == ArithOp::Sub && self.type_of(x)? == SourceType::Nat;
                let (sx, sy) = (self.term(x)?, self.term(y)?);
                if nat_sub {
                    b(
                        "ite",
                        vec![b(">=", vec![sx.clone(), sy.clone()]), b("-", vec![sx, sy]), Sexp::atom("0")],
                    )
                } else {
                    b(op.symbol(), vec![sx, sy])
                }
            }
            Term::Neg(a) => b("-", vec![self.term(a)?]),
            Term::Abs(a) | Term::IntNatAbs(a) => b("abs", vec![self.term(a)?]),
            Term::CoerceNatToInt(a) => self.term(a)?,
            Term::Cmp(op, x, y) => b(op.symbol(), vec![self.term(x)?, self.term(y)?]),
            Term::Ite(c, x, y) => b("ite", vec![self.term(c)?, self.term(x)?, self.term(y)?]),
            Term::Match(s, arms) => {
                let SourceType::Data(dname) = self.type_of(s)? else {
                    return Err(TranslateError::UnsupportedFeature("match on a non-datatype".into()));
                };
                let decl = self.m.signature.datatype(&dname).unwrap().clone();
                let scrut = self.term(s)?;
                let mut branches = Vec::new();
                for arm in arms {
                    let (_, ctor) = decl.constructor(&arm.ctor).unwrap();
                    for (j, x) in arm.binders.iter().enumerate() {
                        let sel = Sexp::app(self.m.selector(&dname, &arm.ctor, j), [scrut.clone()]);
                        self.subst.insert(x.clone(), sel);
                        self.env.push((x.clone(), ctor.args[j].clone()));
                    }
                    let body = self.term(&arm.body);
                    for x in &arm.binders {
                        self.subst.remove(x);
                        self.env.pop();
                    }
                    branches.push((self.m.forward[&arm.ctor].clone(), body?));
                }
                let (_, last) = branches.pop().unwrap();
                branches.into_iter().rev().fold(last, |acc, (c, body)| b("ite", vec![tester(&c, scrut.clone()), body, acc]))
            }
        })
    }
}

fn int_literal(k: i64) -> Sexp {
    if k < 0 {
        Sexp::app("-", [Sexp::atom(k.unsigned_abs().to_string())])
    } else {
        Sexp::atom(k.to_string())
    }
}

/// Translate a preprocessed goal (target `false`) to an SMT-LIB problem.
pub fn translate_goal(g: &Goal) -> Result<(SmtScript, SymbolMap), TranslateError> {
    if g.target != Term::False {
        return Err(TranslateError::NotRefutation);
    }
    let m = SymbolMap::new(&g.signature)?;
    let sig = &g.signature;
    let mut smt_sig = SmtSignature::default();
    let mut meta = ScriptMeta::default();
    let mut decls = Vec::new();
    for s in &sig.sorts {
        let name = m.sort_names[s].clone();
        decls.push(Sexp::app("declare-sort", [Sexp::atom(name.clone()), Sexp::atom("0")]));
        smt_sig.sorts.push(name);
    }
    for d in &sig.datatypes {
        let dname = m.sort_names[&d.name].clone();
        smt_sig.datatypes.insert(dname.clone(), d.constructors.iter().map(|c| m.forward[&c.name].clone()).collect());
    }
    for d in &sig.datatypes {
        let dname = m.sort_names[&d.name].clone();
        let dsort = SmtSort::Data(dname.clone());
        let mut ctors = Vec::new();
        for c in &d.constructors {
            let cname = m.forward[&c.name].clone();
            let mut fields = vec![Sexp::atom(cname.clone())];
            for (j, a) in c.args.iter().enumerate() {
                let sel = m.selector(&d.name, &c.name, j).to_string();
                fields.push(Sexp::list([Sexp::atom(sel.clone()), m.sort(a).to_sexp()]));
                smt_sig.functions.insert(sel.clone(), Rank { params: vec![dsort.clone()], result: m.sort(a) });
                meta.selectors.insert(
                    sel,
                    SelectorMeta {
                        datatype: dname.clone(),
                        ctor: cname.clone(),
                        index: j,
                        result: a.clone(),
                        structure: d.is_structure,
                    },
                );
            }
            ctors.push(Sexp::List(fields));
            smt_sig.functions.insert(
                cname.clone(),
                Rank { params: c.args.iter().map(|a| m.sort(a)).collect(), result: dsort.clone() },
            );
            meta.constructors.insert(cname, (dname.clone(), c.args.clone()));
        }
        decls.push(Sexp::app("declare-datatype", [Sexp::atom(dname.clone()), Sexp::List(ctors)]));
    }
    let mut wf_defs = Vec::new();
    for d in &sig.datatypes {
        let ty = SourceType::Data(d.name.clone());
        let Some(pred) = m.wf_names.get(&ty).cloned() else { continue };
        let x = Sexp::atom("x");
        let body = if d.is_structure {
            let c = &d.constructors[0];
            conj(
                c.args
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !m.wf_trivial(a))
                    .map(|(j, a)| m.wf(a, &Sexp::app(m.selector(&d.name, &c.name, j), [x.clone()])))
                    .collect(),
            )
        } else {
            conj(
                d.constructors
                    .iter()
                    .filter_map(|c| {
                        let fields: Vec<Sexp> = c
                            .args
                            .iter()
                            .enumerate()
                            .filter(|(_, a)| !m.wf_trivial(a))
                            .map(|(j, a)| m.wf(a, &Sexp::app(m.selector(&d.name, &c.name, j), [x.clone()])))
                            .collect();
                        (!fields.is_empty()).then(|| Sexp::app("=>", [tester(&m.forward[&c.name], x.clone()), conj(fields)]))
                    })
                    .collect(),
            )
        };
        let dsort = m.sort(&ty);
        let head = if d.is_recursive() { "define-fun-rec" } else { "define-fun" };
        wf_defs.push(Sexp::app(
            head,
            [
                Sexp::atom(pred.clone()),
                Sexp::list([Sexp::list([x, dsort.to_sexp()])]),
                Sexp::atom("Bool"),
                body,
            ],
        ));
        smt_sig.functions.insert(pred.clone(), Rank { params: vec![dsort], result: SmtSort::Bool });
        meta.wf_preds.insert(pred, ty);
    }
    let mut asserts = Vec::new();
    for (name, ty) in &sig.consts {
        let id = m.forward[name].clone();
        let (params, ret) = ty.uncurry();
        let psorts: Vec<SmtSort> = params.iter().map(|p| m.sort(p)).collect();
        if psorts.is_empty() {
            decls.push(Sexp::app("declare-const", [Sexp::atom(id.clone()), m.sort(ret).to_sexp()]));
        } else {
            decls.push(Sexp::app(
                "declare-fun",
                [Sexp::atom(id.clone()), Sexp::list(psorts.iter().map(SmtSort::to_sexp)), m.sort(ret).to_sexp()],
            ));
        }
        smt_sig.functions.insert(id.clone(), Rank { params: psorts, result: m.sort(ret) });
        meta.symbol_types.insert(id.clone(), ty.clone());
        let wf = m.wf(ty, &Sexp::atom(id.clone()));
        let mut binders = IndexMap::new();
        if let Some([_, Sexp::List(bs), _]) = wf.as_list().filter(|_| wf.head() == Some("forall")) {
            for (b, p) in bs.iter().zip(&params) {
                binders.insert(b.as_list().unwrap()[0].as_atom().unwrap().to_string(), (*p).clone());
            }
        }
        meta.binder_types.push(binders);
        asserts.push(Assertion { term: wf, kind: AssertKind::Wf { symbol: id } });
    }
    for (i, h) in g.hypotheses.iter().enumerate() {
        let mut tr = Translator::new(&m);
        let term = tr.term(&h.prop)?;
        meta.binder_types.push(tr.binder_types);
        asserts.push(Assertion { term, kind: AssertKind::Hyp { label: format!("h{i}"), source: h.name.clone() } });
    }
    let preamble = vec![
        Sexp::app("set-option", [Sexp::atom(":produce-unsat-cores"), Sexp::atom("true")]),
        Sexp::app("set-logic", [Sexp::atom("ALL")]),
    ];
    let epilogue = vec![Sexp::list([Sexp::atom("check-sat")]), Sexp::list([Sexp::atom("get-unsat-core")])];
    let script = SmtScript { preamble, decls, wf_defs, asserts, epilogue, signature: smt_sig, meta };
    Ok((script, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::preprocess::preprocess;

    fn translate(src: &str) -> (SmtScript, SymbolMap) {
        let (g, _) = preprocess(&parse_problem(src).unwrap());
        translate_goal(&g).unwrap()
    }

    #[test]
    fn nat_constant_gets_nonnegativity() {
        let (s, _) = translate("(declare-const n Nat)(goal (<= 0 n))");
        let text = s.text();
        assert!(text.contains("(declare-const n Int)\n(assert (>= n 0))\n(assert (! (not (<= 0 n)) :named h0))"), "{text}");
        assert!(text.starts_with("(set-option :produce-unsat-cores true)\n(set-logic ALL)\n"));
        assert!(text.ends_with("(check-sat)\n(get-unsat-core)\n"));
    }

    #[test]
    fn trivial_goal() {
        let (s, _) = translate("(goal true)");
        let hyps: Vec<_> = s.asserts.iter().filter(|a| matches!(a.kind, AssertKind::Hyp { .. })).collect();
        assert_eq!(hyps.len(), 1);
        assert_eq!(hyps[0].to_sexp().to_string(), "(assert (! (not true) :named h0))");
    }

    #[test]
    fn wf_bodies() {
        let g = parse_problem(
            "(declare-datatype Pair :structure ((mk (fst Nat) (snd Int))))(goal true)",
        )
        .unwrap();
        let m = SymbolMap::new(&g.signature).unwrap();
        assert_eq!(m.build_wf(&SourceType::Nat).to_string(), "(>= x 0)");
        assert_eq!(m.build_wf(&SourceType::Int).to_string(), "true");
        assert_eq!(
            m.build_wf(&SourceType::Data("Pair".into())).to_string(),
            "(and (>= (Pair_mk_sel0 x) 0) true)"
        );
        assert_eq!(
            m.build_wf(&SourceType::arrow(SourceType::Nat, SourceType::Nat)).to_string(),
            "(forall ((y Int)) (=> (>= y 0) (>= (x y) 0)))"
        );
    }

    #[test]
    fn term_translation() {
        let g = parse_problem(
            "(declare-datatype Pair :structure ((mk (fst Nat) (snd Int))))(declare-const a Nat)(declare-const b Nat)(goal true)",
        )
        .unwrap();
        let m = SymbolMap::new(&g.signature).unwrap();
        let t = crate::logic::parse_term(&g.signature, "(- a b)", None).unwrap();
        assert_eq!(translate_term(&m, &t).unwrap().to_string(), "(ite (>= a b) (- a b) 0)");
        let t = crate::logic::parse_term(&g.signature, "(forall ((n Nat)) (<= 0 n))", None).unwrap();
        assert_eq!(translate_term(&m, &t).unwrap().to_string(), "(forall ((n Int)) (=> (>= n 0) (<= 0 n)))");
        let t = crate::logic::parse_term(&g.signature, "(exists ((x Pair)) (= (fst x) 1))", None).unwrap();
        assert_eq!(
            translate_term(&m, &t).unwrap().to_string(),
            "(exists ((x Pair)) (and (wf_Pair x) (= (Pair_mk_sel0 x) 1)))"
        );
    }

    #[test]
    fn list_datatype_declares_selectors() {
        let (s, m) = translate(
            "(declare-sort A)(declare-datatype List ((nil) (cons A List)))(declare-const x A)(declare-const y A)\
             (goal (iff (= (cons x nil) (cons y nil)) (= x y)))",
        );
        let text = s.text();
        assert!(text.contains("(declare-datatype List ((nil) (cons (List_cons_sel0 A) (List_cons_sel1 List))))"), "{text}");
        assert!(m.wf_names.is_empty());
        assert_eq!(m.selector_key("List_cons_sel0"), Some(&("List".into(), "cons".into(), 0)));
    }

    #[test]
    fn recursive_nat_list_uses_define_fun_rec() {
        let (s, _) = translate(
            "(declare-datatype NList ((nnil) (ncons Nat NList)))(declare-const l NList)\
             (goal (= (match l ((nnil 0) ((ncons h t) h))) (match l ((nnil 0) ((ncons h t) h)))))",
        );
        let text = s.text();
        assert!(text.contains(
            "(define-fun-rec wf_NList ((x NList)) Bool (=> ((_ is ncons) x) (and (>= (NList_ncons_sel0 x) 0) (wf_NList (NList_ncons_sel1 x)))))"
        ), "{text}");
        assert!(text.contains("(ite ((_ is nnil) l) 0 (NList_ncons_sel0 l))"), "{text}");
    }

    #[test]
    fn deterministic() {
        let src = "(declare-fun f (Nat) Nat)(declare-const n Nat)(goal (exists ((m Nat)) (< n (f m))))";
        assert_eq!(translate(src).0.text(), translate(src).0.text());
    }
}
