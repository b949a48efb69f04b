//! Syntactic check that every term of a translated script is well-formed by
//! construction: declared symbols carry wf assertions, binders carry guards,
//! selectors sit under a matching tester, and raw subtraction never lands in
//! a `Nat` position unless its nonnegativity is established by a condition.


use crate::logic::SourceType;
use crate::sexp::Sexp;

use super::{AssertKind, SmtScript};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index into `script.asserts`, or `None` for a script-level problem.
    pub assertion: Option<usize>,
    pub term: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub violations: Vec<Violation>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_wf_coverage(script: &SmtScript) -> CoverageReport {
    let mut report = CoverageReport::default();
    let meta = &script.meta;
    for sym in meta.symbol_types.keys() {
        let n = script
            .asserts
            .iter()
            .filter(|a| matches!(&a.kind, AssertKind::Wf { symbol } if symbol == sym))
            .count();
        if n != 1 {
            report.violations.push(Violation {
                assertion: None,
                term: sym.clone(),
                reason: format!("declared symbol has {n} wf assertions"),
            });
        }
    }
    for (i, a) in script.asserts.iter().enumerate() {
        let binders = meta.binder_types.get(i).cloned().unwrap_or_default();
        let mut c = Checker { script, binders, report: &mut report, index: i, scope: Vec::new(), conds: Vec::new() };
        if let AssertKind::Wf { symbol } = &a.kind {
            c.check_wf_assert(symbol, &a.term);
        }
        c.walk(&a.term, Some(&SourceType::Prop));
    }
    report
}

struct Checker<'a> {
    script: &'a SmtScript,
    binders: indexmap::IndexMap<String, SourceType>,
    report: &'a mut CoverageReport,
    index: usize,
    /// Bound variables in scope with their source types.
    scope: Vec<(String, SourceType)>,
    /// Facts known at the current position: (formula, holds).
    conds: Vec<(Sexp, bool)>,
}

impl Checker<'_> {
    fn violation(&mut self, t: &Sexp, reason: impl Into<String>) {
        self.report.violations.push(Violation { assertion: Some(self.index), term: t.to_string(), reason: reason.into() });
    }

    /// The guard a value of type `ty` at `x` needs, if any.
    fn required_guard(&self, ty: &SourceType, x: &Sexp) -> Option<Sexp> {
        match ty {
            SourceType::Nat => Some(Sexp::app(">=", [x.clone(), Sexp::atom("0")])),
            SourceType::Data(_) => self
                .script
                .meta
                .wf_preds
                .iter()
                .find(|(_, t)| *t == ty)
                .map(|(p, _)| Sexp::app(p.clone(), [x.clone()])),
            _ => None,
        }
    }

    fn covers(guard: &Sexp, want: &Sexp) -> bool {
        guard == want || (guard.head() == Some("and") && guard.as_list().unwrap()[1..].contains(want))
    }

    fn check_wf_assert(&mut self, symbol: &str, t: &Sexp) {
        let ty = self.script.meta.symbol_types[symbol].clone();
        let (params, ret) = ty.uncurry();
        let ok = if params.is_empty() {
            match self.required_guard(ret, &Sexp::atom(symbol)) {
                Some(g) => *t == g,
                None => t.is_atom("true"),
            }
        } else {
            match t.as_list() {
                Some([h, Sexp::List(bs), body]) if h.is_atom("forall") && bs.len() == params.len() => {
                    let names: Vec<Sexp> = bs.iter().map(|b| b.as_list().map(|l| l[0].clone()).unwrap_or_else(|| b.clone())).collect();
                    let call = Sexp::app(symbol, names.iter().cloned());
                    let concl_want = self.required_guard(ret, &call);
                    let guards_want: Vec<Sexp> =
                        names.iter().zip(&params).filter_map(|(n, p)| self.required_guard(p, n)).collect();
                    let (guard, concl) = match body.as_list() {
                        Some([h, g, c]) if h.is_atom("=>") => (Some(g.clone()), c.clone()),
                        _ => (None, body.clone()),
                    };
                    Some(concl) == concl_want
                        && guards_want.iter().all(|w| guard.as_ref().is_some_and(|g| Self::covers(g, w)))
                }
                _ => t.is_atom("true") && self.required_guard(ret, &Sexp::atom(symbol)).is_none(),
            }
        };
        if !ok {
            self.violation(t, format!("wf assertion for `{symbol}` does not match its type {ty}"));
        }
    }

    fn known(&self, f: &Sexp, holds: bool) -> bool {
        self.conds.iter().any(|(c, h)| c == f && *h == holds)
    }

    fn push_conds(&mut self, c: &Sexp, holds: bool) -> usize {
        let before = self.conds.len();
        if holds && c.head() == Some("and") {
            for x in &c.as_list().unwrap()[1..] {
                self.conds.push((x.clone(), true));
            }
        } else if c.head() == Some("not") {
            self.conds.push((c.as_list().unwrap()[1].clone(), !holds));
        } else {
            self.conds.push((c.clone(), holds));
        }
        self.conds.len() - before
    }

    fn pop_conds(&mut self, n: usize) {
        self.conds.truncate(self.conds.len() - n);
    }

    fn tester_established(&self, dt: &str, ctor: &str, arg: &Sexp) -> bool {
        let test = |c: &str| super::tester(c, arg.clone());
        if self.known(&test(ctor), true) {
            return true;
        }
        let ctors = &self.script.signature.datatypes[dt];
        ctors.iter().filter(|c| *c != ctor).all(|c| self.known(&test(c), false))
    }

    fn type_mismatch(&mut self, t: &Sexp, required: Option<&SourceType>, actual: &SourceType) {
        if required == Some(&SourceType::Nat) && *actual != SourceType::Nat {
            self.violation(t, format!("term of type {actual} in a Nat position"));
        }
    }

    fn walk(&mut self, t: &Sexp, required: Option<&SourceType>) {
        let nat = required == Some(&SourceType::Nat);
        match t {
            Sexp::Atom(a) => {
                if a.bytes().all(|b| b.is_ascii_digit()) || a == "true" || a == "false" {
                    return;
                }
                if let Some((_, ty)) = self.scope.iter().rev().find(|(n, _)| n == a) {
                    let ty = ty.clone();
                    self.type_mismatch(t, required, &ty);
                } else if let Some(ty) = self.script.meta.symbol_types.get(a) {
                    let ty = ty.clone();
                    self.type_mismatch(t, required, &ty);
                } else if !self.script.meta.constructors.contains_key(a) {
                    self.violation(t, "unknown identifier");
                }
            }
            Sexp::List(items) if items.is_empty() => self.violation(t, "empty application"),
            Sexp::List(items) => {
                let args = &items[1..];
                if let Some(inner) = items[0].as_list() {
                    if inner.len() == 3 && inner[0].is_atom("_") && inner[1].is_atom("is") {
                        args.iter().for_each(|a| self.walk(a, None));
                    } else {
                        self.violation(t, "unexpected application head");
                    }
                    return;
                }
                let head = items[0].as_atom().unwrap();
                match head {
                    "forall" | "exists" => self.walk_binder(t, head == "forall"),
                    "=>" if args.len() == 2 => {
                        self.walk(&args[0], Some(&SourceType::Prop));
                        let n = self.push_conds(&args[0], true);
                        self.walk(&args[1], Some(&SourceType::Prop));
                        self.pop_conds(n);
                    }
                    "ite" if args.len() == 3 => {
                        self.walk(&args[0], Some(&SourceType::Prop));
                        let n = self.push_conds(&args[0], true);
                        self.walk(&args[1], required);
                        self.pop_conds(n);
                        let n = self.push_conds(&args[0], false);
                        self.walk(&args[2], required);
                        self.pop_conds(n);
                    }
                    "not" | "and" | "or" | "=>" | "xor" => args.iter().for_each(|a| self.walk(a, Some(&SourceType::Prop))),
                    "=" | "distinct" | "<=" | "<" | ">=" | ">" => args.iter().for_each(|a| self.walk(a, None)),
                    "+" | "*" | "div" | "mod" => {
                        let r = if nat { Some(&SourceType::Nat) } else { None };
                        args.iter().for_each(|a| self.walk(a, r));
                    }
                    "abs" => args.iter().for_each(|a| self.walk(a, None)),
                    "-" => {
                        if nat {
                            let covered = args.len() == 2
                                && self.known(&Sexp::app(">=", [args[0].clone(), args[1].clone()]), true);
                            if !covered {
                                self.violation(t, "subtraction in a Nat position without a nonnegativity condition");
                            }
                            args.iter().for_each(|a| self.walk(a, Some(&SourceType::Nat)));
                        } else {
                            args.iter().for_each(|a| self.walk(a, None));
                        }
                    }
                    "!" | "let" => self.violation(t, format!("`{head}` is never produced by translation")),
                    f => self.walk_app(t, f, args, required),
                }
            }
        }
    }

    fn walk_app(&mut self, t: &Sexp, f: &str, args: &[Sexp], required: Option<&SourceType>) {
        let meta = &self.script.meta;
        if let Some(sel) = meta.selectors.get(f).cloned() {
            if args.len() == 1 && !sel.structure && !self.tester_established(&sel.datatype, &sel.ctor, &args[0]) {
                self.violation(t, format!("selector `{f}` outside a `{}` tester guard", sel.ctor));
            }
            self.type_mismatch(t, required, &sel.result);
            args.iter().for_each(|a| self.walk(a, None));
        } else if let Some(ty) = meta.wf_preds.get(f).cloned() {
            args.iter().for_each(|a| self.walk(a, Some(&ty)));
        } else if let Some((_, fields)) = meta.constructors.get(f).cloned() {
            if args.len() != fields.len() {
                self.violation(t, "constructor arity");
            }
            for (a, p) in args.iter().zip(&fields) {
                self.walk(a, Some(p));
            }
        } else if let Some(ty) = meta.symbol_types.get(f).cloned() {
            let (params, ret) = ty.uncurry();
            if args.len() != params.len() {
                self.violation(t, "function arity");
            }
            for (a, p) in args.iter().zip(params) {
                self.walk(a, Some(p));
            }
            self.type_mismatch(t, required, ret);
        } else if let Some((_, ty)) = self.scope.iter().rev().find(|(n, _)| n == f) {
            let ty = ty.clone();
            self.violation(t, format!("bound variable of type {ty} applied"));
        } else {
            self.violation(t, format!("unknown function `{f}`"));
        }
    }

    fn walk_binder(&mut self, t: &Sexp, universal: bool) {
        let items = t.as_list().unwrap();
        let (Some(Sexp::List(bs)), Some(body)) = (items.get(1), items.get(2)) else {
            self.violation(t, "malformed binder");
            return;
        };
        let mut bound = Vec::new();
        for b in bs {
            let Some(name) = b.as_list().and_then(|l| l.first()).and_then(Sexp::as_atom) else {
                self.violation(t, "malformed binding");
                return;
            };
            match self.binders.get(name) {
                Some(ty) => bound.push((name.to_string(), ty.clone())),
                None => {
                    self.violation(t, format!("binder `{name}` has no recorded source type"));
                    return;
                }
            }
        }
        let wants: Vec<Sexp> = bound.iter().filter_map(|(n, ty)| self.required_guard(ty, &Sexp::atom(n.clone()))).collect();
        let conn = if universal { "=>" } else { "and" };
        let (guard, rest) = match body.as_list() {
            Some(l) if l.len() >= 3 && l[0].is_atom(conn) => (Some(l[1].clone()), body.clone()),
            _ => (None, body.clone()),
        };
        for w in &wants {
            if !guard.as_ref().is_some_and(|g| Self::covers(g, w)) {
                self.violation(t, format!("binder missing guard {w}"));
            }
        }
        let n = bound.len();
        self.scope.extend(bound);
        self.walk(&rest, Some(&SourceType::Prop));
        self.scope.truncate(self.scope.len() - n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::preprocess::preprocess;
    use crate::sexp::read_one;
    use crate::translate::{translate_goal, Assertion};

    fn script(src: &str) -> SmtScript {
        translate_goal(&preprocess(&parse_problem(src).unwrap()).0).unwrap().0
    }

    const NAT_FN: &str = "(declare-fun f (Nat) Nat)(declare-const n Nat)(declare-const m Nat)\
        (goal (forall ((k Nat)) (<= (f (- n m)) (+ k (f k)))))";

    #[test]
    fn translated_script_passes() {
        let r = check_wf_coverage(&script(NAT_FN));
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn raw_subtraction_is_flagged() {
        let mut s = script(NAT_FN);
        s.asserts.push(Assertion {
            term: read_one("(= (f (- n m)) 0)").unwrap(),
            kind: AssertKind::Hyp { label: "h9".into(), source: "bad".into() },
        });
        s.meta.binder_types.push(Default::default());
        let r = check_wf_coverage(&s);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].term, "(- n m)");
    }

    #[test]
    fn missing_wf_assertion_is_flagged() {
        let mut s = script(NAT_FN);
        let i = s.asserts.iter().position(|a| matches!(&a.kind, AssertKind::Wf { symbol } if symbol == "m")).unwrap();
        s.asserts.remove(i);
        s.meta.binder_types.remove(i);
        let r = check_wf_coverage(&s);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].term, "m");
    }

    #[test]
    fn unguarded_selector_is_flagged() {
        let mut s = script(
            "(declare-datatype NList ((nnil) (ncons Nat NList)))(declare-const l NList)\
             (goal (<= 0 (match l ((nnil 0) ((ncons h t) h)))))",
        );
        assert!(check_wf_coverage(&s).passed());
        s.asserts.push(Assertion {
            term: read_one("(<= 0 (NList_ncons_sel0 l))").unwrap(),
            kind: AssertKind::Hyp { label: "h9".into(), source: "bad".into() },
        });
        s.meta.binder_types.push(Default::default());
        let r = check_wf_coverage(&s);
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].reason.contains("tester"));
    }
}
