//! Reading solver hints back into the source logic.
//!
//! SMT `Int` is read as source `Int` and `Bool` as `Prop`. Coercions are
//! inserted only where a source symbol demands `Nat`: an integer argument
//! to a `Nat` parameter is wrapped in `natAbs`, and a `Nat`-valued subterm
//! used arithmetically is wrapped in `Int.ofNat`.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::logic::term::{self, ArithOp, CmpOp, Term};
use crate::logic::types::{SourceType, SymbolKind};
use crate::logic::{typecheck, Goal, Signature, TypeError};
use crate::sexp::Sexp;
use crate::solver::{is_solver_skolem, Hint, HintPayload};
use crate::translate::{SmtSort, SymbolMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("solver-internal Skolem `{0}`")]
    UnknownSolverSkolem(String),
    #[error("no coercion from {found} to {expected} in `{term}`")]
    SortClash { term: String, expected: SourceType, found: SourceType },
    #[error("unsupported hint construct: {0}")]
    Unsupported(String),
    #[error("interpreted statement does not typecheck: {0}")]
    IllTyped(#[from] TypeError),
}

impl InterpError {
    /// Short machine-readable tag.
    pub fn reason(&self) -> &'static str {
        match self {
            InterpError::UnknownSymbol(_) => "UnknownSymbol",
            InterpError::UnknownSolverSkolem(_) => "UnknownSolverSkolem",
            InterpError::SortClash { .. } => "SortClash",
            InterpError::Unsupported(_) => "Unsupported",
            InterpError::IllTyped(_) => "IllTyped",
        }
    }
}

/// Datatype, constructor and argument index of a selector.
pub type SelectorKey = (String, String, usize);

/// A synthesized selector function with its defining property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorDef {
    pub name: String,
    pub fact_name: String,
    pub datatype: String,
    pub ctor: String,
    pub index: usize,
    pub fn_type: SourceType,
    /// `∀ args, sel (ctor args) = arg_index`.
    pub characteristic_property: Term,
    pub requires_inhabited: SourceType,
    /// False when the result type is not known to be inhabited; the
    /// obligation is then left open in the emitted script.
    pub inhabited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretedHint {
    pub name: String,
    pub statement: Term,
    pub origin: Hint,
    pub needs_selectors: BTreeSet<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub hints: Vec<InterpretedHint>,
    pub selectors: Vec<SelectorDef>,
    pub dropped: Vec<(Hint, InterpError)>,
    /// The goal signature extended with the synthesized selectors.
    pub signature: Signature,
}

/// Name of the synthesized selector for a constructor argument.
pub fn selector_name(datatype: &str, ctor: &str, index: usize) -> String {
    format!("_{datatype}.{ctor}_sel{index}")
}

/// One definition per needed (datatype, constructor, index) key. Structure
/// keys resolve to their projections and produce nothing.
pub fn synthesize_selectors(sig: &Signature, needed: &BTreeSet<SelectorKey>) -> Vec<SelectorDef> {
    let mut out = Vec::new();
    for (dt, ctor, j) in needed {
        let Some(decl) = sig.datatype(dt) else { continue };
        if decl.is_structure {
            continue;
        }
        let Some((_, c)) = decl.constructor(ctor) else { continue };
        let Some(result) = c.args.get(*j).cloned() else { continue };
        let name = selector_name(dt, ctor, *j);
        let data = SourceType::Data(dt.clone());
        let args: Vec<String> = (0..c.args.len()).map(|i| format!("arg{i}")).collect();
        let applied = if args.is_empty() {
            term::cnst(ctor.clone())
        } else {
            term::app(ctor.clone(), args.iter().map(term::var).collect())
        };
        let body = term::eq(term::app(name.clone(), vec![applied]), term::var(&args[*j]));
        let prop = args.iter().zip(&c.args).rev().fold(body, |acc, (x, ty)| term::forall(x.clone(), ty.clone(), acc));
        out.push(SelectorDef {
            fact_name: format!("{name}Fact"),
            name,
            datatype: dt.clone(),
            ctor: ctor.clone(),
            index: *j,
            fn_type: SourceType::arrow(data, result.clone()),
            characteristic_property: prop,
            inhabited: sig.is_inhabited(&result),
            requires_inhabited: result,
        });
    }
    out
}

/// Substitute `let` bindings away. Bindings are parallel, as in SMT-LIB.
pub fn zeta_expand(t: &Sexp) -> Sexp {
    zeta(t, &HashMap::new())
}

fn zeta(t: &Sexp, env: &HashMap<String, Sexp>) -> Sexp {
    match t {
        Sexp::Atom(a) => env.get(a).cloned().unwrap_or_else(|| t.clone()),
        Sexp::List(items) => match (t.head(), items.as_slice()) {
            (Some("let"), [_, Sexp::List(binds), body]) => {
                let mut inner = env.clone();
                for b in binds {
                    if let Some([Sexp::Atom(x), v]) = b.as_list() {
                        inner.insert(x.clone(), zeta(v, env));
                    }
                }
                zeta(body, &inner)
            }
            (Some("forall" | "exists"), [q, Sexp::List(binds), body]) => {
                let mut inner = env.clone();
                for b in binds {
                    if let Some([Sexp::Atom(x), _]) = b.as_list() {
                        inner.remove(x);
                    }
                }
                Sexp::List(vec![q.clone(), Sexp::List(binds.clone()), zeta(body, &inner)])
            }
            _ => Sexp::List(items.iter().map(|i| zeta(i, env)).collect()),
        },
    }
}

fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Back-translation of a single hint term.
pub struct Backtranslator<'a> {
    m: &'a SymbolMap,
    /// SMT bound name to source name and type.
    scope: Vec<(String, String, SourceType)>,
    /// Free variables of rewrite hints, closed over at the end.
    free: Vec<(String, String, SourceType)>,
    allow_free: bool,
    counter: usize,
    pub selectors: BTreeSet<SelectorKey>,
}

impl<'a> Backtranslator<'a> {
    pub fn new(m: &'a SymbolMap) -> Self {
        Backtranslator { m, scope: Vec::new(), free: Vec::new(), allow_free: false, counter: 0, selectors: BTreeSet::new() }
    }

    fn fresh(&mut self) -> String {
        loop {
            let name = format!("x{}", self.counter);
            self.counter += 1;
            let used = self.m.signature.is_symbol(&name)
                || self.scope.iter().any(|(_, s, _)| *s == name)
                || self.free.iter().any(|(_, s, _)| *s == name);
            if !used {
                return name;
            }
        }
    }

    fn source_type(&self, sort: &str) -> Result<SourceType, InterpError> {
        match sort {
            "Int" => Ok(SourceType::Int),
            "Bool" => Err(InterpError::Unsupported("quantifier over Bool".into())),
            s => {
                let s = s.trim_matches('|');
                if let Some((src, _)) = self.m.sort_names.iter().find(|(_, v)| v.trim_matches('|') == s) {
                    if self.m.signature.datatype(src).is_some() {
                        return Ok(SourceType::Data(src.clone()));
                    }
                    return Ok(SourceType::Opaque(src.clone()));
                }
                Err(InterpError::UnknownSymbol(s.to_string()))
            }
        }
    }

    fn coerce(&self, t: Term, found: SourceType, expected: &SourceType) -> Result<Term, InterpError> {
        match (&found, expected) {
            (f, e) if f == e => Ok(t),
            // A non-negative numeral is already a Nat numeral.
            (SourceType::Int, SourceType::Nat) if matches!(t, Term::IntLit(k) if k >= 0) => {
                let Term::IntLit(k) = t else { unreachable!() };
                Ok(Term::NatLit(k as u64))
            }
            (SourceType::Nat, SourceType::Int) => Ok(Term::CoerceNatToInt(Box::new(t))),
            (SourceType::Int, SourceType::Nat) => Ok(Term::IntNatAbs(Box::new(t))),
            _ => Err(InterpError::SortClash { term: crate::logic::print_term(&t), expected: expected.clone(), found }),
        }
    }

    /// Back-translate at a given source type.
    pub fn term_at(&mut self, t: &Sexp, expected: &SourceType) -> Result<Term, InterpError> {
        let (term, ty) = self.infer(t)?;
        self.coerce(term, ty, expected)
    }

    fn int(&mut self, t: &Sexp) -> Result<Term, InterpError> {
        self.term_at(t, &SourceType::Int)
    }

    fn prop(&mut self, t: &Sexp) -> Result<Term, InterpError> {
        self.term_at(t, &SourceType::Prop)
    }

    /// Two operands at a common type: Nat meets Int at Int.
    fn pair(&mut self, a: &Sexp, b: &Sexp) -> Result<(Term, Term, SourceType), InterpError> {
        let (ta, ya) = self.infer(a)?;
        let (tb, yb) = self.infer(b)?;
        if ya == yb {
            return Ok((ta, tb, ya));
        }
        if ya.is_numeric() && yb.is_numeric() {
            let ta = self.coerce(ta, ya, &SourceType::Int)?;
            let tb = self.coerce(tb, yb, &SourceType::Int)?;
            return Ok((ta, tb, SourceType::Int));
        }
        Err(InterpError::SortClash { term: b.to_string(), expected: ya, found: yb })
    }

    fn infer(&mut self, t: &Sexp) -> Result<(Term, SourceType), InterpError> {
        match t {
            Sexp::Atom(a) => self.atom(a),
            Sexp::List(items) if items.is_empty() => Err(InterpError::Unsupported("()".into())),
            Sexp::List(items) => {
                if let Sexp::List(h) = &items[0] {
                    if h.len() == 3 && h[0].is_atom("_") && h[1].is_atom("is") && items.len() == 2 {
                        let c = h[2].as_atom().unwrap_or_default().to_string();
                        return self.tester(&c, &items[1]);
                    }
                    return Err(InterpError::Unsupported(t.to_string()));
                }
                let head = items[0].as_atom().unwrap();
                let args = &items[1..];
                self.application(head, args, t)
            }
        }
    }

    fn atom(&mut self, a: &str) -> Result<(Term, SourceType), InterpError> {
        if a == "true" {
            return Ok((Term::True, SourceType::Prop));
        }
        if a == "false" {
            return Ok((Term::False, SourceType::Prop));
        }
        if is_numeral(a) {
            let k: i64 = a.parse().map_err(|_| InterpError::Unsupported(format!("numeral {a}")))?;
            return Ok((Term::IntLit(k), SourceType::Int));
        }
        if let Some((_, src, ty)) = self.scope.iter().rev().find(|(s, _, _)| s == a) {
            return Ok((term::var(src.clone()), ty.clone()));
        }
        if let Some((_, src, ty)) = self.free.iter().find(|(s, _, _)| s == a) {
            return Ok((term::var(src.clone()), ty.clone()));
        }
        self.application(a, &[], &Sexp::atom(a))
    }

    fn tester(&mut self, ctor: &str, arg: &Sexp) -> Result<(Term, SourceType), InterpError> {
        let key = ctor.trim_matches('|');
        let Some((src, _)) = self.m.source(ctor).or_else(|| self.m.source(key)).cloned() else {
            return Err(InterpError::UnknownSymbol(ctor.to_string()));
        };
        let Some((SymbolKind::Constructor { datatype, index }, _)) = self.m.signature.lookup(&src) else {
            return Err(InterpError::UnknownSymbol(ctor.to_string()));
        };
        let x = self.term_at(arg, &SourceType::Data(datatype.clone()))?;
        let c = self.m.signature.datatype(&datatype).unwrap().constructors[index].clone();
        if c.args.is_empty() {
            return Ok((term::eq(x, term::cnst(src)), SourceType::Prop));
        }
        let names: Vec<String> = c.args.iter().map(|_| self.fresh()).collect();
        let body = term::eq(x, term::app(src, names.iter().map(term::var).collect()));
        let t = names.iter().zip(&c.args).rev().fold(body, |acc, (n, ty)| term::exists(n.clone(), ty.clone(), acc));
        Ok((t, SourceType::Prop))
    }

    fn quantifier(&mut self, forall: bool, binds: &Sexp, body: &Sexp) -> Result<(Term, SourceType), InterpError> {
        let binds = binds.as_list().ok_or_else(|| InterpError::Unsupported("binder list".into()))?;
        let mut bound = Vec::new();
        for b in binds {
            let Some([Sexp::Atom(x), sort]) = b.as_list() else {
                return Err(InterpError::Unsupported(format!("binder {b}")));
            };
            let ty = self.source_type(sort.as_atom().unwrap_or_default())?;
            let name = self.fresh();
            self.scope.push((x.clone(), name.clone(), ty.clone()));
            bound.push((name, ty));
        }
        let inner = self.prop(body);
        self.scope.truncate(self.scope.len() - bound.len());
        let mut t = inner?;
        for (name, ty) in bound.into_iter().rev() {
            t = if forall { term::forall(name, ty, t) } else { term::exists(name, ty, t) };
        }
        Ok((t, SourceType::Prop))
    }

    fn application(&mut self, head: &str, args: &[Sexp], whole: &Sexp) -> Result<(Term, SourceType), InterpError> {
        use SourceType::{Int, Prop};
        let n = args.len();
        let props = |s: &mut Self| args.iter().map(|a| s.prop(a)).collect::<Result<Vec<_>, _>>();
        let ints = |s: &mut Self| args.iter().map(|a| s.int(a)).collect::<Result<Vec<_>, _>>();
        match head {
            "!" if n >= 1 => return self.infer(&args[0]),
            "let" => return self.infer(&zeta_expand(whole)),
            "forall" | "exists" if n == 2 => return self.quantifier(head == "forall", &args[0], &args[1]),
            "not" if n == 1 => return Ok((term::not(self.prop(&args[0])?), Prop)),
            "and" => return Ok((term::fold_left(props(self)?, term::and, Term::True), Prop)),
            "or" => return Ok((term::fold_left(props(self)?, term::or, Term::False), Prop)),
            "xor" if n == 2 => {
                let (a, b) = (self.prop(&args[0])?, self.prop(&args[1])?);
                return Ok((term::not(term::iff(a, b)), Prop));
            }
            "=>" if n >= 2 => {
                let mut ps = props(self)?;
                let last = ps.pop().unwrap();
                return Ok((ps.into_iter().rev().fold(last, |acc, p| term::implies(p, acc)), Prop));
            }
            "=" | "distinct" if n >= 2 => {
                let mut parts = Vec::new();
                for i in 0..n - 1 {
                    let js: Vec<usize> = if head == "=" { vec![i + 1] } else { (i + 1..n).collect() };
                    for j in js {
                        let (a, b, ty) = self.pair(&args[i], &args[j])?;
                        let e = if ty == Prop { term::iff(a, b) } else { term::eq(a, b) };
                        parts.push(if head == "=" { e } else { term::not(e) });
                    }
                }
                return Ok((term::fold_left(parts, term::and, Term::True), Prop));
            }
            "ite" if n == 3 => {
                let c = self.prop(&args[0])?;
                let (a, b, ty) = self.pair(&args[1], &args[2])?;
                if ty == Prop {
                    let t = term::and(term::implies(c.clone(), a), term::implies(term::not(c), b));
                    return Ok((t, Prop));
                }
                return Ok((Term::Ite(Box::new(c), Box::new(a), Box::new(b)), ty));
            }
            "-" if n == 1 => {
                if let Some(k) = args[0].as_atom().filter(|a| is_numeral(a)) {
                    let k: i64 = k.parse().map_err(|_| InterpError::Unsupported(format!("numeral {k}")))?;
                    return Ok((Term::IntLit(-k), Int));
                }
                return Ok((Term::Neg(Box::new(self.int(&args[0])?)), Int));
            }
            "abs" if n == 1 => return Ok((Term::Abs(Box::new(self.int(&args[0])?)), Int)),
            _ => {}
        }
        if let Some(op) = ArithOp::from_symbol(head).filter(|_| n >= 2) {
            let mut xs = ints(self)?.into_iter();
            let first = xs.next().unwrap();
            return Ok((xs.fold(first, |a, b| term::bin(op, a, b)), Int));
        }
        if let Some(op) = CmpOp::from_symbol(head).filter(|_| n >= 2) {
            let xs = ints(self)?;
            let parts = xs.windows(2).map(|w| term::cmp(op, w[0].clone(), w[1].clone())).collect();
            return Ok((term::fold_left(parts, term::and, Term::True), Prop));
        }
        self.symbol(head, args)
    }

    fn symbol(&mut self, head: &str, args: &[Sexp]) -> Result<(Term, SourceType), InterpError> {
        if is_solver_skolem(head) {
            return Err(InterpError::UnknownSolverSkolem(head.to_string()));
        }
        if let Some(ty) = self.m.wf_type(head).cloned() {
            let [arg] = args else { return Err(InterpError::Unsupported(format!("{head} arity"))) };
            let SourceType::Data(d) = &ty else { unreachable!() };
            if self.m.signature.datatype(d).is_some_and(|d| d.is_recursive()) {
                return Err(InterpError::Unsupported(format!("recursive well-formedness predicate {head}")));
            }
            let body = self.m.build_wf(&ty).replace_atom("x", arg);
            return Ok((self.prop(&body)?, SourceType::Prop));
        }
        if let Some((dt, ctor, j)) = self.m.selector_key(head).cloned() {
            let decl = self.m.signature.datatype(&dt).unwrap().clone();
            let [arg] = args else { return Err(InterpError::Unsupported(format!("{head} arity"))) };
            let x = self.term_at(arg, &SourceType::Data(dt.clone()))?;
            let (_, c) = decl.constructor(&ctor).unwrap();
            let result = c.args[j].clone();
            let name = if decl.is_structure {
                decl.projections[j].name.clone()
            } else {
                self.selectors.insert((dt.clone(), ctor.clone(), j));
                selector_name(&dt, &ctor, j)
            };
            return Ok((term::app(name, vec![x]), result));
        }
        let Some((src, ty)) = self.m.source(head).cloned() else {
            if self.allow_free && args.is_empty() && !head.starts_with('|') {
                let name = self.fresh();
                self.free.push((head.to_string(), name.clone(), SourceType::Int));
                return Ok((term::var(name), SourceType::Int));
            }
            return Err(InterpError::UnknownSymbol(head.to_string()));
        };
        let (params, ret) = ty.uncurry();
        if params.len() != args.len() {
            return Err(InterpError::Unsupported(format!("partial application of {src}")));
        }
        let params: Vec<SourceType> = params.into_iter().cloned().collect();
        let ret = ret.clone();
        let mut targs = Vec::new();
        for (a, p) in args.iter().zip(&params) {
            if *p == SourceType::Prop {
                return Err(InterpError::Unsupported(format!("Prop argument to {src}")));
            }
            targs.push(self.term_at(a, p)?);
        }
        let t = if targs.is_empty() { term::cnst(src) } else { term::app(src, targs) };
        Ok((t, ret))
    }
}

/// Back-translate one SMT term at an expected source type.
pub fn backtranslate_term(m: &SymbolMap, t: &Sexp, expected: &SourceType) -> Result<Term, InterpError> {
    Backtranslator::new(m).term_at(&zeta_expand(t), expected)
}

/// Back-translate a hint into a closed proposition, with the selector keys it needs.
pub fn interpret_hint(m: &SymbolMap, hint: &Hint) -> Result<(Term, BTreeSet<SelectorKey>), InterpError> {
    let mut bt = Backtranslator::new(m);
    let statement = match &hint.payload {
        HintPayload::Formula(f) => bt.prop(&zeta_expand(f))?,
        HintPayload::Rewrite(l, r) => {
            bt.allow_free = true;
            let (a, b, ty) = bt.pair(&zeta_expand(l), &zeta_expand(r))?;
            let e = if ty == SourceType::Prop { term::iff(a, b) } else { term::eq(a, b) };
            let free = std::mem::take(&mut bt.free);
            free.into_iter().rev().fold(e, |acc, (_, name, ty)| term::forall(name, ty, acc))
        }
    };
    Ok((statement, bt.selectors))
}

/// Interpret every hint. Uninterpretable hints are dropped with a reason.
pub fn interpret_hints(m: &SymbolMap, goal: &Goal, hints: &[Hint]) -> Interpretation {
    let mut pending = Vec::new();
    let mut dropped = Vec::new();
    let mut needed = BTreeSet::new();
    for h in hints {
        match interpret_hint(m, h) {
            Ok((statement, sels)) => {
                needed.extend(sels.iter().cloned());
                pending.push((h, statement, sels));
            }
            Err(e) => {
                log::warn!("dropping hint {}: {e}", h.ordinal);
                dropped.push((h.clone(), e));
            }
        }
    }
    let selectors = synthesize_selectors(&goal.signature, &needed);
    let mut sig = goal.signature.clone();
    for s in &selectors {
        sig.consts.insert(s.name.clone(), s.fn_type.clone());
    }
    let mut out = Vec::new();
    for (h, statement, sels) in pending {
        if let Err(e) = typecheck(&sig, &statement) {
            dropped.push((h.clone(), InterpError::IllTyped(e)));
            continue;
        }
        let base = format!("smtLemma{}", h.ordinal);
        let taken = |n: &str| goal.hypothesis(n).is_some() || selectors.iter().any(|s| s.fact_name == n);
        let name = sig.fresh_name(&base, &taken);
        let needs_selectors = sels.iter().map(|(d, c, j)| selector_name(d, c, *j)).collect();
        out.push(InterpretedHint { name, statement, origin: h.clone(), needs_selectors });
    }
    Interpretation { hints: out, selectors, dropped, signature: sig }
}

/// SMT sort to the default source type, for callers that need it.
pub fn default_type(m: &SymbolMap, s: &SmtSort) -> Option<SourceType> {
    match s {
        SmtSort::Bool => Some(SourceType::Prop),
        SmtSort::Int => Some(SourceType::Int),
        SmtSort::Data(n) | SmtSort::Uninterpreted(n) => {
            let (src, _) = m.sort_names.iter().find(|(_, v)| *v == n)?;
            Some(if m.signature.datatype(src).is_some() { SourceType::Data(src.clone()) } else { SourceType::Opaque(src.clone()) })
        }
    }
}
