//! Reader for the s-expression problem format.
//!
//! Numerals carry no type of their own: they are elaborated against the type
//! demanded by their context (a function parameter, the other side of an
//! equation or comparison) and default to `Nat` when nothing constrains them.

use std::collections::HashSet;

use thiserror::Error;

use crate::sexp::{read_all_located, Located, Pos};

use super::term::*;
use super::typecheck::{type_of, Env, TypeError};
use super::types::{Constructor, DatatypeDecl, Projection, Signature, SourceType};
use super::Goal;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("type error at {pos}: {source}")]
    Type { pos: Pos, source: TypeError },
    #[error("invalid declaration at {pos}: {msg}")]
    Declaration { pos: Pos, msg: String },
}

impl ParseError {
    /// A stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "syntax",
            ParseError::UnknownSymbol { .. } => "unknown-symbol",
            ParseError::Type { .. } => "type-mismatch",
            ParseError::Declaration { .. } => "declaration",
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::Type { pos, .. }
            | ParseError::Declaration { pos, .. } => *pos,
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

fn type_err(pos: Pos, source: TypeError) -> ParseError {
    ParseError::Type { pos, source }
}

fn mismatch(pos: Pos, context: &str, expected: &SourceType, found: SourceType) -> ParseError {
    type_err(pos, TypeError::Mismatch { context: context.into(), expected: expected.to_string(), found })
}

const RESERVED: &[&str] = &[
    "forall", "exists", "not", "and", "or", "=>", "iff", "=", "+", "-", "*", "div", "mod", "abs", "<=", "<", ">=",
    ">", "ite", "match", "as", "true", "false", "Int.ofNat", "natAbs", "Nat", "Int", "Prop", "->",
];

/// Parse and typecheck a problem file.
pub fn parse_problem(text: &str) -> Result<Goal, ParseError> {
    let items = read_all_located(text).map_err(|e| syntax(e.pos, e.msg))?;
    let mut p = ProblemParser::default();
    let mut target: Option<Term> = None;
    let mut hyps: Vec<Hypothesis> = Vec::new();
    for item in &items {
        let list = item.as_list().ok_or_else(|| syntax(item.pos(), "expected a command"))?;
        let head = item.head().ok_or_else(|| syntax(item.pos(), "expected a command name"))?;
        match head {
            "declare-sort" => {
                let name = atom_arg(list, 1, item.pos())?;
                p.check_fresh(&name, list[1].pos())?;
                p.sig.sorts.push(name);
            }
            "declare-datatype" => p.datatype(list, item.pos())?,
            "declare-const" => {
                if list.len() != 3 {
                    return Err(syntax(item.pos(), "expected (declare-const <name> <type>)"));
                }
                let name = atom_arg(list, 1, item.pos())?;
                p.check_fresh(&name, list[1].pos())?;
                let ty = p.parse_type(&list[2])?;
                p.check_decl_type(&ty, list[2].pos())?;
                p.sig.consts.insert(name, ty);
            }
            "declare-fun" => {
                if list.len() != 4 {
                    return Err(syntax(item.pos(), "expected (declare-fun <name> (<type>*) <type>)"));
                }
                let name = atom_arg(list, 1, item.pos())?;
                p.check_fresh(&name, list[1].pos())?;
                let params = list[2].as_list().ok_or_else(|| syntax(list[2].pos(), "expected a parameter list"))?;
                let params = params.iter().map(|t| p.parse_type(t)).collect::<Result<Vec<_>, _>>()?;
                let ret = p.parse_type(&list[3])?;
                let ty = SourceType::function(params, ret);
                p.check_decl_type(&ty, list[2].pos())?;
                p.sig.consts.insert(name, ty);
            }
            "declare-inhabited" => {
                if list.len() != 2 {
                    return Err(syntax(item.pos(), "expected (declare-inhabited <type>)"));
                }
                let ty = p.parse_type(&list[1])?;
                p.sig.inhabited.insert(ty);
            }
            "hyp" => {
                if list.len() != 3 {
                    return Err(syntax(item.pos(), "expected (hyp <name> <term>)"));
                }
                let name = atom_arg(list, 1, item.pos())?;
                if hyps.iter().any(|h| h.name == name) {
                    return Err(ParseError::Declaration { pos: list[1].pos(), msg: format!("duplicate hypothesis `{name}`") });
                }
                let prop = p.formula(&list[2])?;
                hyps.push(Hypothesis { name, prop });
            }
            "goal" => {
                if list.len() != 2 {
                    return Err(syntax(item.pos(), "expected (goal <term>)"));
                }
                if target.is_some() {
                    return Err(ParseError::Declaration { pos: item.pos(), msg: "more than one goal".into() });
                }
                target = Some(p.formula(&list[1])?);
            }
            other => return Err(syntax(item.pos(), format!("unknown command `{other}`"))),
        }
    }
    let target = target.ok_or_else(|| syntax(Pos { line: 1, col: 1 }, "missing (goal ...)"))?;
    Ok(Goal { signature: p.sig, hypotheses: hyps, target })
}

/// Parse a single term against an existing signature. Used for hint and
/// script statements; the result is alpha-normalized.
pub fn parse_term(sig: &Signature, text: &str, expected: Option<&SourceType>) -> Result<Term, ParseError> {
    let items = read_all_located(text).map_err(|e| syntax(e.pos, e.msg))?;
    if items.len() != 1 {
        return Err(syntax(Pos { line: 1, col: 1 }, "expected exactly one term"));
    }
    parse_located_term(sig, &items[0], expected)
}

pub fn parse_located_term(sig: &Signature, s: &Located, expected: Option<&SourceType>) -> Result<Term, ParseError> {
    let p = ProblemParser { sig: sig.clone() };
    let (t, _) = p.elab(s, &mut Vec::new(), expected)?;
    Ok(t.alpha_normalize(&p.sig, &HashSet::new()))
}

/// Parse a type against an existing signature.
pub fn parse_type(sig: &Signature, s: &Located) -> Result<SourceType, ParseError> {
    ProblemParser { sig: sig.clone() }.parse_type(s)
}

fn atom_arg(list: &[Located], i: usize, pos: Pos) -> Result<String, ParseError> {
    list.get(i)
        .and_then(Located::as_atom)
        .map(str::to_string)
        .ok_or_else(|| syntax(list.get(i).map(Located::pos).unwrap_or(pos), "expected a name"))
}

fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_neg_numeral(s: &str) -> bool {
    s.len() > 1 && s.starts_with('-') && is_numeral(&s[1..])
}

/// Mirror of the printer's notion of a literal-only numeric expression.
fn literal_only(s: &Located) -> bool {
    match s {
        Located::Atom(a, _) => is_numeral(a),
        Located::List(items, _) => match s.head() {
            Some("+" | "*" | "div" | "mod") => items.len() >= 3 && items[1..].iter().all(literal_only),
            Some("-") => items.len() >= 3 && items[1..].iter().all(literal_only),
            Some("ite") => items.len() == 4 && literal_only(&items[2]) && literal_only(&items[3]),
            _ => false,
        },
    }
}

#[derive(Default)]
struct ProblemParser {
    sig: Signature,
}

impl ProblemParser {
    fn check_fresh(&self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if RESERVED.contains(&name) || is_numeral(name) || is_neg_numeral(name) {
            return Err(ParseError::Declaration { pos, msg: format!("`{name}` is reserved") });
        }
        if self.sig.is_symbol(name) || self.sig.has_type_name(name) {
            return Err(ParseError::Declaration { pos, msg: format!("`{name}` is already declared") });
        }
        Ok(())
    }

    fn check_decl_type(&self, ty: &SourceType, pos: Pos) -> Result<(), ParseError> {
        let (params, _) = ty.uncurry();
        if params.iter().any(|p| p.mentions_prop() || p.is_arrow()) {
            return Err(ParseError::Declaration { pos, msg: "function parameters must be first-order and not Prop".into() });
        }
        Ok(())
    }

    fn parse_type(&self, s: &Located) -> Result<SourceType, ParseError> {
        match s {
            Located::Atom(a, pos) => match a.as_str() {
                "Nat" => Ok(SourceType::Nat),
                "Int" => Ok(SourceType::Int),
                "Prop" => Ok(SourceType::Prop),
                name if self.sig.sorts.iter().any(|s| s == name) => Ok(SourceType::Opaque(name.into())),
                name if self.sig.datatype(name).is_some() => Ok(SourceType::Data(name.into())),
                name => Err(ParseError::UnknownSymbol { pos: *pos, name: name.into() }),
            },
            Located::List(items, pos) => {
                if s.head() != Some("->") || items.len() < 3 {
                    return Err(syntax(*pos, "expected a type"));
                }
                let tys = items[1..].iter().map(|t| self.parse_type(t)).collect::<Result<Vec<_>, _>>()?;
                let mut tys = tys.into_iter().rev();
                let ret = tys.next().unwrap();
                Ok(tys.fold(ret, |acc, d| SourceType::arrow(d, acc)))
            }
        }
    }

    fn datatype(&mut self, list: &[Located], pos: Pos) -> Result<(), ParseError> {
        let name = atom_arg(list, 1, pos)?;
        self.check_fresh(&name, list[1].pos())?;
        let mut idx = 2;
        let is_structure = list.get(2).and_then(Located::as_atom) == Some(":structure");
        if is_structure {
            idx = 3;
        }
        if list.len() != idx + 1 {
            return Err(syntax(pos, "expected (declare-datatype <name> [:structure] (<ctor>*))"));
        }
        let ctor_list = list[idx].as_list().ok_or_else(|| syntax(list[idx].pos(), "expected a constructor list"))?;
        // Register the name first so recursive occurrences resolve.
        self.sig.datatypes.push(DatatypeDecl { name: name.clone(), is_structure, constructors: vec![], projections: vec![] });
        let mut ctors = Vec::new();
        let mut projections = Vec::new();
        let mut seen = HashSet::new();
        for c in ctor_list {
            let (cname, args): (String, &[Located]) = match c {
                Located::Atom(a, _) => (a.clone(), &[]),
                Located::List(items, p) => {
                    let n = items.first().and_then(Located::as_atom).ok_or_else(|| syntax(*p, "expected a constructor name"))?;
                    (n.to_string(), &items[1..])
                }
            };
            self.check_fresh(&cname, c.pos())?;
            if !seen.insert(cname.clone()) {
                return Err(ParseError::Declaration { pos: c.pos(), msg: format!("duplicate constructor `{cname}`") });
            }
            let mut arg_tys = Vec::new();
            for (j, a) in args.iter().enumerate() {
                let named = match a {
                    Located::List(items, _) if items.len() == 2 && a.head().is_some_and(|h| h != "->") => {
                        Some((items[0].as_atom().unwrap().to_string(), &items[1]))
                    }
                    _ => None,
                };
                let ty = match named {
                    Some((field, tyloc)) => {
                        if !is_structure {
                            return Err(ParseError::Declaration { pos: a.pos(), msg: "only structures may name fields".into() });
                        }
                        self.check_fresh(&field, a.pos())?;
                        let ty = self.parse_type(tyloc)?;
                        projections.push(Projection { name: field, result: ty.clone() });
                        ty
                    }
                    None => {
                        let ty = self.parse_type(a)?;
                        if is_structure {
                            projections.push(Projection { name: format!("{name}.proj{j}"), result: ty.clone() });
                        }
                        ty
                    }
                };
                arg_tys.push(ty);
            }
            ctors.push(Constructor { name: cname, args: arg_tys });
        }
        let decl = DatatypeDecl { name: name.clone(), is_structure, constructors: ctors, projections };
        decl.validate().map_err(|msg| ParseError::Declaration { pos, msg })?;
        *self.sig.datatypes.last_mut().unwrap() = decl;
        Ok(())
    }

    fn formula(&self, s: &Located) -> Result<Term, ParseError> {
        let (t, _) = self.elab(s, &mut Vec::new(), Some(&SourceType::Prop))?;
        let t = t.alpha_normalize(&self.sig, &HashSet::new());
        type_of(&self.sig, &mut Vec::new(), &t).map_err(|e| type_err(s.pos(), e))?;
        Ok(t)
    }

    fn binders(&self, s: &Located) -> Result<Vec<(String, SourceType)>, ParseError> {
        let list = s.as_list().ok_or_else(|| syntax(s.pos(), "expected a binder list"))?;
        if list.is_empty() {
            return Err(syntax(s.pos(), "empty binder list"));
        }
        list.iter()
            .map(|b| match b.as_list() {
                Some([Located::Atom(x, _), ty]) => Ok((x.clone(), self.parse_type(ty)?)),
                _ => Err(syntax(b.pos(), "expected (<name> <type>)")),
            })
            .collect()
    }

    fn check(&self, pos: Pos, ctx: &str, expected: Option<&SourceType>, got: SourceType) -> Result<SourceType, ParseError> {
        match expected {
            Some(e) if *e != got => Err(mismatch(pos, ctx, e, got)),
            _ => Ok(got),
        }
    }

    /// Elaborate a group of operands that must share one type.
    fn elab_same(&self, args: &[Located], env: &mut Env, expected: Option<&SourceType>) -> Result<(Vec<Term>, SourceType), ParseError> {
        let ty = match expected {
            Some(t) => t.clone(),
            None => match args.iter().position(|a| !literal_only(a)) {
                Some(i) => self.elab(&args[i], env, None)?.1,
                None => SourceType::Nat,
            },
        };
        let terms = args.iter().map(|a| self.elab(a, env, Some(&ty)).map(|(t, _)| t)).collect::<Result<Vec<_>, _>>()?;
        Ok((terms, ty))
    }

    fn elab(&self, s: &Located, env: &mut Env, expected: Option<&SourceType>) -> Result<(Term, SourceType), ParseError> {
        let pos = s.pos();
        match s {
            Located::Atom(a, _) => {
                let (t, ty) = match a.as_str() {
                    "true" => (Term::True, SourceType::Prop),
                    "false" => (Term::False, SourceType::Prop),
                    n if is_numeral(n) => {
                        let v: u64 = n.parse().map_err(|_| syntax(pos, "numeral out of range"))?;
                        match expected {
                            Some(SourceType::Int) => {
                                let k = i64::try_from(v).map_err(|_| syntax(pos, "numeral out of range"))?;
                                (Term::IntLit(k), SourceType::Int)
                            }
                            _ => (Term::NatLit(v), SourceType::Nat),
                        }
                    }
                    n if is_neg_numeral(n) => {
                        let k: i64 = n.parse().map_err(|_| syntax(pos, "numeral out of range"))?;
                        (Term::IntLit(k), SourceType::Int)
                    }
                    x => {
                        if let Some((_, ty)) = env.iter().rev().find(|(n, _)| n == x) {
                            (Term::Var(x.to_string()), ty.clone())
                        } else if let Some((_, ty)) = self.sig.lookup(x) {
                            if ty.is_arrow() {
                                let (ps, _) = ty.uncurry();
                                return Err(type_err(pos, TypeError::Arity { func: x.into(), expected: ps.len(), found: 0 }));
                            }
                            (Term::Const(x.to_string()), ty)
                        } else {
                            return Err(ParseError::UnknownSymbol { pos, name: x.into() });
                        }
                    }
                };
                let ty = self.check(pos, "term", expected, ty)?;
                Ok((t, ty))
            }
            Located::List(items, _) => {
                let head = s.head().ok_or_else(|| syntax(pos, "expected an operator or function name"))?;
                let args = &items[1..];
                let arity = |n: usize| -> Result<(), ParseError> {
                    if args.len() == n {
                        Ok(())
                    } else {
                        Err(syntax(pos, format!("`{head}` expects {n} argument(s)")))
                    }
                };
                let prop = SourceType::Prop;
                let boxed_prop = |this: &Self, env: &mut Env, x: &Located| this.elab(x, env, Some(&prop)).map(|(t, _)| t);
                let (t, ty) = match head {
                    "forall" | "exists" => {
                        arity(2)?;
                        let bs = self.binders(&args[0])?;
                        for (_, ty) in &bs {
                            if ty.is_arrow() {
                                return Err(type_err(pos, TypeError::Unsupported(format!("quantification over function type {ty}"))));
                            }
                        }
                        let n = bs.len();
                        env.extend(bs.iter().cloned());
                        let body = boxed_prop(self, env, &args[1]);
                        env.truncate(env.len() - n);
                        let mut body = body?;
                        for (x, ty) in bs.into_iter().rev() {
                            body = if head == "forall" { forall(x, ty, body) } else { exists(x, ty, body) };
                        }
                        (body, prop.clone())
                    }
                    "not" => {
                        arity(1)?;
                        (not(boxed_prop(self, env, &args[0])?), prop.clone())
                    }
                    "and" | "or" => {
                        let parts = args.iter().map(|a| boxed_prop(self, env, a)).collect::<Result<Vec<_>, _>>()?;
                        let t = if head == "and" { fold_left(parts, and, Term::True) } else { fold_left(parts, or, Term::False) };
                        (t, prop.clone())
                    }
                    "=>" => {
                        if args.len() < 2 {
                            return Err(syntax(pos, "`=>` expects at least 2 arguments"));
                        }
                        let mut parts = args.iter().map(|a| boxed_prop(self, env, a)).collect::<Result<Vec<_>, _>>()?;
                        let last = parts.pop().unwrap();
                        (parts.into_iter().rev().fold(last, |acc, p| implies(p, acc)), prop.clone())
                    }
                    "iff" => {
                        arity(2)?;
                        (iff(boxed_prop(self, env, &args[0])?, boxed_prop(self, env, &args[1])?), prop.clone())
                    }
                    "=" => {
                        if args.len() < 2 {
                            return Err(syntax(pos, "`=` expects at least 2 arguments"));
                        }
                        let (ts, ty) = self.elab_same(args, env, None)?;
                        if ty.is_arrow() {
                            return Err(type_err(pos, TypeError::Unsupported("equality between functions".into())));
                        }
                        let eqs = ts.windows(2).map(|w| eq(w[0].clone(), w[1].clone())).collect();
                        (fold_left(eqs, and, Term::True), prop.clone())
                    }
                    "<=" | "<" | ">=" | ">" => {
                        arity(2)?;
                        let (ts, ty) = self.elab_same(args, env, None)?;
                        if !ty.is_numeric() {
                            return Err(mismatch(pos, head, &SourceType::Int, ty));
                        }
                        let mut it = ts.into_iter();
                        (cmp(CmpOp::from_symbol(head).unwrap(), it.next().unwrap(), it.next().unwrap()), prop.clone())
                    }
                    "-" if args.len() == 1 => {
                        let (x, _) = self.elab(&args[0], env, Some(&SourceType::Int))?;
                        (Term::Neg(Box::new(x)), SourceType::Int)
                    }
                    "+" | "-" | "*" | "div" | "mod" => {
                        if args.len() < 2 {
                            return Err(syntax(pos, format!("`{head}` expects at least 2 arguments")));
                        }
                        let (ts, ty) = self.elab_same(args, env, expected)?;
                        if !ty.is_numeric() {
                            return Err(mismatch(pos, head, &SourceType::Int, ty));
                        }
                        let op = ArithOp::from_symbol(head).unwrap();
                        let mut it = ts.into_iter();
                        let first = it.next().unwrap();
                        (it.fold(first, |acc, x| bin(op, acc, x)), ty)
                    }
                    "abs" => {
                        arity(1)?;
                        let (x, _) = self.elab(&args[0], env, Some(&SourceType::Int))?;
                        (Term::Abs(Box::new(x)), SourceType::Int)
                    }
                    "Int.ofNat" => {
                        arity(1)?;
                        let (x, _) = self.elab(&args[0], env, Some(&SourceType::Nat))?;
                        (ofnat(x), SourceType::Int)
                    }
                    "natAbs" => {
                        arity(1)?;
                        let (x, _) = self.elab(&args[0], env, Some(&SourceType::Int))?;
                        (natabs(x), SourceType::Nat)
                    }
                    "as" => {
                        arity(2)?;
                        let ty = self.parse_type(&args[1])?;
                        self.elab(&args[0], env, Some(&ty))?
                    }
                    "ite" => {
                        arity(3)?;
                        let c = boxed_prop(self, env, &args[0])?;
                        let (ts, ty) = self.elab_same(&args[1..], env, expected)?;
                        let mut it = ts.into_iter();
                        (Term::Ite(Box::new(c), Box::new(it.next().unwrap()), Box::new(it.next().unwrap())), ty)
                    }
                    "match" => self.elab_match(args, env, expected, pos)?,
                    f => {
                        let (_, fty) = self.sig.lookup(f).ok_or_else(|| ParseError::UnknownSymbol { pos, name: f.into() })?;
                        let (params, ret) = fty.uncurry();
                        if params.len() != args.len() {
                            return Err(type_err(pos, TypeError::Arity { func: f.into(), expected: params.len(), found: args.len() }));
                        }
                        let mut targs = Vec::new();
                        for (i, (p, a)) in params.iter().zip(args).enumerate() {
                            let (t, _) = self.elab(a, env, Some(p)).map_err(|e| match e {
                                ParseError::Type { source: TypeError::Mismatch { found, .. }, pos } => type_err(
                                    pos,
                                    TypeError::IllTypedApplication { func: f.into(), index: i, expected: (*p).clone(), found },
                                ),
                                other => other,
                            })?;
                            targs.push(t);
                        }
                        (app(f, targs), ret.clone())
                    }
                };
                let ty = self.check(pos, head, expected, ty)?;
                Ok((t, ty))
            }
        }
    }

    fn elab_match(&self, args: &[Located], env: &mut Env, expected: Option<&SourceType>, pos: Pos) -> Result<(Term, SourceType), ParseError> {
        if args.len() != 2 {
            return Err(syntax(pos, "expected (match <term> ((<pattern> <term>)*))"));
        }
        let (scrut, sty) = self.elab(&args[0], env, None)?;
        let SourceType::Data(dname) = &sty else {
            return Err(mismatch(args[0].pos(), "match scrutinee", &SourceType::Data("<datatype>".into()), sty));
        };
        let decl = self.sig.datatype(dname).unwrap().clone();
        let cases = args[1].as_list().ok_or_else(|| syntax(args[1].pos(), "expected a case list"))?;
        let mut arms = Vec::new();
        let mut result_ty = expected.cloned();
        for case in cases {
            let Some([pat, body]) = case.as_list() else {
                return Err(syntax(case.pos(), "expected (<pattern> <term>)"));
            };
            let (ctor, binders): (String, Vec<String>) = match pat {
                Located::Atom(c, _) => (c.clone(), vec![]),
                Located::List(items, p) => {
                    let names = items
                        .iter()
                        .map(|i| i.as_atom().map(str::to_string).ok_or_else(|| syntax(*p, "expected a constructor pattern")))
                        .collect::<Result<Vec<_>, _>>()?;
                    (names[0].clone(), names[1..].to_vec())
                }
            };
            let (_, cdecl) = decl
                .constructor(&ctor)
                .ok_or_else(|| ParseError::UnknownSymbol { pos: pat.pos(), name: ctor.clone() })?;
            if cdecl.args.len() != binders.len() {
                return Err(type_err(pat.pos(), TypeError::Arity { func: ctor.clone(), expected: cdecl.args.len(), found: binders.len() }));
            }
            let n = binders.len();
            env.extend(binders.iter().cloned().zip(cdecl.args.iter().cloned()));
            let r = if result_ty.is_none() && literal_only(body) { Ok(None) } else { self.elab(body, env, result_ty.as_ref()).map(Some) };
            env.truncate(env.len() - n);
            match r? {
                Some((t, ty)) => {
                    result_ty.get_or_insert(ty);
                    arms.push(Some(MatchArm { ctor, binders, body: t }));
                }
                None => arms.push(None),
            }
        }
        // Literal-only arms are elaborated once the result type is known.
        let rty = result_ty.unwrap_or(SourceType::Nat);
        let mut out = Vec::new();
        for (case, arm) in cases.iter().zip(arms) {
            match arm {
                Some(a) => out.push(a),
                None => {
                    let [pat, body] = case.as_list().unwrap() else { unreachable!() };
                    let (ctor, binders) = match pat {
                        Located::Atom(c, _) => (c.clone(), vec![]),
                        Located::List(items, _) => {
                            let names: Vec<String> = items.iter().map(|i| i.as_atom().unwrap().to_string()).collect();
                            (names[0].clone(), names[1..].to_vec())
                        }
                    };
                    let (t, _) = self.elab(body, env, Some(&rty))?;
                    out.push(MatchArm { ctor, binders, body: t });
                }
            }
        }
        let t = Term::Match(Box::new(scrut), out);
        let mut probe = env.clone();
        let ty = type_of(&self.sig, &mut probe, &t).map_err(|e| type_err(pos, e))?;
        Ok((t, ty))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::print::print_term;

    #[test]
    fn parses_nat_nonnegativity_goal() {
        let g = parse_problem("(declare-const n Nat)(goal (<= 0 n))").unwrap();
        assert_eq!(g.signature.consts.get("n"), Some(&SourceType::Nat));
        assert_eq!(g.target, cmp(CmpOp::Le, Term::NatLit(0), cnst("n")));
    }

    #[test]
    fn parses_trivial_goal() {
        let g = parse_problem("(goal true)").unwrap();
        assert!(g.signature.consts.is_empty());
        assert!(g.hypotheses.is_empty());
        assert_eq!(g.target, Term::True);
    }

    #[test]
    fn literals_follow_context() {
        let g = parse_problem("(declare-const x Int)(goal (<= 0 (+ x 1)))").unwrap();
        assert_eq!(print_term(&g.target), "(<= 0 (+ x 1))");
        assert_eq!(
            g.target,
            cmp(CmpOp::Le, Term::IntLit(0), bin(ArithOp::Add, cnst("x"), Term::IntLit(1)))
        );
    }

    #[test]
    fn errors_are_distinct_and_positioned() {
        let e = parse_problem("(goal (<= 0 n)").unwrap_err();
        assert_eq!(e.kind(), "syntax");
        let e = parse_problem("(goal\n  (<= 0 n))").unwrap_err();
        assert_eq!(e.kind(), "unknown-symbol");
        assert_eq!(e.pos(), Pos { line: 2, col: 9 });
        let e = parse_problem("(declare-fun f (Int) Int)(declare-const n Nat)(goal (= (f n) 0))").unwrap_err();
        assert_eq!(e.kind(), "type-mismatch");
        assert!(matches!(e, ParseError::Type { source: TypeError::IllTypedApplication { .. }, .. }));
    }

    #[test]
    fn datatypes_and_structures() {
        let g = parse_problem(
            "(declare-sort A)(declare-datatype List ((nil) (cons A List)))\
             (declare-datatype Pair :structure ((mk (fst Nat) (snd Int))))\
             (declare-const p Pair)(declare-const l List)\
             (goal (and (<= 0 (fst p)) (= (match l ((nil 0) ((cons h t) 1))) 1)))",
        )
        .unwrap();
        let pair = g.signature.datatype("Pair").unwrap();
        assert!(pair.is_structure);
        assert_eq!(pair.projections.len(), 2);
        assert!(g.signature.is_inhabited(&SourceType::Data("List".into())));
    }

    #[test]
    fn duplicate_binders_are_renamed() {
        let g = parse_problem("(goal (and (forall ((x Int)) (= x x)) (exists ((x Int)) (= x x))))").unwrap();
        assert_eq!(g.target.binders(), vec!["x".to_string(), "x_1".to_string()]);
    }
}
