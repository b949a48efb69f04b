//! SMT-LIB sorts and a small sort checker for SMT terms.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::logic::SourceType;
use crate::sexp::Sexp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmtSort {
    Bool,
    Int,
    /// A declared datatype.
    Data(String),
    /// A declared uninterpreted sort.
    Uninterpreted(String),
}

impl SmtSort {
    pub fn to_sexp(&self) -> Sexp {
        Sexp::atom(self.to_string())
    }
}

impl fmt::Display for SmtSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmtSort::Bool => f.write_str("Bool"),
            SmtSort::Int => f.write_str("Int"),
            SmtSort::Data(n) | SmtSort::Uninterpreted(n) => f.write_str(n),
        }
    }
}

/// Sort of a source type; for arrows, the sort of the final result.
/// `sort_names` maps source datatype and sort names to their SMT names.
pub fn sort_of(ty: &SourceType, sort_names: &IndexMap<String, String>) -> SmtSort {
    let name = |n: &String| sort_names.get(n).cloned().unwrap_or_else(|| n.clone());
    match ty {
        SourceType::Prop => SmtSort::Bool,
        SourceType::Nat | SourceType::Int => SmtSort::Int,
        SourceType::Data(n) => SmtSort::Data(name(n)),
        SourceType::Opaque(n) => SmtSort::Uninterpreted(name(n)),
        SourceType::Arrow(..) => sort_of(ty.uncurry().1, sort_names),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("unknown SMT symbol `{0}`")]
    UnknownSymbol(String),
    #[error("ill-sorted SMT term `{term}`: {msg}")]
    IllSorted { term: String, msg: String },
}

/// Rank of a function symbol: parameter sorts and result sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank {
    pub params: Vec<SmtSort>,
    pub result: SmtSort,
}

/// The symbols an SMT script declares, for sort checking solver output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmtSignature {
    pub functions: IndexMap<String, Rank>,
    /// Datatype sort name to its constructor names.
    pub datatypes: IndexMap<String, Vec<String>>,
    pub sorts: Vec<String>,
}

impl SmtSignature {
    fn ill(term: &Sexp, msg: impl Into<String>) -> SortError {
        SortError::IllSorted { term: term.to_string(), msg: msg.into() }
    }

    pub fn parse_sort(&self, s: &Sexp) -> Result<SmtSort, SortError> {
        match s.as_atom() {
            Some("Bool") => Ok(SmtSort::Bool),
            Some("Int") => Ok(SmtSort::Int),
            Some(n) if self.datatypes.contains_key(n) => Ok(SmtSort::Data(n.to_string())),
            Some(n) if self.sorts.iter().any(|x| x == n) => Ok(SmtSort::Uninterpreted(n.to_string())),
            _ => Err(Self::ill(s, "unknown sort")),
        }
    }

    fn constructor_sort(&self, c: &str) -> Option<SmtSort> {
        self.datatypes.iter().find(|(_, cs)| cs.iter().any(|x| x == c)).map(|(d, _)| SmtSort::Data(d.clone()))
    }

    /// Infer the sort of `t` with `env` holding bound variables (innermost last).
    pub fn sort_of_term(&self, env: &mut Vec<(String, SmtSort)>, t: &Sexp) -> Result<SmtSort, SortError> {
        match t {
            Sexp::Atom(a) => {
                if a == "true" || a == "false" {
                    return Ok(SmtSort::Bool);
                }
                if a.bytes().all(|b| b.is_ascii_digit()) && !a.is_empty() {
                    return Ok(SmtSort::Int);
                }
                if let Some((_, s)) = env.iter().rev().find(|(n, _)| n == a) {
                    return Ok(s.clone());
                }
                if let Some(r) = self.functions.get(a.as_str()) {
                    if r.params.is_empty() {
                        return Ok(r.result.clone());
                    }
                    return Err(Self::ill(t, "function used without arguments"));
                }
                Err(SortError::UnknownSymbol(a.clone()))
            }
            Sexp::List(items) if items.is_empty() => Err(Self::ill(t, "empty application")),
            Sexp::List(items) => {
                let args = &items[1..];
                // ((_ is c) t) and (as c S)
                if let Some(inner) = items[0].as_list() {
                    if inner.len() == 3 && inner[0].is_atom("_") && inner[1].is_atom("is") {
                        let c = inner[2].as_atom().unwrap_or_default();
                        let ds = self.constructor_sort(c).ok_or_else(|| SortError::UnknownSymbol(c.to_string()))?;
                        if args.len() != 1 {
                            return Err(Self::ill(t, "tester takes one argument"));
                        }
                        self.expect(env, &args[0], &ds)?;
                        return Ok(SmtSort::Bool);
                    }
                    if inner.len() == 3 && inner[0].is_atom("as") {
                        let sort = self.parse_sort(&inner[2])?;
                        return self.apply(env, t, inner[1].as_atom().unwrap_or_default(), args, Some(sort));
                    }
                    return Err(Self::ill(t, "unsupported application head"));
                }
                let head = items[0].as_atom().unwrap();
                match head {
                    "as" if args.len() == 2 => {
                        let sort = self.parse_sort(&args[1])?;
                        let got = self.sort_of_term(env, &args[0]).or_else(|e| match (&args[0], &sort) {
                            (Sexp::Atom(c), SmtSort::Data(_)) if self.constructor_sort(c).is_some() => Ok(sort.clone()),
                            _ => Err(e),
                        })?;
                        if got != sort {
                            return Err(Self::ill(t, "annotation disagrees with term sort"));
                        }
                        Ok(sort)
                    }
                    "!" => {
                        if args.is_empty() {
                            return Err(Self::ill(t, "empty annotation"));
                        }
                        self.sort_of_term(env, &args[0])
                    }
                    "forall" | "exists" | "let" => {
                        if args.len() != 2 {
                            return Err(Self::ill(t, "binder expects a binding list and a body"));
                        }
                        let bs = args[0].as_list().ok_or_else(|| Self::ill(t, "expected binding list"))?;
                        let mut new = Vec::new();
                        for b in bs {
                            let Some([Sexp::Atom(x), v]) = b.as_list() else {
                                return Err(Self::ill(t, "malformed binding"));
                            };
                            let s = if head == "let" { self.sort_of_term(env, v)? } else { self.parse_sort(v)? };
                            new.push((x.clone(), s));
                        }
                        let n = new.len();
                        env.extend(new);
                        let r = self.sort_of_term(env, &args[1]);
                        env.truncate(env.len() - n);
                        let r = r?;
                        if head != "let" && r != SmtSort::Bool {
                            return Err(Self::ill(t, "quantifier body must be Bool"));
                        }
                        Ok(r)
                    }
                    _ => self.apply(env, t, head, args, None),
                }
            }
        }
    }

    fn expect(&self, env: &mut Vec<(String, SmtSort)>, t: &Sexp, want: &SmtSort) -> Result<(), SortError> {
        let got = self.sort_of_term(env, t)?;
        if &got != want {
            return Err(Self::ill(t, format!("expected {want}, found {got}")));
        }
        Ok(())
    }

    fn apply(
        &self,
        env: &mut Vec<(String, SmtSort)>,
        t: &Sexp,
        head: &str,
        args: &[Sexp],
        annotated: Option<SmtSort>,
    ) -> Result<SmtSort, SortError> {
        use SmtSort::*;
        let all = |env: &mut Vec<(String, SmtSort)>, s: &SmtSort| -> Result<(), SortError> {
            args.iter().try_for_each(|a| self.expect(env, a, s))
        };
        match head {
            "not" | "and" | "or" | "=>" | "xor" => {
                if args.is_empty() || (head == "not" && args.len() != 1) {
                    return Err(Self::ill(t, "wrong number of arguments"));
                }
                all(env, &Bool)?;
                Ok(Bool)
            }
            "=" | "distinct" => {
                if args.len() < 2 {
                    return Err(Self::ill(t, "expects at least two arguments"));
                }
                let s = self.sort_of_term(env, &args[0])?;
                all(env, &s)?;
                Ok(Bool)
            }
            "ite" => {
                if args.len() != 3 {
                    return Err(Self::ill(t, "ite expects three arguments"));
                }
                self.expect(env, &args[0], &Bool)?;
                let s = self.sort_of_term(env, &args[1])?;
                self.expect(env, &args[2], &s)?;
                Ok(s)
            }
            "+" | "*" | "-" | "div" | "mod" | "abs" => {
                let ok = match head {
                    "abs" => args.len() == 1,
                    "-" => !args.is_empty(),
                    "div" | "mod" => args.len() == 2,
                    _ => args.len() >= 2,
                };
                if !ok {
                    return Err(Self::ill(t, "wrong number of arguments"));
                }
                all(env, &Int)?;
                Ok(Int)
            }
            "<=" | "<" | ">=" | ">" => {
                if args.len() < 2 {
                    return Err(Self::ill(t, "comparison expects at least two arguments"));
                }
                all(env, &Int)?;
                Ok(Bool)
            }
            f => {
                if let Some(s) = annotated.filter(|_| args.is_empty()) {
                    return Ok(s);
                }
                let r = self.functions.get(f).ok_or_else(|| SortError::UnknownSymbol(f.to_string()))?;
                if r.params.len() != args.len() {
                    return Err(Self::ill(t, format!("`{f}` expects {} arguments", r.params.len())));
                }
                for (a, p) in args.iter().zip(&r.params) {
                    self.expect(env, a, p)?;
                }
                Ok(r.result.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::read_one;

    fn sig() -> SmtSignature {
        let mut s = SmtSignature::default();
        s.functions.insert("f".into(), Rank { params: vec![SmtSort::Int], result: SmtSort::Int });
        s.functions.insert("nil".into(), Rank { params: vec![], result: SmtSort::Data("List".into()) });
        s.functions.insert(
            "cons".into(),
            Rank { params: vec![SmtSort::Int, SmtSort::Data("List".into())], result: SmtSort::Data("List".into()) },
        );
        s.datatypes.insert("List".into(), vec!["nil".into(), "cons".into()]);
        s
    }

    #[test]
    fn infers_sorts() {
        let s = sig();
        let t = read_one("(forall ((x Int)) (let ((y (f x))) (! (>= (+ x y (- 1)) 0) :named a)))").unwrap();
        assert_eq!(s.sort_of_term(&mut vec![], &t), Ok(SmtSort::Bool));
        let t = read_one("((_ is cons) (cons 1 nil))").unwrap();
        assert_eq!(s.sort_of_term(&mut vec![], &t), Ok(SmtSort::Bool));
    }

    #[test]
    fn rejects_ill_sorted() {
        let s = sig();
        assert!(s.sort_of_term(&mut vec![], &read_one("(f nil)").unwrap()).is_err());
        assert_eq!(
            s.sort_of_term(&mut vec![], &read_one("(g 1)").unwrap()),
            Err(SortError::UnknownSymbol("g".into()))
        );
    }
}
