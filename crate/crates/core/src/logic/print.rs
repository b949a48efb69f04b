use crate::sexp::Sexp;

use super::term::{MatchArm, Term};
use super::types::{DatatypeDecl, SourceType};
use super::Goal;

/// Render a term in the problem-file syntax.
pub fn print_term(t: &Term) -> String {
    term_to_sexp(t).to_string()
}

pub fn term_to_sexp(t: &Term) -> Sexp {
    to_sexp(t, false)
}

/// A numeric expression built only from non-negative literals, whose type
/// the parser cannot infer from the expression itself.
pub(crate) fn literal_only(t: &Term) -> bool {
    match t {
        Term::NatLit(_) => true,
        Term::IntLit(k) => *k >= 0,
        Term::Bin(_, a, b) => literal_only(a) && literal_only(b),
        Term::Ite(_, a, b) => literal_only(a) && literal_only(b),
        _ => false,
    }
}

fn to_sexp(t: &Term, annotate: bool) -> Sexp {
    let a = |x: &Term| to_sexp(x, false);
    match t {
        Term::Var(x) | Term::Const(x) => Sexp::atom(x.clone()),
        Term::NatLit(n) => Sexp::atom(n.to_string()),
        Term::IntLit(k) if *k < 0 => Sexp::atom(k.to_string()),
        Term::IntLit(k) if annotate => Sexp::app("as", [Sexp::atom(k.to_string()), Sexp::atom("Int")]),
        Term::IntLit(k) => Sexp::atom(k.to_string()),
        Term::App(f, args) => Sexp::app(f.clone(), args.iter().map(a)),
        Term::Forall(..) | Term::Exists(..) => {
            let is_forall = matches!(t, Term::Forall(..));
            let mut binders = Vec::new();
            let mut cur = t;
            while let (Term::Forall(x, ty, b), true) | (Term::Exists(x, ty, b), false) = (cur, is_forall) {
                binders.push(Sexp::list([Sexp::atom(x.clone()), ty.to_sexp()]));
                cur = b;
            }
            Sexp::app(if is_forall { "forall" } else { "exists" }, [Sexp::List(binders), a(cur)])
        }
        Term::True => Sexp::atom("true"),
        Term::False => Sexp::atom("false"),
        Term::Not(x) => Sexp::app("not", [a(x)]),
        Term::And(..) => Sexp::app("and", flatten_left(t, &|t| match t {
            Term::And(x, y) => Some((x, y)),
            _ => None,
        }).into_iter().map(a)),
        Term::Or(..) => Sexp::app("or", flatten_left(t, &|t| match t {
            Term::Or(x, y) => Some((x, y)),
            _ => None,
        }).into_iter().map(a)),
        Term::Implies(..) => {
            let mut items = Vec::new();
            let mut cur = t;
            while let Term::Implies(x, y) = cur {
                items.push(a(x));
                cur = y;
            }
            items.push(a(cur));
            Sexp::app("=>", items)
        }
        Term::Iff(x, y) => Sexp::app("iff", [a(x), a(y)]),
        Term::Eq(x, y) => {
            let ann = literal_only(x) && literal_only(y);
            Sexp::app("=", [to_sexp(x, ann), to_sexp(y, ann)])
        }
        Term::Bin(op, ..) => {
            let op = *op;
            let items = flatten_left(t, &|t| match t {
                Term::Bin(o, x, y) if *o == op => Some((x, y)),
                _ => None,
            });
            Sexp::app(op.symbol(), items.into_iter().map(|x| to_sexp(x, annotate)))
        }
        Term::Neg(x) => Sexp::app("-", [a(x)]),
        Term::Abs(x) => Sexp::app("abs", [a(x)]),
        Term::Cmp(op, x, y) => {
            let ann = literal_only(x) && literal_only(y);
            Sexp::app(op.symbol(), [to_sexp(x, ann), to_sexp(y, ann)])
        }
        Term::Ite(c, x, y) => Sexp::app("ite", [a(c), to_sexp(x, annotate), to_sexp(y, annotate)]),
        Term::Match(s, arms) => {
            Sexp::app("match", [a(s), Sexp::List(arms.iter().map(arm_to_sexp).collect())])
        }
        Term::CoerceNatToInt(x) => Sexp::app("Int.ofNat", [a(x)]),
        Term::IntNatAbs(x) => Sexp::app("natAbs", [a(x)]),
    }
}

fn arm_to_sexp(arm: &MatchArm) -> Sexp {
    let pat = if arm.binders.is_empty() {
        Sexp::atom(arm.ctor.clone())
    } else {
        Sexp::app(arm.ctor.clone(), arm.binders.iter().map(|b| Sexp::atom(b.clone())))
    };
    Sexp::list([pat, term_to_sexp(&arm.body)])
}

fn flatten_left<'a>(t: &'a Term, split: &dyn Fn(&'a Term) -> Option<(&'a Term, &'a Term)>) -> Vec<&'a Term> {
    match split(t) {
        Some((x, y)) => {
            let mut v = flatten_left(x, split);
            v.push(y);
            v
        }
        None => vec![t],
    }
}

pub fn datatype_to_sexp(d: &DatatypeDecl) -> Sexp {
    let mut items = vec![Sexp::atom("declare-datatype"), Sexp::atom(d.name.clone())];
    if d.is_structure {
        items.push(Sexp::atom(":structure"));
    }
    let ctors = d
        .constructors
        .iter()
        .map(|c| {
            let mut v = vec![Sexp::atom(c.name.clone())];
            for (j, a) in c.args.iter().enumerate() {
                if d.is_structure {
                    v.push(Sexp::list([Sexp::atom(d.projections[j].name.clone()), a.to_sexp()]));
                } else {
                    v.push(a.to_sexp());
                }
            }
            Sexp::List(v)
        })
        .collect();
    items.push(Sexp::List(ctors));
    Sexp::List(items)
}

/// Render a goal back into problem-file syntax.
pub fn print_goal(g: &Goal) -> String {
    let sig = &g.signature;
    let mut out = Vec::new();
    for s in &sig.sorts {
        out.push(Sexp::app("declare-sort", [Sexp::atom(s.clone())]));
    }
    for d in &sig.datatypes {
        out.push(datatype_to_sexp(d));
    }
    for (name, ty) in &sig.consts {
        let (params, ret) = ty.uncurry();
        if params.is_empty() {
            out.push(Sexp::app("declare-const", [Sexp::atom(name.clone()), ty.to_sexp()]));
        } else {
            out.push(Sexp::app(
                "declare-fun",
                [
                    Sexp::atom(name.clone()),
                    Sexp::List(params.into_iter().map(SourceType::to_sexp).collect()),
                    ret.to_sexp(),
                ],
            ));
        }
    }
    for ty in &sig.inhabited {
        out.push(Sexp::app("declare-inhabited", [ty.to_sexp()]));
    }
    for h in &g.hypotheses {
        out.push(Sexp::app("hyp", [Sexp::atom(h.name.clone()), term_to_sexp(&h.prop)]));
    }
    out.push(Sexp::app("goal", [term_to_sexp(&g.target)]));
    let mut s = out.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::term::*;

    #[test]
    fn prints_quantifier_and_coercions() {
        let t = forall("x", SourceType::Int, eq(var("x"), var("x")));
        assert_eq!(print_term(&t), "(forall ((x Int)) (= x x))");
        assert_eq!(print_term(&ofnat(var("n"))), "(Int.ofNat n)");
        assert_eq!(print_term(&natabs(bin(ArithOp::Sub, cnst("a"), cnst("b")))), "(natAbs (- a b))");
    }

    #[test]
    fn ambiguous_integer_literals_are_annotated() {
        let t = eq(Term::IntLit(3), bin(ArithOp::Add, Term::IntLit(1), Term::IntLit(2)));
        assert_eq!(print_term(&t), "(= (as 3 Int) (+ (as 1 Int) (as 2 Int)))");
        let u = cmp(CmpOp::Le, Term::IntLit(0), cnst("x"));
        assert_eq!(print_term(&u), "(<= 0 x)");
        assert_eq!(print_term(&Term::IntLit(-4)), "-4");
    }
}
