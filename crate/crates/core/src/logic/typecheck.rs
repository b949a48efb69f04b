use thiserror::Error;

use super::term::Term;
use super::types::{Signature, SourceType};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("ill-typed application of `{func}`: argument {index} has type {found}, expected {expected}")]
    IllTypedApplication { func: String, index: usize, expected: SourceType, found: SourceType },
    #[error("`{func}` expects {expected} arguments, got {found}")]
    Arity { func: String, expected: usize, found: usize },
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    Mismatch { context: String, expected: String, found: SourceType },
    #[error("{0}")]
    Unsupported(String),
}

/// Local typing context: bound variables, innermost last.
pub type Env = Vec<(String, SourceType)>;

/// Compute the type of `t` under `sig`. Free variables must be declared in
/// the signature; quantified variables are tracked internally.
pub fn typecheck(sig: &Signature, t: &Term) -> Result<SourceType, TypeError> {
    type_of(sig, &mut Vec::new(), t)
}

/// Typecheck with an explicit context of bound variables.
pub fn type_of(sig: &Signature, env: &mut Env, t: &Term) -> Result<SourceType, TypeError> {
    use SourceType::*;
    let expect = |ctx: &str, want: &SourceType, got: SourceType| -> Result<(), TypeError> {
        if &got == want {
            Ok(())
        } else {
            Err(TypeError::Mismatch { context: ctx.to_string(), expected: want.to_string(), found: got })
        }
    };
    match t {
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| TypeError::Unbound(x.clone())),
        Term::Const(c) => {
            let (_, ty) = sig.lookup(c).ok_or_else(|| TypeError::Unbound(c.clone()))?;
            if let Arrow(..) = ty {
                let (ps, _) = ty.uncurry();
                return Err(TypeError::Arity { func: c.clone(), expected: ps.len(), found: 0 });
            }
            Ok(ty)
        }
        Term::NatLit(_) => Ok(Nat),
        Term::IntLit(_) => Ok(Int),
        Term::App(f, args) => {
            let (_, fty) = sig.lookup(f).ok_or_else(|| TypeError::Unbound(f.clone()))?;
            let (params, ret) = fty.uncurry();
            if params.len() != args.len() {
                return Err(TypeError::Arity { func: f.clone(), expected: params.len(), found: args.len() });
            }
            for (i, (p, a)) in params.iter().zip(args).enumerate() {
                let at = type_of(sig, env, a)?;
                if &at != *p {
                    return Err(TypeError::IllTypedApplication {
                        func: f.clone(),
                        index: i,
                        expected: (*p).clone(),
                        found: at,
                    });
                }
            }
            Ok(ret.clone())
        }
        Term::Forall(x, ty, b) | Term::Exists(x, ty, b) => {
            if ty.is_arrow() {
                return Err(TypeError::Unsupported(format!("quantification over function type {ty}")));
            }
            check_type_declared(sig, ty)?;
            env.push((x.clone(), ty.clone()));
            let bt = type_of(sig, env, b);
            env.pop();
            expect("quantifier body", &Prop, bt?)?;
            Ok(Prop)
        }
        Term::True | Term::False => Ok(Prop),
        Term::Not(a) => {
            expect("negation", &Prop, type_of(sig, env, a)?)?;
            Ok(Prop)
        }
        Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
            expect("connective", &Prop, type_of(sig, env, a)?)?;
            expect("connective", &Prop, type_of(sig, env, b)?)?;
            Ok(Prop)
        }
        Term::Eq(a, b) => {
            let ta = type_of(sig, env, a)?;
            if ta.is_arrow() {
                return Err(TypeError::Unsupported("equality between functions".into()));
            }
            expect("equation", &ta, type_of(sig, env, b)?)?;
            Ok(Prop)
        }
        Term::Bin(op, a, b) => {
            let ta = type_of(sig, env, a)?;
            if !ta.is_numeric() {
                return Err(TypeError::Mismatch { context: op.symbol().into(), expected: "Nat or Int".into(), found: ta });
            }
            expect(op.symbol(), &ta, type_of(sig, env, b)?)?;
            Ok(ta)
        }
        Term::Neg(a) | Term::Abs(a) => {
            expect("integer negation/abs", &Int, type_of(sig, env, a)?)?;
            Ok(Int)
        }
        Term::Cmp(op, a, b) => {
            let ta = type_of(sig, env, a)?;
            if !ta.is_numeric() {
                return Err(TypeError::Mismatch { context: op.symbol().into(), expected: "Nat or Int".into(), found: ta });
            }
            expect(op.symbol(), &ta, type_of(sig, env, b)?)?;
            Ok(Prop)
        }
        Term::Ite(c, a, b) => {
            expect("ite condition", &Prop, type_of(sig, env, c)?)?;
            let ta = type_of(sig, env, a)?;
            expect("ite branch", &ta, type_of(sig, env, b)?)?;
            Ok(ta)
        }
        Term::Match(s, arms) => {
            let st = type_of(sig, env, s)?;
            let Data(dname) = &st else {
                return Err(TypeError::Mismatch { context: "match scrutinee".into(), expected: "a datatype".into(), found: st });
            };
            let decl = sig.datatype(dname).ok_or_else(|| TypeError::Unbound(dname.clone()))?;
            let mut seen = Vec::new();
            let mut result: Option<SourceType> = None;
            for arm in arms {
                let (_, ctor) = decl.constructor(&arm.ctor).ok_or_else(|| TypeError::Mismatch {
                    context: format!("match arm `{}`", arm.ctor),
                    expected: format!("a constructor of {dname}"),
                    found: st.clone(),
                })?;
                if seen.contains(&arm.ctor) {
                    return Err(TypeError::Unsupported(format!("duplicate match arm `{}`", arm.ctor)));
                }
                seen.push(arm.ctor.clone());
                if ctor.args.len() != arm.binders.len() {
                    return Err(TypeError::Arity { func: arm.ctor.clone(), expected: ctor.args.len(), found: arm.binders.len() });
                }
                let n = arm.binders.len();
                env.extend(arm.binders.iter().cloned().zip(ctor.args.iter().cloned()));
                let bt = type_of(sig, env, &arm.body);
                env.truncate(env.len() - n);
                let bt = bt?;
                match &result {
                    None => result = Some(bt),
                    Some(r) => expect("match arm", r, bt)?,
                }
            }
            if seen.len() != decl.constructors.len() {
                return Err(TypeError::Unsupported(format!("non-exhaustive match on {dname}")));
            }
            result.ok_or_else(|| TypeError::Unsupported("empty match".into()))
        }
        Term::CoerceNatToInt(a) => {
            expect("Int.ofNat", &Nat, type_of(sig, env, a)?)?;
            Ok(Int)
        }
        Term::IntNatAbs(a) => {
            expect("natAbs", &Int, type_of(sig, env, a)?)?;
            Ok(Nat)
        }
    }
}

/// Every datatype or sort name used by `ty` must be declared.
pub fn check_type_declared(sig: &Signature, ty: &SourceType) -> Result<(), TypeError> {
    match ty {
        SourceType::Data(n) | SourceType::Opaque(n) => {
            if sig.has_type_name(n) {
                Ok(())
            } else {
                Err(TypeError::Unbound(n.clone()))
            }
        }
        SourceType::Arrow(d, c) => {
            check_type_declared(sig, d)?;
            check_type_declared(sig, c)
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::term::*;

    fn sig() -> Signature {
        let mut s = Signature::default();
        s.consts.insert("n".into(), SourceType::Nat);
        s.consts.insert("m".into(), SourceType::Nat);
        s.consts.insert("f".into(), SourceType::arrow(SourceType::Int, SourceType::Int));
        s
    }

    #[test]
    fn nat_subtraction_is_nat() {
        let t = bin(ArithOp::Sub, cnst("n"), cnst("m"));
        assert_eq!(typecheck(&sig(), &t), Ok(SourceType::Nat));
    }

    #[test]
    fn applying_int_function_to_nat_is_rejected() {
        let t = app("f", vec![cnst("n")]);
        assert!(matches!(typecheck(&sig(), &t), Err(TypeError::IllTypedApplication { index: 0, .. })));
    }

    #[test]
    fn literal_equation_is_prop() {
        let t = eq(Term::NatLit(3), Term::NatLit(3));
        assert_eq!(typecheck(&sig(), &t), Ok(SourceType::Prop));
    }

    #[test]
    fn unbound_and_idempotent() {
        assert_eq!(typecheck(&sig(), &cnst("zz")), Err(TypeError::Unbound("zz".into())));
        let t = forall("x", SourceType::Int, cmp(CmpOp::Le, app("f", vec![var("x")]), var("x")));
        assert_eq!(typecheck(&sig(), &t), typecheck(&sig(), &t));
        assert_eq!(typecheck(&sig(), &t), Ok(SourceType::Prop));
    }
}
