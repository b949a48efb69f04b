//! Integer and natural-number facts supplied to the prover outside the
//! set of support.
//!
//! Each row carries three flags: whether it is in the default set, in the
//! unit-only set, and in the set extended with associativity and
//! commutativity laws. Polymorphic order lemmas are stated for `Int` and
//! `Nat` at once.

use std::sync::OnceLock;

use crate::logic::{parse_term, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryLemma {
    pub name: &'static str,
    pub statement: Term,
    pub in_default: bool,
    pub is_unit: bool,
    pub in_ac_config: bool,
}

/// Which lemma column to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaSet {
    Default,
    UnitOnly,
    WithAc,
    None,
}

const Y: bool = true;
const N: bool = false;

const ROWS: &[(&str, bool, bool, bool, &str)] = &[
    ("Nat.zero_le", Y, Y, Y, "(forall ((n Nat)) (<= 0 n))"),
    ("Int.natCast_nonneg", Y, Y, Y, "(forall ((n Nat)) (<= 0 (Int.ofNat n)))"),
    (
        "ge_iff_le",
        Y,
        Y,
        Y,
        "(and (forall ((a Int) (b Int)) (iff (>= a b) (<= b a))) (forall ((a Nat) (b Nat)) (iff (>= a b) (<= b a))))",
    ),
    (
        "gt_iff_lt",
        Y,
        Y,
        Y,
        "(and (forall ((a Int) (b Int)) (iff (> a b) (< b a))) (forall ((a Nat) (b Nat)) (iff (> a b) (< b a))))",
    ),
    (
        "lt_iff_not_ge",
        Y,
        Y,
        Y,
        "(and (forall ((a Int) (b Int)) (iff (< a b) (not (>= a b)))) (forall ((a Nat) (b Nat)) (iff (< a b) (not (>= a b)))))",
    ),
    (
        "le_iff_lt_or_eq",
        Y,
        N,
        Y,
        "(and (forall ((a Int) (b Int)) (iff (<= a b) (or (< a b) (= a b)))) (forall ((a Nat) (b Nat)) (iff (<= a b) (or (< a b) (= a b)))))",
    ),
    ("Int.ofNat_inj", Y, Y, Y, "(forall ((m Nat) (n Nat)) (iff (= (Int.ofNat m) (Int.ofNat n)) (= m n)))"),
    ("Int.natAbs_natCast", Y, Y, Y, "(forall ((n Nat)) (= (natAbs (Int.ofNat n)) n))"),
    ("Int.natAbs_eq", Y, N, Y, "(forall ((a Int)) (or (= a (Int.ofNat (natAbs a))) (= a (- (Int.ofNat (natAbs a))))))"),
    (
        "Int.natAbs_eq_natAbs_iff",
        Y,
        N,
        Y,
        "(forall ((a Int) (b Int)) (iff (= (natAbs a) (natAbs b)) (or (= a b) (= a (- b)))))",
    ),
    ("Int.ofNat_le", Y, Y, Y, "(forall ((m Nat) (n Nat)) (iff (<= (Int.ofNat m) (Int.ofNat n)) (<= m n)))"),
    ("Int.ofNat_lt", Y, Y, Y, "(forall ((m Nat) (n Nat)) (iff (< (Int.ofNat m) (Int.ofNat n)) (< m n)))"),
    ("Int.ofNat_eq_coe", Y, Y, Y, "(forall ((n Nat)) (= (Int.ofNat n) (Int.ofNat n)))"),
    ("Int.zero_sub", Y, Y, Y, "(forall ((a Int)) (= (- 0 a) (- a)))"),
    ("Int.natAbs_of_nonneg", Y, N, Y, "(forall ((a Int)) (=> (<= 0 a) (= (Int.ofNat (natAbs a)) a)))"),
    ("Int.ofNat_natAbs_of_nonpos", Y, N, Y, "(forall ((a Int)) (=> (<= a 0) (= (Int.ofNat (natAbs a)) (- a))))"),
    ("Int.nonpos_of_neg_nonneg", Y, N, Y, "(forall ((a Int)) (=> (<= 0 (- a)) (<= a 0)))"),
    ("Int.nonneg_of_neg_nonpos", Y, N, Y, "(forall ((a Int)) (=> (<= (- a) 0) (<= 0 a)))"),
    (
        "Int.natCast_add",
        Y,
        Y,
        Y,
        "(forall ((m Nat) (n Nat)) (= (Int.ofNat (+ m n)) (+ (Int.ofNat m) (Int.ofNat n))))",
    ),
    (
        "Int.natCast_mul",
        Y,
        Y,
        Y,
        "(forall ((m Nat) (n Nat)) (= (Int.ofNat (* m n)) (* (Int.ofNat m) (Int.ofNat n))))",
    ),
    ("Int.natAbs_mul", Y, Y, Y, "(forall ((a Int) (b Int)) (= (natAbs (* a b)) (* (natAbs a) (natAbs b))))"),
    ("Int.natCast_one", Y, Y, Y, "(= (Int.ofNat 1) 1)"),
    ("Int.natCast_zero", Y, Y, Y, "(= (Int.ofNat 0) 0)"),
    ("Int.natAbs_zero", Y, Y, Y, "(= (natAbs 0) 0)"),
    ("Int.natAbs_one", Y, Y, Y, "(= (natAbs 1) 1)"),
    ("Int.ofNat_zero", Y, Y, Y, "(= (Int.ofNat 0) 0)"),
    ("Int.ofNat_one", Y, Y, Y, "(= (Int.ofNat 1) 1)"),
    ("Int.mul_assoc", N, N, Y, "(forall ((a Int) (b Int) (c Int)) (= (* (* a b) c) (* a (* b c))))"),
    ("Int.mul_comm", N, N, Y, "(forall ((a Int) (b Int)) (= (* a b) (* b a)))"),
    ("Int.add_assoc", N, N, Y, "(forall ((a Int) (b Int) (c Int)) (= (+ (+ a b) c) (+ a (+ b c))))"),
    ("Int.add_comm", N, N, Y, "(forall ((a Int) (b Int)) (= (+ a b) (+ b a)))"),
    ("Nat.mul_assoc", N, N, Y, "(forall ((a Nat) (b Nat) (c Nat)) (= (* (* a b) c) (* a (* b c))))"),
    ("Nat.mul_comm", N, N, Y, "(forall ((a Nat) (b Nat)) (= (* a b) (* b a)))"),
    ("Nat.add_assoc", N, N, Y, "(forall ((a Nat) (b Nat) (c Nat)) (= (+ (+ a b) c) (+ a (+ b c))))"),
    ("Nat.add_comm", N, N, Y, "(forall ((a Nat) (b Nat)) (= (+ a b) (+ b a)))"),
];

/// The full table, in row order.
pub fn theory_lemmas() -> &'static [TheoryLemma] {
    static TABLE: OnceLock<Vec<TheoryLemma>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let sig = Signature::default();
        ROWS.iter()
            .map(|&(name, d, u, ac, text)| TheoryLemma {
                name,
                statement: parse_term(&sig, text, None).unwrap_or_else(|e| panic!("lemma {name}: {e}")),
                in_default: d,
                is_unit: u,
                in_ac_config: ac,
            })
            .collect()
    })
}

pub fn lemma(name: &str) -> Option<&'static TheoryLemma> {
    theory_lemmas().iter().find(|l| l.name == name)
}

pub fn lemmas_for(set: LemmaSet) -> Vec<&'static TheoryLemma> {
    theory_lemmas()
        .iter()
        .filter(|l| match set {
            LemmaSet::Default => l.in_default,
            LemmaSet::UnitOnly => l.is_unit,
            LemmaSet::WithAc => l.in_ac_config,
            LemmaSet::None => false,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{print_term, typecheck, SourceType};

    #[test]
    fn every_statement_typechecks() {
        for l in theory_lemmas() {
            assert_eq!(typecheck(&Signature::default(), &l.statement), Ok(SourceType::Prop), "{}", l.name);
        }
        assert_eq!(theory_lemmas().len(), 35);
    }

    #[test]
    fn literals_are_elaborated_at_the_right_type() {
        assert_eq!(print_term(&lemma("Int.natCast_one").unwrap().statement), "(= (Int.ofNat 1) 1)");
        let t = &lemma("Int.natAbs_zero").unwrap().statement;
        let crate::logic::Term::Eq(a, b) = t else { panic!() };
        assert!(matches!(**a, crate::logic::Term::IntNatAbs(ref z) if **z == crate::logic::Term::IntLit(0)));
        assert_eq!(**b, crate::logic::Term::NatLit(0));
    }
}
