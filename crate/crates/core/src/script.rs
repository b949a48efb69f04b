//! The emitted proof script: preprocessing replay, selector obtains, hint
//! haves and the final prover call, in that order.

use std::fmt::Write as _;

use crate::interp::{InterpretedHint, SelectorDef};
use crate::logic::term::{ArithOp, CmpOp};
use crate::logic::{print_term, Signature, SourceType, Term};
use crate::preprocess::SkolemizationRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Dialect {
    /// One s-expression per step; what [`crate::replay`] reads back.
    #[default]
    Neutral,
    /// A Lean-flavoured rendering for reading, not for checking.
    LeanSketch,
}

impl Dialect {
    pub fn from_name(s: &str) -> Option<Dialect> {
        match s {
            "neutral" => Some(Dialect::Neutral),
            "lean-sketch" => Some(Dialect::LeanSketch),
            _ => None,
        }
    }
}

/// How a hint's `have` is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discharge {
    TheoryDischarge,
    /// Left open; a warning says why.
    Sorry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreprocessBlock {
    pub negated: String,
    pub skolems: Vec<(String, SourceType)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obtain {
    pub selector: SelectorDef,
    /// `Dt.rec` term defining the selector, for the Lean rendering.
    pub recursor: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HintHave {
    pub name: String,
    pub statement: Term,
    pub discharge: Discharge,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FinalCall {
    /// Hypotheses (goal order), then selector facts, then hints.
    pub facts: Vec<String>,
    /// Theory lemmas the proof used.
    pub lemmas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProofScript {
    pub preprocessing: Option<PreprocessBlock>,
    pub selector_obtains: Vec<Obtain>,
    pub hint_haves: Vec<HintHave>,
    pub final_call: FinalCall,
    pub warnings: Vec<String>,
}

/// What went into the final proof, already minimized.
#[derive(Clone, Debug, Default)]
pub struct ScriptInputs<'a> {
    pub record: Option<&'a SkolemizationRecord>,
    /// Whether negating the target changed the goal (it was not `False`).
    pub negation_changed: bool,
    pub selectors: Vec<&'a SelectorDef>,
    pub hints: Vec<&'a InterpretedHint>,
    pub hypotheses: Vec<String>,
    pub lemmas: Vec<String>,
    pub warnings: Vec<String>,
}

/// Assemble a script from minimized pipeline outputs.
pub fn emit_script(sig: &Signature, inputs: &ScriptInputs<'_>) -> ProofScript {
    let mut warnings = inputs.warnings.clone();
    let preprocessing = inputs.record.and_then(|r| {
        (r.changed || inputs.negation_changed)
            .then(|| PreprocessBlock { negated: r.negated_target_name.clone(), skolems: r.symbols() })
    });
    let mut selector_obtains = Vec::new();
    for s in &inputs.selectors {
        if !s.inhabited {
            warnings.push(format!(
                "{} is left open: its result type {} is not known to be inhabited",
                s.name,
                s.requires_inhabited.to_sexp()
            ));
        }
        selector_obtains.push(Obtain { selector: (*s).clone(), recursor: recursor_term(sig, s) });
    }
    let mut hint_haves = Vec::new();
    for h in &inputs.hints {
        let open = h.needs_selectors.iter().any(|n| inputs.selectors.iter().any(|s| &s.name == n && !s.inhabited));
        let discharge = if open {
            warnings.push(format!("{} mentions a selector with an open definition and is left as sorry", h.name));
            Discharge::Sorry
        } else {
            Discharge::TheoryDischarge
        };
        hint_haves.push(HintHave { name: h.name.clone(), statement: h.statement.clone(), discharge });
    }
    let mut facts = inputs.hypotheses.clone();
    facts.extend(inputs.selectors.iter().map(|s| s.fact_name.clone()));
    facts.extend(inputs.hints.iter().map(|h| h.name.clone()));
    ProofScript {
        preprocessing,
        selector_obtains,
        hint_haves,
        final_call: FinalCall { facts, lemmas: inputs.lemmas.clone() },
        warnings,
    }
}

impl ProofScript {
    pub fn render(&self, dialect: Dialect) -> String {
        match dialect {
            Dialect::Neutral => self.neutral(),
            Dialect::LeanSketch => self.lean(),
        }
    }

    fn neutral(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.preprocessing {
            let _ = writeln!(out, "(by-contradiction {})", p.negated);
            if !p.skolems.is_empty() {
                let syms: Vec<String> = p.skolems.iter().map(|(n, t)| format!("({n} {})", t.to_sexp())).collect();
                let _ = writeln!(out, "(skolemize {})", syms.join(" "));
            }
        }
        for o in &self.selector_obtains {
            let s = &o.selector;
            let by = if s.inhabited { "recursor" } else { "sorry" };
            let _ = writeln!(
                out,
                "(obtain {} {} {} {} :by {by})",
                s.name,
                s.fn_type.to_sexp(),
                s.fact_name,
                print_term(&s.characteristic_property)
            );
        }
        for h in &self.hint_haves {
            let by = match h.discharge {
                Discharge::TheoryDischarge => "theory-discharge",
                Discharge::Sorry => "sorry",
            };
            let _ = writeln!(out, "(have {} {} :by {by})", h.name, print_term(&h.statement));
        }
        let _ = writeln!(out, "(prove ({}) :lemmas ({}))", self.final_call.facts.join(" "), self.final_call.lemmas.join(" "));
        for w in &self.warnings {
            let _ = writeln!(out, "; warning: {w}");
        }
        out
    }

    fn lean(&self) -> String {
        let mut out = String::from("by\n");
        if let Some(p) = &self.preprocessing {
            out.push_str("  apply @Classical.byContradiction\n");
            let _ = writeln!(out, "  intro {}", p.negated);
            if !p.skolems.is_empty() {
                out.push_str("  skolemizeAll\n");
            }
        }
        for o in &self.selector_obtains {
            let s = &o.selector;
            let _ = writeln!(out, "  obtain ⟨{}, {}⟩ :", s.name, s.fact_name);
            let _ = writeln!(out, "    ∃ ({} : {}),", s.name, lean_type(&s.fn_type));
            let _ = writeln!(out, "      {} := by", lean_term(&s.characteristic_property));
            if s.inhabited {
                let _ = writeln!(out, "    apply Exists.intro ({})", o.recursor);
                out.push_str("    intros\n    rfl\n");
            } else {
                out.push_str("    sorry\n");
            }
        }
        for h in &self.hint_haves {
            let by = match h.discharge {
                Discharge::TheoryDischarge => "grind",
                Discharge::Sorry => "sorry",
            };
            let _ = writeln!(out, "  have {} : {} := by {by}", h.name, lean_term(&h.statement));
        }
        let _ = writeln!(out, "  duper [{}] []", self.final_call.facts.join(", "));
        if !self.final_call.lemmas.is_empty() {
            let _ = writeln!(out, "  -- theory lemmas: {}", self.final_call.lemmas.join(", "));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "  -- warning: {w}");
        }
        out
    }
}

/// `Dt.rec (motive := fun _ => R) case…` returning argument `index` of `ctor`.
fn recursor_term(sig: &Signature, s: &SelectorDef) -> String {
    let Some(decl) = sig.datatype(&s.datatype) else { return "sorry".into() };
    let ret = lean_type(&s.requires_inhabited);
    let mut cases = Vec::new();
    for c in &decl.constructors {
        let mut binders: Vec<String> =
            c.args.iter().enumerate().map(|(i, a)| format!("(arg{i} : {})", lean_type(a))).collect();
        binders.extend(c.args.iter().filter(|a| **a == SourceType::Data(s.datatype.clone())).map(|_| format!("(_ : {ret})")));
        let body = if c.name == s.ctor { format!("arg{}", s.index) } else { "default".into() };
        cases.push(if binders.is_empty() { body } else { format!("fun {} => {body}", binders.join(" ")) });
    }
    let cases: Vec<String> = cases.into_iter().map(|c| if c.contains(' ') { format!("({c})") } else { c }).collect();
    format!("{}.rec (motive := fun (_ : {}) => {ret}) {}", s.datatype, s.datatype, cases.join(" "))
}

pub fn lean_type(t: &SourceType) -> String {
    match t {
        SourceType::Prop => "Prop".into(),
        SourceType::Nat => "Nat".into(),
        SourceType::Int => "Int".into(),
        SourceType::Data(n) | SourceType::Opaque(n) => n.clone(),
        SourceType::Arrow(d, c) => {
            let d = if d.is_arrow() { format!("({})", lean_type(d)) } else { lean_type(d) };
            format!("{d} → {}", lean_type(c))
        }
    }
}

fn atomic(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) | Term::NatLit(_) | Term::True | Term::False => true,
        Term::IntLit(n) => *n >= 0,
        _ => false,
    }
}

fn arg(t: &Term) -> String {
    if atomic(t) {
        lean_term(t)
    } else {
        format!("({})", lean_term(t))
    }
}

/// Operand of an infix or prefix operator: applications need no parentheses.
fn operand(t: &Term) -> String {
    match t {
        Term::App(..) | Term::CoerceNatToInt(_) | Term::IntNatAbs(_) | Term::Abs(_) => lean_term(t),
        _ => arg(t),
    }
}

/// Lean-looking rendering, fully parenthesised below the top level.
pub fn lean_term(t: &Term) -> String {
    match t {
        Term::Var(x) | Term::Const(x) => x.clone(),
        Term::NatLit(n) => n.to_string(),
        Term::IntLit(n) => n.to_string(),
        Term::App(f, args) => {
            let args: Vec<String> = args.iter().map(arg).collect();
            format!("{f} {}", args.join(" "))
        }
        Term::Forall(..) | Term::Exists(..) => {
            let (q, mut binders, mut body) = match t {
                Term::Forall(x, ty, b) => ("∀", vec![(x, ty)], b.as_ref()),
                Term::Exists(x, ty, b) => ("∃", vec![(x, ty)], b.as_ref()),
                _ => unreachable!(),
            };
            while let ("∀", Term::Forall(x, ty, b)) | ("∃", Term::Exists(x, ty, b)) = (q, body) {
                binders.push((x, ty));
                body = b;
            }
            let bs: Vec<String> = binders.iter().map(|(x, ty)| format!("({x} : {})", lean_type(ty))).collect();
            format!("{q} {}, {}", bs.join(" "), lean_term(body))
        }
        Term::True => "True".into(),
        Term::False => "False".into(),
        Term::Not(a) => format!("¬{}", operand(a)),
        Term::And(a, b) => format!("{} ∧ {}", operand(a), operand(b)),
        Term::Or(a, b) => format!("{} ∨ {}", operand(a), operand(b)),
        Term::Implies(a, b) => format!("{} → {}", operand(a), operand(b)),
        Term::Iff(a, b) => format!("{} ↔ {}", operand(a), operand(b)),
        Term::Eq(a, b) => format!("{} = {}", operand(a), operand(b)),
        Term::Bin(op, a, b) => {
            let s = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
                ArithOp::Div => "/",
                ArithOp::Mod => "%",
            };
            format!("{} {s} {}", operand(a), operand(b))
        }
        Term::Neg(a) => format!("-{}", operand(a)),
        Term::Abs(a) => format!("|{}|", lean_term(a)),
        Term::Cmp(op, a, b) => {
            let s = match op {
                CmpOp::Le => "≤",
                CmpOp::Lt => "<",
                CmpOp::Ge => "≥",
                CmpOp::Gt => ">",
            };
            format!("{} {s} {}", operand(a), operand(b))
        }
        Term::Ite(c, a, b) => format!("if {} then {} else {}", lean_term(c), lean_term(a), lean_term(b)),
        Term::Match(s, arms) => {
            let mut out = format!("match {} with", lean_term(s));
            for a in arms {
                let pat = if a.binders.is_empty() { a.ctor.clone() } else { format!("{} {}", a.ctor, a.binders.join(" ")) };
                let _ = write!(out, " | {pat} => {}", lean_term(&a.body));
            }
            out
        }
        Term::CoerceNatToInt(a) => format!("Int.ofNat {}", arg(a)),
        Term::IntNatAbs(a) => format!("Int.natAbs {}", arg(a)),
    }
}
