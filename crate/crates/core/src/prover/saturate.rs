//! Given-clause saturation with resolution, superposition and a set of
//! support.
//!
//! Clauses outside the set of support go straight to the active set and
//! are never selected, so every generating inference has the given clause,
//! which is always in the set of support, as a premise. Simplification
//! (demodulation by active unit equations, subsumption, deletion of
//! trivial literals) ignores the set of support.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use super::order::{is_maximal, kbo, Cmp};
use super::terms::{normalize, offset_after, Lit, PTerm, Subst, Symbols};
use super::unify::{apply, apply_lit, matches, resolve, unifier, unify};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inference {
    Input { name: String },
    /// Binary resolution on predicate literals. `right` is renamed apart
    /// from `left`.
    Resolve { left: usize, right: usize, li: usize, ri: usize, subst: Subst },
    /// Rewrite a subterm of `into` (renamed apart) with equation `fi` of `from`.
    Superpose { from: usize, into: usize, fi: usize, flip: bool, ii: usize, right_side: bool, path: Vec<usize>, subst: Subst },
    EqResolve { parent: usize, li: usize, subst: Subst },
    Factor { parent: usize, i: usize, j: usize, subst: Subst },
    EqFactor { parent: usize, i: usize, j: usize, flip_i: bool, flip_j: bool, subst: Subst },
    /// Rewrite with a unit equation (renamed apart) by matching.
    Demod { parent: usize, unit: usize, li: usize, right_side: bool, path: Vec<usize>, flip: bool, subst: Subst },
    /// Drop `s != s` literals and repeated literals.
    Simplify { parent: usize },
}

impl Inference {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Inference::Input { .. } => vec![],
            Inference::Resolve { left, right, .. } => vec![*left, *right],
            Inference::Superpose { from, into, .. } => vec![*from, *into],
            Inference::Demod { parent, unit, .. } => vec![*parent, *unit],
            Inference::EqResolve { parent, .. }
            | Inference::Factor { parent, .. }
            | Inference::EqFactor { parent, .. }
            | Inference::Simplify { parent } => vec![*parent],
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            Inference::Input { .. } => "input",
            Inference::Resolve { .. } => "resolve",
            Inference::Superpose { .. } => "superpose",
            Inference::EqResolve { .. } => "eq-resolve",
            Inference::Factor { .. } => "factor",
            Inference::EqFactor { .. } => "eq-factor",
            Inference::Demod { .. } => "demod",
            Inference::Simplify { .. } => "simplify",
        }
    }

    /// Generating inferences are the ones restricted by the set of support.
    pub fn is_generating(&self) -> bool {
        matches!(
            self,
            Inference::Resolve { .. }
                | Inference::Superpose { .. }
                | Inference::EqResolve { .. }
                | Inference::Factor { .. }
                | Inference::EqFactor { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: usize,
    pub lits: Vec<Lit>,
    pub inference: Inference,
    pub in_sos: bool,
    pub age: usize,
    pub weight: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub max_clauses: usize,
    pub max_time: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_clauses: 50_000, max_time: Duration::from_secs(30) }
    }
}

/// A refutation: the ancestors of the empty clause, by increasing id.
#[derive(Clone, Debug)]
pub struct Proof {
    pub clauses: Vec<Clause>,
    pub symbols: Symbols,
    pub empty: usize,
}

impl Proof {
    pub fn clause(&self, id: usize) -> Option<&Clause> {
        self.clauses.binary_search_by_key(&id, |c| c.id).ok().map(|i| &self.clauses[i])
    }

    /// One line per clause: id, literals, rule and parents.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            let rule = match &c.inference {
                Inference::Input { name } => format!("input {name}"),
                inf => {
                    let ps: Vec<String> = inf.parents().iter().map(usize::to_string).collect();
                    format!("{} {}", inf.rule(), ps.join(","))
                }
            };
            let sos = if c.in_sos { " sos" } else { "" };
            let _ = writeln!(out, "{}: {}  [{rule}]{sos}", c.id, self.symbols.show_clause(&c.lits));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    ProofFound(Box<Proof>),
    Saturated,
    ResourceOut,
}

#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub verdict: Verdict,
    pub used_inputs: BTreeSet<String>,
    pub clauses_created: usize,
    pub elapsed: Duration,
}

impl SaturationResult {
    pub fn proof(&self) -> Option<&Proof> {
        match &self.verdict {
            Verdict::ProofFound(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_proof(&self) -> bool {
        self.proof().is_some()
    }
}

/// A clause handed to the prover, with its set-of-support flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosClause {
    pub name: String,
    pub lits: Vec<Lit>,
    pub in_sos: bool,
}

const AGE_EVERY: usize = 6;

struct State<'a> {
    syms: &'a Symbols,
    clauses: Vec<Clause>,
    active: Vec<usize>,
    by_weight: BTreeSet<(usize, usize)>,
    by_age: BTreeSet<usize>,
    picks: usize,
    limits: Limits,
    start: Instant,
}

enum Stop {
    Empty(usize),
    Resources,
}

/// Saturate a clause set. Returns `Saturated` when no clause is in the set of
/// support.
pub fn saturate_clauses(syms: &Symbols, inputs: &[SosClause], limits: Limits) -> SaturationResult {
    let mut st = State {
        syms,
        clauses: Vec::new(),
        active: Vec::new(),
        by_weight: BTreeSet::new(),
        by_age: BTreeSet::new(),
        picks: 0,
        limits,
        start: Instant::now(),
    };
    let stop = st.run(inputs);
    let elapsed = st.start.elapsed();
    let created = st.clauses.len();
    match stop {
        Some(Stop::Empty(id)) => {
            let proof = st.extract(id);
            let used = proof
                .clauses
                .iter()
                .filter_map(|c| match &c.inference {
                    Inference::Input { name } => Some(name.clone()),
                    _ => None,
                })
                .collect();
            SaturationResult { verdict: Verdict::ProofFound(Box::new(proof)), used_inputs: used, clauses_created: created, elapsed }
        }
        Some(Stop::Resources) => {
            SaturationResult { verdict: Verdict::ResourceOut, used_inputs: BTreeSet::new(), clauses_created: created, elapsed }
        }
        None => SaturationResult { verdict: Verdict::Saturated, used_inputs: BTreeSet::new(), clauses_created: created, elapsed },
    }
}

fn weight(lits: &[Lit]) -> usize {
    lits.iter().map(Lit::weight).sum()
}

fn without(lits: &[Lit], i: usize) -> impl Iterator<Item = &Lit> {
    lits.iter().enumerate().filter(move |(k, _)| *k != i).map(|(_, l)| l)
}

fn shifted(lits: &[Lit], off: u32) -> Vec<Lit> {
    lits.iter().map(|l| l.map(&mut |t| t.shift(off))).collect()
}

impl<'a> State<'a> {
    fn out_of_resources(&self) -> bool {
        self.clauses.len() >= self.limits.max_clauses || self.start.elapsed() >= self.limits.max_time
    }

    fn add(&mut self, lits: Vec<Lit>, inference: Inference, in_sos: bool) -> usize {
        let id = self.clauses.len();
        let weight = weight(&lits);
        self.clauses.push(Clause { id, lits, inference, in_sos, age: id, weight });
        id
    }

    fn run(&mut self, inputs: &[SosClause]) -> Option<Stop> {
        for c in inputs {
            let id = self.add(normalize(&c.lits), Inference::Input { name: c.name.clone() }, c.in_sos);
            let Some(id) = self.basic_simplify(id) else { continue };
            if self.clauses[id].lits.is_empty() {
                return Some(Stop::Empty(id));
            }
            if c.in_sos {
                self.enqueue(id);
            } else {
                self.active.push(id);
            }
        }
        while let Some(g) = self.pick() {
            if self.out_of_resources() {
                return Some(Stop::Resources);
            }
            let Some(g) = self.forward_simplify(g) else { continue };
            if self.clauses[g].lits.is_empty() {
                return Some(Stop::Empty(g));
            }
            if self.active.iter().any(|&a| subsumes(self.syms, &self.clauses[a].lits, &self.clauses[g].lits)) {
                continue;
            }
            let glits = self.clauses[g].lits.clone();
            self.active.retain(|&a| !subsumes(self.syms, &glits, &self.clauses[a].lits));
            self.active.push(g);
            let fresh = self.generate(g);
            for id in fresh {
                let Some(id) = self.basic_simplify(id) else { continue };
                if self.clauses[id].lits.is_empty() {
                    return Some(Stop::Empty(id));
                }
                self.enqueue(id);
            }
            if self.out_of_resources() {
                return Some(Stop::Resources);
            }
        }
        None
    }

    fn enqueue(&mut self, id: usize) {
        self.by_weight.insert((self.clauses[id].weight, id));
        self.by_age.insert(id);
    }

    fn pick(&mut self) -> Option<usize> {
        self.picks += 1;
        let id = if self.picks.is_multiple_of(AGE_EVERY) {
            *self.by_age.iter().next()?
        } else {
            self.by_weight.iter().next()?.1
        };
        self.by_age.remove(&id);
        self.by_weight.remove(&(self.clauses[id].weight, id));
        Some(id)
    }

    /// Remove trivially false and repeated literals; `None` for tautologies.
    fn basic_simplify(&mut self, id: usize) -> Option<usize> {
        let lits = &self.clauses[id].lits;
        for (i, l) in lits.iter().enumerate() {
            if l.pos && l.lhs == l.rhs {
                return None;
            }
            if lits[i + 1..].iter().any(|m| m.pos != l.pos && m.lhs == l.lhs && m.rhs == l.rhs) {
                return None;
            }
        }
        let mut kept: Vec<Lit> = Vec::new();
        for l in lits {
            if !l.pos && l.lhs == l.rhs {
                continue;
            }
            if kept.iter().any(|k| k.same_modulo_orientation(l)) {
                continue;
            }
            kept.push(l.clone());
        }
        if kept.len() == lits.len() {
            return Some(id);
        }
        let in_sos = self.clauses[id].in_sos;
        Some(self.add(normalize(&kept), Inference::Simplify { parent: id }, in_sos))
    }

    fn demodulators(&self) -> Vec<usize> {
        self.active
            .iter()
            .copied()
            .filter(|&a| {
                let l = &self.clauses[a].lits;
                l.len() == 1 && l[0].pos && !l[0].is_pred()
            })
            .collect()
    }

    /// One rewrite step with an active unit equation, if any applies.
    fn demod_once(&mut self, id: usize, demods: &[usize]) -> Option<usize> {
        let lits = self.clauses[id].lits.clone();
        let off = offset_after(&lits);
        for (li, lit) in lits.iter().enumerate() {
            for right_side in [false, true] {
                if right_side && lit.is_pred() {
                    continue;
                }
                let side = lit.side(right_side);
                for path in side.positions() {
                    let target = side.at(&path);
                    for &d in demods {
                        let eq = &self.clauses[d].lits[0];
                        for flip in [false, true] {
                            let (l, r) = if flip { (&eq.rhs, &eq.lhs) } else { (&eq.lhs, &eq.rhs) };
                            if l.is_var() {
                                continue;
                            }
                            let (l, r) = (l.shift(off), r.shift(off));
                            let mut s = Subst::new();
                            if !matches(self.syms, &l, target, &mut s) {
                                continue;
                            }
                            if !vars_bound(&r, &s) {
                                continue;
                            }
                            let rs = apply(&r, &s);
                            if kbo(self.syms, target, &rs) != Cmp::Greater {
                                continue;
                            }
                            let mut new = lits.clone();
                            let replaced = side.replace_at(&path, &rs);
                            if right_side {
                                new[li].rhs = replaced;
                            } else {
                                new[li].lhs = replaced;
                            }
                            let in_sos = self.clauses[id].in_sos;
                            let inf = Inference::Demod { parent: id, unit: d, li, right_side, path: path.clone(), flip, subst: s };
                            return Some(self.add(normalize(&new), inf, in_sos));
                        }
                    }
                }
            }
        }
        None
    }

    fn forward_simplify(&mut self, mut id: usize) -> Option<usize> {
        let demods = self.demodulators();
        for _ in 0..64 {
            match self.demod_once(id, &demods) {
                Some(next) => id = next,
                None => break,
            }
        }
        self.basic_simplify(id)
    }

    fn generate(&mut self, g: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.eq_resolution(g, &mut out);
        self.factoring(g, &mut out);
        self.eq_factoring(g, &mut out);
        let partners = self.active.clone();
        for a in partners {
            self.resolution(g, a, &mut out);
            if a != g {
                self.resolution(a, g, &mut out);
            }
            self.superposition(g, a, &mut out);
            if a != g {
                self.superposition(a, g, &mut out);
            }
            if self.out_of_resources() {
                break;
            }
        }
        out
    }

    fn push(&mut self, lits: Vec<Lit>, inf: Inference, out: &mut Vec<usize>) {
        out.push(self.add(normalize(&lits), inf, true));
    }

    fn eq_resolution(&mut self, g: usize, out: &mut Vec<usize>) {
        let lits = self.clauses[g].lits.clone();
        for (li, l) in lits.iter().enumerate() {
            if l.pos || l.is_pred() || !is_maximal(self.syms, &lits, li) {
                continue;
            }
            if let Some(s) = unifier(self.syms, &l.lhs, &l.rhs) {
                let s = resolve(&s);
                let concl = without(&lits, li).map(|m| apply_lit(m, &s)).collect();
                self.push(concl, Inference::EqResolve { parent: g, li, subst: s }, out);
            }
        }
    }

    fn factoring(&mut self, g: usize, out: &mut Vec<usize>) {
        let lits = self.clauses[g].lits.clone();
        for i in 0..lits.len() {
            if !lits[i].pos || !is_maximal(self.syms, &lits, i) {
                continue;
            }
            for j in 0..lits.len() {
                if j == i || !lits[j].pos || lits[j].is_pred() != lits[i].is_pred() {
                    continue;
                }
                let (a, b) = (&lits[i], &lits[j]);
                let flips: &[bool] = if a.is_pred() { &[false] } else { &[false, true] };
                for &flip in flips {
                    let (bl, br) = if flip { (&b.rhs, &b.lhs) } else { (&b.lhs, &b.rhs) };
                    let mut s = Subst::new();
                    if unify(self.syms, &a.lhs, bl, &mut s) && unify(self.syms, &a.rhs, br, &mut s) {
                        let s = resolve(&s);
                        let concl = without(&lits, j).map(|m| apply_lit(m, &s)).collect();
                        self.push(concl, Inference::Factor { parent: g, i, j, subst: s }, out);
                    }
                }
            }
        }
    }

    fn eq_factoring(&mut self, g: usize, out: &mut Vec<usize>) {
        let lits = self.clauses[g].lits.clone();
        for i in 0..lits.len() {
            if !lits[i].pos || lits[i].is_pred() || !is_maximal(self.syms, &lits, i) {
                continue;
            }
            for j in 0..lits.len() {
                if j == i || !lits[j].pos || lits[j].is_pred() {
                    continue;
                }
                for flip_i in [false, true] {
                    for flip_j in [false, true] {
                        let (s1, t1) = sides(&lits[i], flip_i);
                        let (s2, t2) = sides(&lits[j], flip_j);
                        if s1.is_var() {
                            continue;
                        }
                        let Some(s) = unifier(self.syms, s1, s2) else { continue };
                        let s = resolve(&s);
                        if kbo(self.syms, &apply(s1, &s), &apply(t1, &s)) == Cmp::Less {
                            continue;
                        }
                        let mut concl: Vec<Lit> = lits.clone();
                        concl[i] = Lit::eq(false, t1.clone(), t2.clone());
                        let concl = concl.iter().map(|m| apply_lit(m, &s)).collect();
                        self.push(concl, Inference::EqFactor { parent: g, i, j, flip_i, flip_j, subst: s }, out);
                    }
                }
            }
        }
    }

    fn resolution(&mut self, left: usize, right: usize, out: &mut Vec<usize>) {
        let l_lits = self.clauses[left].lits.clone();
        let off = offset_after(&l_lits);
        let r_lits = shifted(&self.clauses[right].lits, off);
        for (li, a) in l_lits.iter().enumerate() {
            if !a.pos || !a.is_pred() || !is_maximal(self.syms, &l_lits, li) {
                continue;
            }
            for (ri, b) in r_lits.iter().enumerate() {
                if b.pos || !b.is_pred() || !is_maximal(self.syms, &r_lits, ri) {
                    continue;
                }
                let Some(s) = unifier(self.syms, &a.lhs, &b.lhs) else { continue };
                let s = resolve(&s);
                let concl = without(&l_lits, li).chain(without(&r_lits, ri)).map(|m| apply_lit(m, &s)).collect();
                self.push(concl, Inference::Resolve { left, right, li, ri, subst: s }, out);
            }
        }
    }

    fn superposition(&mut self, from: usize, into: usize, out: &mut Vec<usize>) {
        let f_lits = self.clauses[from].lits.clone();
        let off = offset_after(&f_lits);
        let i_lits = shifted(&self.clauses[into].lits, off);
        for (fi, eq) in f_lits.iter().enumerate() {
            if !eq.pos || eq.is_pred() || !is_maximal(self.syms, &f_lits, fi) {
                continue;
            }
            for flip in [false, true] {
                let (l, r) = sides(eq, flip);
                if l.is_var() || kbo(self.syms, l, r) == Cmp::Less {
                    continue;
                }
                for (ii, target) in i_lits.iter().enumerate() {
                    if !is_maximal(self.syms, &i_lits, ii) {
                        continue;
                    }
                    for right_side in [false, true] {
                        if right_side && target.is_pred() {
                            continue;
                        }
                        let side = target.side(right_side);
                        let other = target.side(!right_side);
                        for path in side.positions() {
                            if target.is_pred() && path.is_empty() {
                                continue;
                            }
                            let Some(s) = unifier(self.syms, l, side.at(&path)) else { continue };
                            let s = resolve(&s);
                            let (ls, rs) = (apply(l, &s), apply(r, &s));
                            if matches!(kbo(self.syms, &ls, &rs), Cmp::Less | Cmp::Equal) {
                                continue;
                            }
                            if !target.is_pred() && kbo(self.syms, &apply(side, &s), &apply(other, &s)) == Cmp::Less {
                                continue;
                            }
                            let mut new = i_lits.clone();
                            let replaced = side.replace_at(&path, r);
                            if right_side {
                                new[ii].rhs = replaced;
                            } else {
                                new[ii].lhs = replaced;
                            }
                            let concl = new.iter().chain(without(&f_lits, fi)).map(|m| apply_lit(m, &s)).collect();
                            let inf = Inference::Superpose { from, into, fi, flip, ii, right_side, path, subst: s };
                            self.push(concl, inf, out);
                        }
                    }
                }
            }
        }
    }

    fn extract(&self, empty: usize) -> Proof {
        let mut seen = HashSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.clauses[id].inference.parents());
            }
        }
        let mut ids: Vec<usize> = seen.into_iter().collect();
        ids.sort_unstable();
        Proof { clauses: ids.into_iter().map(|i| self.clauses[i].clone()).collect(), symbols: self.syms.clone(), empty }
    }
}

fn sides(l: &Lit, flip: bool) -> (&PTerm, &PTerm) {
    if flip {
        (&l.rhs, &l.lhs)
    } else {
        (&l.lhs, &l.rhs)
    }
}

/// Every variable of `t` is bound by `s`.
fn vars_bound(t: &PTerm, s: &Subst) -> bool {
    match t {
        PTerm::Var(v, _) => s.contains_key(v),
        PTerm::App(_, args) => args.iter().all(|a| vars_bound(a, s)),
    }
}

/// Does some instance of `c` embed into `d` literal by literal?
pub fn subsumes(syms: &Symbols, c: &[Lit], d: &[Lit]) -> bool {
    if c.len() > d.len() {
        return false;
    }
    let mut used = vec![false; d.len()];
    embed(syms, c, d, &mut used, &Subst::new())
}

fn embed(syms: &Symbols, c: &[Lit], d: &[Lit], used: &mut [bool], s: &Subst) -> bool {
    let Some((first, rest)) = c.split_first() else { return true };
    for (k, m) in d.iter().enumerate() {
        if used[k] || m.pos != first.pos || m.is_pred() != first.is_pred() {
            continue;
        }
        for flip in [false, true] {
            if flip && first.is_pred() {
                continue;
            }
            let (ml, mr) = sides(m, flip);
            let mut s2 = s.clone();
            if matches(syms, &first.lhs, ml, &mut s2) && matches(syms, &first.rhs, mr, &mut s2) {
                used[k] = true;
                if embed(syms, rest, d, used, &s2) {
                    return true;
                }
                used[k] = false;
            }
        }
    }
    false
}
