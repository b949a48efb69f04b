//! Re-derive every step of a refutation.
//!
//! Deliberately shares no code with the search: substitution, renaming,
//! subterm access and the variant test are reimplemented here.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::saturate::{Clause, Inference, Proof};
use super::terms::{Lit, PTerm, Subst, TOP};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("clause {0}: parent {1} is missing or not earlier")]
    MissingParent(usize, usize),
    #[error("clause {0}: {1}")]
    BadStep(usize, String),
    #[error("clause {0}: conclusion does not follow from the recorded step")]
    WrongConclusion(usize),
    #[error("the final clause is not empty")]
    NotRefutation,
}

fn subst(t: &PTerm, s: &Subst) -> PTerm {
    match t {
        PTerm::Var(v, _) => match s.get(v) {
            Some(b) if b != t => subst(b, s),
            _ => t.clone(),
        },
        PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| subst(a, s)).collect()),
    }
}

fn subst_lit(l: &Lit, s: &Subst) -> Lit {
    Lit { pos: l.pos, lhs: subst(&l.lhs, s), rhs: subst(&l.rhs, s) }
}

fn highest_var(t: &PTerm) -> Option<u32> {
    match t {
        PTerm::Var(v, _) => Some(*v),
        PTerm::App(_, args) => args.iter().filter_map(highest_var).max(),
    }
}

fn rename_apart(lits: &[Lit], after: &[Lit]) -> Vec<Lit> {
    let off = after.iter().flat_map(|l| [highest_var(&l.lhs), highest_var(&l.rhs)]).flatten().max().map_or(0, |m| m + 1);
    fn bump(t: &PTerm, off: u32) -> PTerm {
        match t {
            PTerm::Var(v, s) => PTerm::Var(v + off, *s),
            PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| bump(a, off)).collect()),
        }
    }
    lits.iter().map(|l| Lit { pos: l.pos, lhs: bump(&l.lhs, off), rhs: bump(&l.rhs, off) }).collect()
}

fn subterm<'a>(t: &'a PTerm, path: &[usize]) -> Option<&'a PTerm> {
    match path.split_first() {
        None => Some(t),
        Some((i, rest)) => match t {
            PTerm::App(_, args) => subterm(args.get(*i)?, rest),
            PTerm::Var(..) => None,
        },
    }
}

fn put(t: &PTerm, path: &[usize], r: &PTerm) -> Option<PTerm> {
    match path.split_first() {
        None => Some(r.clone()),
        Some((i, rest)) => match t {
            PTerm::App(f, args) => {
                let mut args = args.clone();
                let slot = args.get_mut(*i)?;
                *slot = put(slot, rest, r)?;
                Some(PTerm::App(*f, args))
            }
            PTerm::Var(..) => None,
        },
    }
}

fn is_pred(l: &Lit) -> bool {
    l.rhs == PTerm::App(TOP, vec![])
}

fn others(lits: &[Lit], skip: usize) -> Vec<Lit> {
    lits.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, l)| l.clone()).collect()
}

fn term_variant(a: &PTerm, b: &PTerm, fwd: &mut HashMap<u32, u32>, bwd: &mut HashMap<u32, u32>) -> bool {
    match (a, b) {
        (PTerm::Var(x, sx), PTerm::Var(y, sy)) => {
            if sx != sy {
                return false;
            }
            match (fwd.get(x), bwd.get(y)) {
                (Some(m), Some(n)) => m == y && n == x,
                (None, None) => {
                    fwd.insert(*x, *y);
                    bwd.insert(*y, *x);
                    true
                }
                _ => false,
            }
        }
        (PTerm::App(f, fa), PTerm::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(p, q)| term_variant(p, q, fwd, bwd))
        }
        _ => false,
    }
}

type Maps = (HashMap<u32, u32>, HashMap<u32, u32>);

/// Are the two clauses equal up to a consistent variable bijection,
/// literal order and orientation of equations?
pub fn variant(a: &[Lit], b: &[Lit]) -> bool {
    fn go(a: &[Lit], b: &[Lit], used: &mut Vec<bool>, maps: &Maps) -> bool {
        let Some((first, rest)) = a.split_first() else { return true };
        for (k, m) in b.iter().enumerate() {
            if used[k] || m.pos != first.pos {
                continue;
            }
            for (x, y) in [(&m.lhs, &m.rhs), (&m.rhs, &m.lhs)] {
                let (mut f, mut w) = maps.clone();
                if term_variant(&first.lhs, x, &mut f, &mut w) && term_variant(&first.rhs, y, &mut f, &mut w) {
                    used[k] = true;
                    if go(rest, b, used, &(f, w)) {
                        return true;
                    }
                    used[k] = false;
                }
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut vec![false; b.len()], &Default::default())
}

fn unifies(a: &PTerm, b: &PTerm, s: &Subst) -> bool {
    subst(a, s) == subst(b, s)
}

/// Check every step of the proof and that it ends in the empty clause.
pub fn check_proof(proof: &Proof) -> Result<(), CheckError> {
    let by_id: BTreeMap<usize, &Clause> = proof.clauses.iter().map(|c| (c.id, c)).collect();
    for c in &proof.clauses {
        check_step(c, &by_id)?;
    }
    match by_id.get(&proof.empty) {
        Some(c) if c.lits.is_empty() => Ok(()),
        _ => Err(CheckError::NotRefutation),
    }
}

fn check_step(c: &Clause, by_id: &BTreeMap<usize, &Clause>) -> Result<(), CheckError> {
    let get = |p: usize| -> Result<&Vec<Lit>, CheckError> {
        match by_id.get(&p) {
            Some(pc) if p < c.id => Ok(&pc.lits),
            _ => Err(CheckError::MissingParent(c.id, p)),
        }
    };
    let bad = |m: &str| CheckError::BadStep(c.id, m.to_string());
    let expected: Vec<Lit> = match &c.inference {
        Inference::Input { .. } => return Ok(()),
        Inference::Resolve { left, right, li, ri, subst: s } => {
            let l = get(*left)?;
            let r = rename_apart(get(*right)?, l);
            let (a, b) = (l.get(*li).ok_or_else(|| bad("literal index"))?, r.get(*ri).ok_or_else(|| bad("literal index"))?);
            if !(a.pos && !b.pos && is_pred(a) && is_pred(b)) {
                return Err(bad("resolution needs complementary predicate literals"));
            }
            if !unifies(&a.lhs, &b.lhs, s) {
                return Err(bad("substitution does not unify the atoms"));
            }
            others(l, *li).iter().chain(others(&r, *ri).iter()).map(|x| subst_lit(x, s)).collect()
        }
        Inference::Superpose { from, into, fi, flip, ii, right_side, path, subst: s } => {
            let f = get(*from)?;
            let i = rename_apart(get(*into)?, f);
            let eq = f.get(*fi).ok_or_else(|| bad("literal index"))?;
            if !eq.pos || is_pred(eq) {
                return Err(bad("superposition needs a positive equation"));
            }
            let (l, r) = if *flip { (&eq.rhs, &eq.lhs) } else { (&eq.lhs, &eq.rhs) };
            let target = i.get(*ii).ok_or_else(|| bad("literal index"))?;
            let side = if *right_side { &target.rhs } else { &target.lhs };
            let u = subterm(side, path).ok_or_else(|| bad("position"))?;
            if matches!(u, PTerm::Var(..)) || !unifies(l, u, s) {
                return Err(bad("rewritten subterm does not unify"));
            }
            let mut lits = i.clone();
            let replaced = put(side, path, r).ok_or_else(|| bad("position"))?;
            if *right_side {
                lits[*ii].rhs = replaced;
            } else {
                lits[*ii].lhs = replaced;
            }
            lits.iter().chain(others(f, *fi).iter()).map(|x| subst_lit(x, s)).collect()
        }
        Inference::EqResolve { parent, li, subst: s } => {
            let p = get(*parent)?;
            let l = p.get(*li).ok_or_else(|| bad("literal index"))?;
            if l.pos || !unifies(&l.lhs, &l.rhs, s) {
                return Err(bad("equality resolution needs a unifiable negative literal"));
            }
            others(p, *li).iter().map(|x| subst_lit(x, s)).collect()
        }
        Inference::Factor { parent, i, j, subst: s } => {
            let p = get(*parent)?;
            let (a, b) = (p.get(*i).ok_or_else(|| bad("literal index"))?, p.get(*j).ok_or_else(|| bad("literal index"))?);
            if i == j || subst_lit(a, s).pos != subst_lit(b, s).pos {
                return Err(bad("factoring needs two literals of the same sign"));
            }
            let (x, y) = (subst_lit(a, s), subst_lit(b, s));
            if !(x == y || (x.lhs == y.rhs && x.rhs == y.lhs)) {
                return Err(bad("factored literals are not identical"));
            }
            others(p, *j).iter().map(|x| subst_lit(x, s)).collect()
        }
        Inference::EqFactor { parent, i, j, flip_i, flip_j, subst: s } => {
            let p = get(*parent)?;
            let (a, b) = (p.get(*i).ok_or_else(|| bad("literal index"))?, p.get(*j).ok_or_else(|| bad("literal index"))?);
            if i == j || !a.pos || !b.pos {
                return Err(bad("equality factoring needs two positive equations"));
            }
            let (s1, t1) = if *flip_i { (&a.rhs, &a.lhs) } else { (&a.lhs, &a.rhs) };
            let (s2, t2) = if *flip_j { (&b.rhs, &b.lhs) } else { (&b.lhs, &b.rhs) };
            if !unifies(s1, s2, s) {
                return Err(bad("left sides do not unify"));
            }
            let mut lits = p.clone();
            lits[*i] = Lit { pos: false, lhs: t1.clone(), rhs: t2.clone() };
            lits.iter().map(|x| subst_lit(x, s)).collect()
        }
        Inference::Demod { parent, unit, li, right_side, path, flip, subst: s } => {
            let p = get(*parent)?;
            let u = rename_apart(get(*unit)?, p);
            let [eq] = u.as_slice() else { return Err(bad("demodulator is not a unit")) };
            if !eq.pos {
                return Err(bad("demodulator is not an equation"));
            }
            let (l, r) = if *flip { (&eq.rhs, &eq.lhs) } else { (&eq.lhs, &eq.rhs) };
            let target = p.get(*li).ok_or_else(|| bad("literal index"))?;
            let side = if *right_side { &target.rhs } else { &target.lhs };
            let sub = subterm(side, path).ok_or_else(|| bad("position"))?;
            if subst(l, s) != *sub {
                return Err(bad("demodulator does not match"));
            }
            let mut lits = p.clone();
            let replaced = put(side, path, &subst(r, s)).ok_or_else(|| bad("position"))?;
            if *right_side {
                lits[*li].rhs = replaced;
            } else {
                lits[*li].lhs = replaced;
            }
            lits
        }
        Inference::Simplify { parent } => {
            let p = get(*parent)?;
            let mut kept: Vec<Lit> = Vec::new();
            for l in p {
                let trivial = !l.pos && l.lhs == l.rhs;
                let repeated = kept.iter().any(|k| k.pos == l.pos && ((k.lhs == l.lhs && k.rhs == l.rhs) || (k.lhs == l.rhs && k.rhs == l.lhs)));
                if !trivial && !repeated {
                    kept.push(l.clone());
                }
            }
            kept
        }
    };
    if variant(&expected, &c.lits) {
        Ok(())
    } else {
        Err(CheckError::WrongConclusion(c.id))
    }
}
