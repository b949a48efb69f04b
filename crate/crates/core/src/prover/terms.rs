//! First-order terms, literals and the symbol table of the prover.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

pub type Sym = u32;
pub type Sort = u32;

/// The constant `true`; predicate atoms are equations `P(..) = true`.
pub const TOP: Sym = 0;
pub const BOOL: Sort = 0;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PTerm {
    Var(u32, Sort),
    App(Sym, Vec<PTerm>),
}

impl PTerm {
    pub fn top() -> PTerm {
        PTerm::App(TOP, Vec::new())
    }

    pub fn constant(s: Sym) -> PTerm {
        PTerm::App(s, Vec::new())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, PTerm::App(TOP, a) if a.is_empty())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, PTerm::Var(..))
    }

    /// Symbol count, variables included.
    pub fn weight(&self) -> usize {
        match self {
            PTerm::Var(..) => 1,
            PTerm::App(_, args) => 1 + args.iter().map(PTerm::weight).sum::<usize>(),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            PTerm::Var(v, _) => Some(*v),
            PTerm::App(_, args) => args.iter().filter_map(PTerm::max_var).max(),
        }
    }

    pub fn occurs(&self, v: u32) -> bool {
        match self {
            PTerm::Var(x, _) => *x == v,
            PTerm::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            PTerm::Var(..) => false,
            PTerm::App(_, args) => args.iter().all(PTerm::is_ground),
        }
    }

    pub fn shift(&self, k: u32) -> PTerm {
        match self {
            PTerm::Var(v, s) => PTerm::Var(v + k, *s),
            PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| a.shift(k)).collect()),
        }
    }

    pub fn at(&self, path: &[usize]) -> &PTerm {
        match (path.split_first(), self) {
            (None, _) => self,
            (Some((i, rest)), PTerm::App(_, args)) => args[*i].at(rest),
            _ => panic!("position outside term"),
        }
    }

    pub fn replace_at(&self, path: &[usize], by: &PTerm) -> PTerm {
        match (path.split_first(), self) {
            (None, _) => by.clone(),
            (Some((i, rest)), PTerm::App(f, args)) => {
                let mut args = args.clone();
                args[*i] = args[*i].replace_at(rest, by);
                PTerm::App(*f, args)
            }
            _ => panic!("position outside term"),
        }
    }

    /// Positions of non-variable subterms, outermost first.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let PTerm::App(_, args) = self {
            out.push(cur.clone());
            for (i, a) in args.iter().enumerate() {
                cur.push(i);
                a.collect_positions(cur, out);
                cur.pop();
            }
        }
    }

    pub fn rename(&self, map: &mut HashMap<u32, u32>, next: &mut u32) -> PTerm {
        match self {
            PTerm::Var(v, s) => {
                let n = *map.entry(*v).or_insert_with(|| {
                    *next += 1;
                    *next - 1
                });
                PTerm::Var(n, *s)
            }
            PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| a.rename(map, next)).collect()),
        }
    }
}

/// An equational literal. Predicate atoms have `rhs = true`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub pos: bool,
    pub lhs: PTerm,
    pub rhs: PTerm,
}

impl Lit {
    pub fn eq(pos: bool, lhs: PTerm, rhs: PTerm) -> Lit {
        Lit { pos, lhs, rhs }
    }

    pub fn pred(pos: bool, atom: PTerm) -> Lit {
        Lit { pos, lhs: atom, rhs: PTerm::top() }
    }

    pub fn is_pred(&self) -> bool {
        self.rhs.is_top()
    }

    pub fn weight(&self) -> usize {
        self.lhs.weight() + if self.is_pred() { 0 } else { self.rhs.weight() }
    }

    pub fn side(&self, right: bool) -> &PTerm {
        if right {
            &self.rhs
        } else {
            &self.lhs
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    pub fn map(&self, f: &mut impl FnMut(&PTerm) -> PTerm) -> Lit {
        Lit { pos: self.pos, lhs: f(&self.lhs), rhs: f(&self.rhs) }
    }

    /// Same literal, possibly with the sides swapped.
    pub fn same_modulo_orientation(&self, other: &Lit) -> bool {
        self.pos == other.pos
            && ((self.lhs == other.lhs && self.rhs == other.rhs) || (self.lhs == other.rhs && self.rhs == other.lhs))
    }
}

pub fn max_var(lits: &[Lit]) -> Option<u32> {
    lits.iter().filter_map(Lit::max_var).max()
}

/// Offset that renames a second clause apart from `lits`.
pub fn offset_after(lits: &[Lit]) -> u32 {
    max_var(lits).map_or(0, |v| v + 1)
}

/// Renumber variables in order of first occurrence.
pub fn normalize(lits: &[Lit]) -> Vec<Lit> {
    let mut map = HashMap::new();
    let mut next = 0;
    lits.iter()
        .map(|l| {
            let lhs = l.lhs.rename(&mut map, &mut next);
            let rhs = l.rhs.rename(&mut map, &mut next);
            Lit { pos: l.pos, lhs, rhs }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInfo {
    pub name: String,
    pub args: Vec<Sort>,
    pub sort: Sort,
    pub skolem: bool,
}

/// Interned symbols and sorts. Declaration order is the precedence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    pub syms: Vec<SymbolInfo>,
    keys: HashMap<String, Sym>,
    pub sorts: Vec<String>,
    sort_keys: HashMap<String, Sort>,
}

impl Default for Symbols {
    fn default() -> Self {
        Symbols::new()
    }
}

impl Symbols {
    pub fn new() -> Symbols {
        let mut s = Symbols { syms: Vec::new(), keys: HashMap::new(), sorts: Vec::new(), sort_keys: HashMap::new() };
        s.sort("Bool");
        s.intern("true", "true", Vec::new(), BOOL, false);
        s
    }

    pub fn sort(&mut self, name: &str) -> Sort {
        if let Some(s) = self.sort_keys.get(name) {
            return *s;
        }
        let id = self.sorts.len() as Sort;
        self.sorts.push(name.to_string());
        self.sort_keys.insert(name.to_string(), id);
        id
    }

    /// Look up a symbol by key, creating it on first use.
    pub fn intern(&mut self, key: &str, display: &str, args: Vec<Sort>, sort: Sort, skolem: bool) -> Sym {
        if let Some(s) = self.keys.get(key) {
            return *s;
        }
        let id = self.syms.len() as Sym;
        self.syms.push(SymbolInfo { name: display.to_string(), args, sort, skolem });
        self.keys.insert(key.to_string(), id);
        id
    }

    pub fn get(&self, key: &str) -> Option<Sym> {
        self.keys.get(key).copied()
    }

    pub fn info(&self, s: Sym) -> &SymbolInfo {
        &self.syms[s as usize]
    }

    pub fn sort_of(&self, t: &PTerm) -> Sort {
        match t {
            PTerm::Var(_, s) => *s,
            PTerm::App(f, _) => self.syms[*f as usize].sort,
        }
    }

    pub fn show(&self, t: &PTerm) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out);
        out
    }

    fn write_term(&self, t: &PTerm, out: &mut String) {
        match t {
            PTerm::Var(v, _) => {
                let _ = write!(out, "X{v}");
            }
            PTerm::App(f, args) if args.is_empty() => out.push_str(&self.syms[*f as usize].name),
            PTerm::App(f, args) => {
                out.push('(');
                out.push_str(&self.syms[*f as usize].name);
                for a in args {
                    out.push(' ');
                    self.write_term(a, out);
                }
                out.push(')');
            }
        }
    }

    pub fn show_lit(&self, l: &Lit) -> String {
        match (l.is_pred(), l.pos) {
            (true, true) => self.show(&l.lhs),
            (true, false) => format!("(not {})", self.show(&l.lhs)),
            (false, true) => format!("(= {} {})", self.show(&l.lhs), self.show(&l.rhs)),
            (false, false) => format!("(!= {} {})", self.show(&l.lhs), self.show(&l.rhs)),
        }
    }

    pub fn show_clause(&self, lits: &[Lit]) -> String {
        if lits.is_empty() {
            return "false".into();
        }
        lits.iter().map(|l| self.show_lit(l)).collect::<Vec<_>>().join(" | ")
    }
}

/// A substitution from variable ids to terms.
pub type Subst = BTreeMap<u32, PTerm>;
