use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

use crate::sexp::Sexp;

/// Types of the source logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceType {
    Prop,
    Nat,
    Int,
    Arrow(Box<SourceType>, Box<SourceType>),
    Data(String),
    Opaque(String),
}

impl SourceType {
    pub fn arrow(domain: SourceType, codomain: SourceType) -> SourceType {
        SourceType::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// Right-nested arrow from a parameter list. An empty list yields `ret`.
    pub fn function(params: impl IntoIterator<Item = SourceType>, ret: SourceType) -> SourceType {
        let params: Vec<_> = params.into_iter().collect();
        params.into_iter().rev().fold(ret, |acc, p| SourceType::arrow(p, acc))
    }

    /// Split an arrow chain into its parameters and final result.
    pub fn uncurry(&self) -> (Vec<&SourceType>, &SourceType) {
        let mut params = Vec::new();
        let mut t = self;
        while let SourceType::Arrow(d, c) = t {
            params.push(d.as_ref());
            t = c;
        }
        (params, t)
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, SourceType::Arrow(..))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, SourceType::Nat | SourceType::Int)
    }

    /// Does `name` occur anywhere inside this type?
    pub fn mentions_data(&self, name: &str) -> bool {
        match self {
            SourceType::Data(n) => n == name,
            SourceType::Arrow(d, c) => d.mentions_data(name) || c.mentions_data(name),
            _ => false,
        }
    }

    pub fn mentions_prop(&self) -> bool {
        match self {
            SourceType::Prop => true,
            SourceType::Arrow(d, c) => d.mentions_prop() || c.mentions_prop(),
            _ => false,
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        match self {
            SourceType::Prop => Sexp::atom("Prop"),
            SourceType::Nat => Sexp::atom("Nat"),
            SourceType::Int => Sexp::atom("Int"),
            SourceType::Data(n) | SourceType::Opaque(n) => Sexp::atom(n.clone()),
            SourceType::Arrow(..) => {
                let (params, ret) = self.uncurry();
                let mut items = vec![Sexp::atom("->")];
                items.extend(params.into_iter().map(SourceType::to_sexp));
                items.push(ret.to_sexp());
                Sexp::List(items)
            }
        }
    }

    /// A short identifier-safe rendering, used to build predicate names.
    pub fn mangle(&self) -> String {
        match self {
            SourceType::Prop => "Prop".into(),
            SourceType::Nat => "Nat".into(),
            SourceType::Int => "Int".into(),
            SourceType::Data(n) | SourceType::Opaque(n) => n.clone(),
            SourceType::Arrow(d, c) => format!("{}_to_{}", d.mangle(), c.mangle()),
        }
    }
}

impl fmt::Display for SourceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub args: Vec<SourceType>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub name: String,
    pub result: SourceType,
}

/// An inductive datatype or structure declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatatypeDecl {
    pub name: String,
    pub is_structure: bool,
    pub constructors: Vec<Constructor>,
    /// Populated only for structures, one per constructor argument.
    pub projections: Vec<Projection>,
}

impl DatatypeDecl {
    pub fn constructor(&self, name: &str) -> Option<(usize, &Constructor)> {
        self.constructors.iter().enumerate().find(|(_, c)| c.name == name)
    }

    pub fn is_recursive(&self) -> bool {
        self.constructors.iter().any(|c| c.args.iter().any(|a| a.mentions_data(&self.name)))
    }

    pub fn has_nullary_constructor(&self) -> bool {
        self.constructors.iter().any(|c| c.args.is_empty())
    }

    /// Check the declaration-local invariants: at least one constructor, the
    /// structure shape, no `Prop` arguments and strict positivity.
    pub fn validate(&self) -> Result<(), String> {
        if self.constructors.is_empty() {
            return Err(format!("datatype {} has no constructors", self.name));
        }
        if self.is_structure {
            if self.constructors.len() != 1 {
                return Err(format!("structure {} must have exactly one constructor", self.name));
            }
            let ctor = &self.constructors[0];
            if ctor.args.len() != self.projections.len() {
                return Err(format!("structure {} needs one projection per constructor argument", self.name));
            }
            if ctor.args.iter().zip(&self.projections).any(|(a, p)| *a != p.result) {
                return Err(format!("structure {} has a projection whose type disagrees with its field", self.name));
            }
        } else if !self.projections.is_empty() {
            return Err(format!("only structures may declare projections ({})", self.name));
        }
        for c in &self.constructors {
            for a in &c.args {
                if a.mentions_prop() {
                    return Err(format!("constructor {} takes a Prop argument", c.name));
                }
                if a.is_arrow() && a.mentions_data(&self.name) {
                    return Err(format!("constructor {} has a non-strictly-positive occurrence of {}", c.name, self.name));
                }
            }
        }
        Ok(())
    }
}

/// What kind of symbol a name refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// A declared constant or function (including Skolem symbols and synthesized selectors).
    Declared,
    Constructor { datatype: String, index: usize },
    Projection { datatype: String, index: usize },
}

/// Declarations in scope for a goal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub datatypes: Vec<DatatypeDecl>,
    pub consts: IndexMap<String, SourceType>,
    /// Types explicitly declared inhabited.
    pub inhabited: BTreeSet<SourceType>,
}

impl Signature {
    pub fn datatype(&self, name: &str) -> Option<&DatatypeDecl> {
        self.datatypes.iter().find(|d| d.name == name)
    }

    pub fn has_type_name(&self, name: &str) -> bool {
        self.sorts.iter().any(|s| s == name) || self.datatype(name).is_some()
    }

    /// Resolve a symbol to its kind and type.
    pub fn lookup(&self, name: &str) -> Option<(SymbolKind, SourceType)> {
        if let Some(t) = self.consts.get(name) {
            return Some((SymbolKind::Declared, t.clone()));
        }
        for d in &self.datatypes {
            for (i, c) in d.constructors.iter().enumerate() {
                if c.name == name {
                    let ty = SourceType::function(c.args.iter().cloned(), SourceType::Data(d.name.clone()));
                    return Some((SymbolKind::Constructor { datatype: d.name.clone(), index: i }, ty));
                }
            }
            for (i, p) in d.projections.iter().enumerate() {
                if p.name == name {
                    let ty = SourceType::arrow(SourceType::Data(d.name.clone()), p.result.clone());
                    return Some((SymbolKind::Projection { datatype: d.name.clone(), index: i }, ty));
                }
            }
        }
        None
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    /// Every symbol name the signature binds, in declaration order.
    pub fn symbol_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for d in &self.datatypes {
            out.extend(d.constructors.iter().map(|c| c.name.clone()));
            out.extend(d.projections.iter().map(|p| p.name.clone()));
        }
        out.extend(self.consts.keys().cloned());
        out
    }

    /// Whether a type is known to be inhabited: declared, builtin, a datatype
    /// with a constructor whose arguments are all inhabited (in particular any
    /// datatype with a nullary constructor), or an arrow into an inhabited type.
    pub fn is_inhabited(&self, ty: &SourceType) -> bool {
        self.inhabited_rec(ty, &mut Vec::new())
    }

    fn inhabited_rec(&self, ty: &SourceType, visiting: &mut Vec<String>) -> bool {
        if self.inhabited.contains(ty) {
            return true;
        }
        match ty {
            SourceType::Prop | SourceType::Nat | SourceType::Int => true,
            SourceType::Arrow(_, c) => self.inhabited_rec(c, visiting),
            SourceType::Opaque(_) => false,
            SourceType::Data(name) => {
                if visiting.contains(name) {
                    return false;
                }
                let Some(d) = self.datatype(name) else { return false };
                visiting.push(name.clone());
                let ok = d.constructors.iter().any(|c| c.args.iter().all(|a| self.inhabited_rec(a, visiting)));
                visiting.pop();
                ok
            }
        }
    }

    /// A name not bound in the signature, built from `base` plus a numeric suffix
    /// when needed.
    pub fn fresh_name(&self, base: &str, avoid: &dyn Fn(&str) -> bool) -> String {
        if !self.is_symbol(base) && !avoid(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !self.is_symbol(n) && !avoid(n))
            .unwrap()
    }
}
