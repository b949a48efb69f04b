//! A small s-expression reader and printer.
//!
//! Every textual format in the crate is s-expression based: problem files,
//! emitted SMT-LIB, solver output and proof scripts. The reader keeps line and
//! column information so that higher layers can report precise errors.

use std::fmt;

use thiserror::Error;

/// A 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ReadError {
    pub pos: Pos,
    pub msg: String,
}

/// A plain s-expression without position information.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into())
    }

    pub fn list(items: impl IntoIterator<Item = Sexp>) -> Sexp {
        Sexp::List(items.into_iter().collect())
    }

    /// `(head args...)`
    pub fn app(head: impl Into<String>, args: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut v = vec![Sexp::Atom(head.into())];
        v.extend(args);
        Sexp::List(v)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            Sexp::Atom(_) => None,
        }
    }

    /// The head atom of a list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(Sexp::as_atom)
    }

    pub fn is_atom(&self, s: &str) -> bool {
        matches!(self, Sexp::Atom(a) if a == s)
    }

    /// Replace every atom equal to `from` by `to`. Binders are not respected.
    pub fn replace_atom(&self, from: &str, to: &Sexp) -> Sexp {
        match self {
            Sexp::Atom(a) if a == from => to.clone(),
            Sexp::Atom(_) => self.clone(),
            Sexp::List(items) => Sexp::List(items.iter().map(|s| s.replace_atom(from, to)).collect()),
        }
    }

    /// Visit every node in pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Sexp)) {
        f(self);
        if let Sexp::List(items) = self {
            for i in items {
                i.walk(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Sexp::Atom(_) => 1,
            Sexp::List(items) => 1 + items.iter().map(Sexp::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An s-expression annotated with the position of its first character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Located {
    Atom(String, Pos),
    List(Vec<Located>, Pos),
}

impl Located {
    pub fn pos(&self) -> Pos {
        match self {
            Located::Atom(_, p) | Located::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Located::Atom(a, _) => Some(a),
            Located::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Located]> {
        match self {
            Located::List(l, _) => Some(l),
            Located::Atom(..) => None,
        }
    }

    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(Located::as_atom)
    }

    pub fn to_sexp(&self) -> Sexp {
        match self {
            Located::Atom(a, _) => Sexp::Atom(a.clone()),
            Located::List(items, _) => Sexp::List(items.iter().map(Located::to_sexp).collect()),
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn err(&self, pos: Pos, msg: impl Into<String>) -> ReadError {
        ReadError { pos, msg: msg.into() }
    }

    fn read(&mut self) -> Result<Option<Located>, ReadError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(self.err(start, "unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Located::List(items, start)));
                        }
                        Some(_) => {
                            let item = self.read()?.ok_or_else(|| self.err(start, "unclosed parenthesis"))?;
                            items.push(item);
                        }
                    }
                }
            }
            ')' => Err(self.err(start, "unexpected ')'")),
            '|' => {
                self.bump();
                let mut s = String::from("|");
                loop {
                    match self.bump() {
                        None => return Err(self.err(start, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(ch) => s.push(ch),
                    }
                }
                s.push('|');
                Ok(Some(Located::Atom(s, start)))
            }
            '"' => {
                self.bump();
                let mut s = String::from("\"");
                loop {
                    match self.bump() {
                        None => return Err(self.err(start, "unterminated string literal")),
                        Some('"') => {
                            // SMT-LIB escapes a quote by doubling it.
                            if self.chars.peek() == Some(&'"') {
                                self.bump();
                                s.push_str("\"\"");
                            } else {
                                break;
                            }
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                s.push('"');
                Ok(Some(Located::Atom(s, start)))
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = self.chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == ';' || ch == '"' || ch == '|' {
                        break;
                    }
                    s.push(ch);
                    self.bump();
                }
                Ok(Some(Located::Atom(s, start)))
            }
        }
    }
}

/// Read every top-level s-expression in `text`.
pub fn read_all_located(text: &str) -> Result<Vec<Located>, ReadError> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while let Some(s) = r.read()? {
        out.push(s);
    }
    Ok(out)
}

pub fn read_all(text: &str) -> Result<Vec<Sexp>, ReadError> {
    Ok(read_all_located(text)?.iter().map(Located::to_sexp).collect())
}

/// Read exactly one s-expression.
pub fn read_one(text: &str) -> Result<Sexp, ReadError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(ReadError { pos: Pos { line: 1, col: 1 }, msg: "empty input".into() }),
        _ => Err(ReadError { pos: Pos { line: 1, col: 1 }, msg: "expected a single s-expression".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_comments() {
        let v = read_all("(a (b c)) ; trailing\n x").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].to_string(), "(a (b c))");
        assert_eq!(v[1], Sexp::atom("x"));
    }

    #[test]
    fn quoted_symbols_and_strings() {
        let v = read_all("(error \"line 3 \"\"x\"\"\") |a b|").unwrap();
        assert_eq!(v[0].to_string(), "(error \"line 3 \"\"x\"\"\")");
        assert_eq!(v[1], Sexp::atom("|a b|"));
    }

    #[test]
    fn positions_are_tracked() {
        let v = read_all_located("\n  (foo\n   bar)").unwrap();
        assert_eq!(v[0].pos(), Pos { line: 2, col: 3 });
        assert_eq!(v[0].as_list().unwrap()[1].pos(), Pos { line: 3, col: 4 });
    }

    #[test]
    fn unbalanced_input_is_an_error() {
        let e = read_all("(a (b)").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 1 });
        assert!(read_all(")").is_err());
    }
}
