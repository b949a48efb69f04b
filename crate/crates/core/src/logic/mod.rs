//! The typed first-order source logic.

pub mod parse;
pub mod print;
pub mod term;
pub mod typecheck;
pub mod types;

pub use parse::{parse_problem, parse_term, ParseError};
pub use print::{print_goal, print_term};
pub use term::{Goal, Hypothesis, Term};
pub use typecheck::{typecheck, TypeError};
pub use types::{DatatypeDecl, Signature, SourceType};
