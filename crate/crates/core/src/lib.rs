pub mod interp;
pub mod logic;
pub mod pipeline;
pub mod preprocess;
pub mod prover;
pub mod replay;
pub mod script;
pub mod sexp;
pub mod solver;
pub mod translate;
