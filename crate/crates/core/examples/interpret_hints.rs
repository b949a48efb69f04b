//! Show how a recorded solver answer is read back into the source logic.
//!
//! `cargo run --example interpret_hints [NAME]` prints the SMT translation of
//! a corpus problem, the recorded verdict and core, and each hint before and
//! after back-translation.

use std::path::Path;

use hintsmt::interp::interpret_hints;
use hintsmt::logic::{parse_problem, print_term};
use hintsmt::preprocess::preprocess;
use hintsmt::solver::{run_solver, SolverConfig};
use hintsmt::translate::translate_goal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let name = std::env::args().nth(1).unwrap_or_else(|| "injective_minimum".into());
    let goal = parse_problem(&std::fs::read_to_string(corpus.join("problems").join(format!("{name}.prob")))?)?;
    let (pg, _) = preprocess(&goal);
    let (smt, symbols) = translate_goal(&pg)?;
    println!("{}", smt.text());
    let outcome = run_solver(&SolverConfig::replay(corpus.join("transcripts").join(format!("{name}.transcript"))), &smt)?;
    println!("; {:?}, core {:?}", outcome.status, outcome.unsat_core);
    let interp = interpret_hints(&symbols, &pg, &outcome.hints);
    for h in &outcome.hints {
        println!("\nhint {}: {}", h.ordinal, h.to_sexp());
        if let Some(i) = interp.hints.iter().find(|i| i.origin.ordinal == h.ordinal) {
            println!("  {} : {}", i.name, print_term(&i.statement));
        } else if let Some((_, e)) = interp.dropped.iter().find(|(d, _)| d.ordinal == h.ordinal) {
            println!("  dropped ({}): {e}", e.reason());
        }
    }
    for s in &interp.selectors {
        println!("\nselector {} : {}", s.name, print_term(&s.characteristic_property));
    }
    Ok(())
}
