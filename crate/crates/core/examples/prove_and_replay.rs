//! Reconstruct a proof from a recorded solver run, print it in both
//! dialects, and replay the neutral script without the solver.
//!
//! `cargo run --example prove_and_replay [NAME] [MODE]` uses the corpus
//! problem NAME (default `injective_minimum`) under the given set-of-support
//! mode (default `default`).

use std::path::Path;

use hintsmt::logic::parse_problem;
use hintsmt::pipeline::{run_pipeline, PipelineConfig};
use hintsmt::prover::{Limits, SosMode};
use hintsmt::replay::replay_script;
use hintsmt::script::Dialect;
use hintsmt::solver::{solver_invocations, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "injective_minimum".into());
    let mode = match args.next() {
        Some(m) => SosMode::from_name(&m).ok_or_else(|| format!("unknown mode {m}"))?,
        None => SosMode::Default,
    };
    let goal = parse_problem(&std::fs::read_to_string(corpus.join("problems").join(format!("{name}.prob")))?)?;
    let solver = SolverConfig::replay(corpus.join("transcripts").join(format!("{name}.transcript")));
    let out = run_pipeline(&goal, &PipelineConfig::new(solver).with_mode(mode))?;
    println!("{} of {} hints kept\n", out.hints_retained(), out.hints_generated());
    let neutral = out.script.render(Dialect::Neutral);
    println!("{neutral}");
    println!("{}", out.script.render(Dialect::LeanSketch));

    let calls = solver_invocations();
    let r = replay_script(&goal, &neutral, Limits::default())?;
    println!("replay: proof = {}, solver calls = {}", r.is_proof(), solver_invocations() - calls);
    Ok(())
}
