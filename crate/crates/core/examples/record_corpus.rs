//! Record solver transcripts for every problem in `corpus/problems`.
//!
//! Each problem is run through the hint wrapper (`corpus/hint-solver.sh`),
//! which asks z3 for the verdict and core and appends `corpus/hints/<name>.hints`.
//! Run with `cargo run --example record_corpus [name ...]`.

use std::path::Path;

use hintsmt::logic::parse_problem;
use hintsmt::preprocess::preprocess;
use hintsmt::solver::{record_transcript, SolverConfig};
use hintsmt::translate::translate_goal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let only: Vec<String> = std::env::args().skip(1).collect();
    let mut entries: Vec<_> = std::fs::read_dir(corpus.join("problems"))?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let path = e.path();
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        if !only.is_empty() && !only.contains(&name) {
            continue;
        }
        let goal = parse_problem(&std::fs::read_to_string(&path)?)?;
        let (pg, _) = preprocess(&goal);
        let (script, _) = translate_goal(&pg)?;
        let mut cfg = SolverConfig::with_solver(corpus.join("hint-solver.sh"));
        cfg.extra_args = vec![corpus.join("hints").join(format!("{name}.hints")).display().to_string()];
        let out = record_transcript(&cfg, &script, &corpus.join("transcripts").join(format!("{name}.transcript")))?;
        println!("{name}: {:?}, core {:?}, {} hint(s)", out.status, out.unsat_core, out.hints.len());
    }
    Ok(())
}
