//! Run corpus problems from their recorded transcripts under several prover
//! configurations and tabulate which ones reconstruct.
//!
//! `cargo run --example compare_modes [--mode NAME]... [PREFIX]`
//! With no `--mode`, compares `default`, `no-hints` and `no-sos`.

use std::path::Path;
use std::time::Instant;

use hintsmt::logic::parse_problem;
use hintsmt::pipeline::{run_pipeline, PipelineConfig};
use hintsmt::prover::SosMode;
use hintsmt::solver::SolverConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut modes = Vec::new();
    let mut prefix = String::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--mode" {
            let m = args.next().ok_or("--mode needs a value")?;
            modes.push(SosMode::from_name(&m).ok_or_else(|| format!("unknown mode {m}"))?);
        } else {
            prefix = a;
        }
    }
    if modes.is_empty() {
        modes = vec![SosMode::Default, SosMode::NoHints, SosMode::NoSoS];
    }
    let mut names: Vec<String> = std::fs::read_dir(corpus.join("problems"))?
        .filter_map(|e| e.ok()?.path().file_stem().map(|s| s.to_string_lossy().into_owned()))
        .filter(|n| n.starts_with(&prefix))
        .collect();
    names.sort();
    let mut solved = vec![0; modes.len()];
    for name in &names {
        let goal = parse_problem(&std::fs::read_to_string(corpus.join("problems").join(format!("{name}.prob")))?)?;
        let transcript = corpus.join("transcripts").join(format!("{name}.transcript"));
        print!("{name:32}");
        for (k, mode) in modes.iter().enumerate() {
            let cfg = PipelineConfig::new(SolverConfig::replay(&transcript)).with_mode(*mode);
            let start = Instant::now();
            let cell = match run_pipeline(&goal, &cfg) {
                Ok(out) => {
                    solved[k] += 1;
                    format!("ok {}h", out.hints_retained())
                }
                Err(e) => format!("exit {}", e.exit_code()),
            };
            print!(" {:>18}", format!("{cell} {:.1}s", start.elapsed().as_secs_f64()));
        }
        println!();
    }
    for (mode, n) in modes.iter().zip(&solved) {
        println!("{mode}: {n}/{}", names.len());
    }
    Ok(())
}
