use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use hintsmt::logic::parse_problem;
use hintsmt::pipeline::{run_pipeline, PipelineConfig};
use hintsmt::preprocess::preprocess;
use hintsmt::prover::SosMode;
use hintsmt::script::Dialect;
use hintsmt::solver::SolverConfig;
use hintsmt::translate::translate_goal;

#[derive(Parser)]
#[command(name = "hintsmt", version, about = "Turn SMT solver hints into a self-contained proof script")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Default,
    NoHints,
    NoTheoryLemmas,
    NoSos,
    HintsOutOfSos,
    PremisesOutOfSos,
    UnitLemmasOnly,
    WithAcLemmas,
}

impl From<Mode> for SosMode {
    fn from(m: Mode) -> SosMode {
        match m {
            Mode::Default => SosMode::Default,
            Mode::NoHints => SosMode::NoHints,
            Mode::NoTheoryLemmas => SosMode::NoTheoryLemmas,
            Mode::NoSos => SosMode::NoSoS,
            Mode::HintsOutOfSos => SosMode::HintsOutOfSoS,
            Mode::PremisesOutOfSos => SosMode::PremisesOutOfSoS,
            Mode::UnitLemmasOnly => SosMode::UnitLemmasOnly,
            Mode::WithAcLemmas => SosMode::WithAcLemmas,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Neutral,
    LeanSketch,
}

#[derive(Subcommand)]
enum Command {
    /// Prove the goal in a problem file and print the proof script.
    Prove {
        file: PathBuf,
        /// Solver executable (default: $HINTSMT_SOLVER, then z3).
        #[arg(long, conflicts_with = "replay")]
        solver: Option<PathBuf>,
        /// Replay a recorded solver transcript instead of running a solver.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Solver timeout in milliseconds.
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long, value_enum, default_value = "default")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dump_smt: Option<PathBuf>,
        #[arg(long)]
        dump_proof: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "neutral")]
        dialect: DialectArg,
    },
}

fn main() -> ExitCode {
    let Command::Prove { file, solver, replay, timeout, mode, out, dump_smt, dump_proof, dialect } = Cli::parse().command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(4);
        }
    };
    let goal = match parse_problem(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(4);
        }
    };
    let mut solver_cfg = match (replay, solver) {
        (Some(t), _) => SolverConfig::replay(t),
        (None, Some(p)) => SolverConfig::with_solver(p),
        (None, None) => SolverConfig::live(),
    };
    if let Some(ms) = timeout {
        solver_cfg.timeout_ms = ms;
    }
    if let Some(path) = &dump_smt {
        let (pg, _) = preprocess(&goal);
        if let Ok((smt, _)) = translate_goal(&pg) {
            if let Err(e) = std::fs::write(path, smt.text()) {
                eprintln!("warning: cannot write {}: {e}", path.display());
            }
        }
    }
    let mut cfg = PipelineConfig::new(solver_cfg).with_mode(mode.into());
    cfg.limits.max_time = Duration::from_secs(30);
    let output = match run_pipeline(&goal, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let (Some(path), Some(p)) = (&dump_proof, output.result.proof()) {
        if let Err(e) = std::fs::write(path, p.dump()) {
            eprintln!("warning: cannot write {}: {e}", path.display());
        }
    }
    let dialect = match dialect {
        DialectArg::Neutral => Dialect::Neutral,
        DialectArg::LeanSketch => Dialect::LeanSketch,
    };
    let rendered = output.script.render(dialect);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::SUCCESS
}
