//! The end-to-end run: negate and Skolemize, translate, ask the solver,
//! interpret its hints, saturate, minimize, and emit a script.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::interp::{interpret_hints, Interpretation};
use crate::logic::{Goal, Term};
use crate::preprocess::{preprocess, SkolemizationRecord};
use crate::prover::{self, assign_sos, check_proof, CheckError, ClausifyError, InputRole, Limits, ProverInput, SaturationResult, SosMode, Verdict};
use crate::script::{emit_script, ProofScript, ScriptInputs};
use crate::solver::{run_solver, SolverConfig, SolverError, SolverOutcome, SolverStatus};
use crate::translate::{translate_goal, SmtScript, SymbolMap, TranslateError};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub solver: SolverConfig,
    pub mode: SosMode,
    pub limits: Limits,
}

impl PipelineConfig {
    pub fn new(solver: SolverConfig) -> Self {
        PipelineConfig { solver, mode: SosMode::Default, limits: Limits::default() }
    }

    pub fn with_mode(mut self, mode: SosMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("translation failed: {0}")]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("the solver found a model; the goal is likely false")]
    Sat,
    #[error("the solver gave no verdict: {0:?}")]
    Inconclusive(SolverStatus),
    #[error("reconstruction failed ({verdict}); solver core {core:?}, {hints} hint(s) interpreted")]
    Reconstruction { verdict: &'static str, core: Vec<String>, hints: usize },
    #[error("clausification failed: {0}")]
    Clausify(#[from] ClausifyError),
    #[error("the proof did not pass the checker: {0}")]
    Check(#[from] CheckError),
}

impl PipelineError {
    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Translate(_) => 4,
            PipelineError::Sat => 2,
            PipelineError::Reconstruction { .. } | PipelineError::Clausify(_) | PipelineError::Check(_) => 3,
            PipelineError::Solver(_) | PipelineError::Inconclusive(_) => 1,
        }
    }
}

/// Everything the run produced, for inspection and dumping.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub preprocessed: Goal,
    pub record: SkolemizationRecord,
    pub smt: SmtScript,
    pub symbols: SymbolMap,
    pub outcome: SolverOutcome,
    pub core: BTreeSet<String>,
    pub interpretation: Interpretation,
    /// The inputs of the final (minimized) saturation run.
    pub inputs: Vec<ProverInput>,
    pub result: SaturationResult,
    pub minimization_regressed: bool,
    pub script: ProofScript,
}

impl PipelineOutput {
    pub fn hints_generated(&self) -> usize {
        self.outcome.hints.len()
    }

    pub fn hints_retained(&self) -> usize {
        self.script.hint_haves.len()
    }
}

/// Preprocess, translate and query the solver.
pub fn solve(goal: &Goal, cfg: &PipelineConfig) -> Result<(Goal, SkolemizationRecord, SmtScript, SymbolMap, SolverOutcome), PipelineError> {
    let (pg, record) = preprocess(goal);
    let (smt, symbols) = translate_goal(&pg)?;
    let outcome = run_solver(&cfg.solver, &smt)?;
    match &outcome.status {
        SolverStatus::Unsat => Ok((pg, record, smt, symbols, outcome)),
        SolverStatus::Sat => Err(PipelineError::Sat),
        other => Err(PipelineError::Inconclusive(other.clone())),
    }
}

pub fn run_pipeline(goal: &Goal, cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let (pg, record, smt, symbols, outcome) = solve(goal, cfg)?;
    let core: BTreeSet<String> =
        outcome.unsat_core.iter().filter_map(|l| smt.hypothesis_for_label(l)).map(str::to_string).collect();
    let interpretation = interpret_hints(&symbols, &pg, &outcome.hints);
    let all = assign_sos(&pg, &record.negated_target_name, Some(&core), &interpretation, cfg.mode);
    let sig = &interpretation.signature;
    let first = prover::saturate(sig, &all, cfg.limits)?;
    if !first.is_proof() {
        let verdict = match first.verdict {
            Verdict::Saturated => "saturated",
            _ => "resource limit",
        };
        return Err(PipelineError::Reconstruction { verdict, core: core.into_iter().collect(), hints: interpretation.hints.len() });
    }
    let min = prover::minimize(sig, &all, first, cfg.limits)?;
    if let Some(p) = min.result.proof() {
        check_proof(p)?;
    }
    let mut warnings = Vec::new();
    for (h, e) in &interpretation.dropped {
        warnings.push(format!("hint {} dropped: {e}", h.ordinal));
    }
    for w in &record.warnings {
        warnings.push(format!("{} was not Skolemized: {:?}", w.hypothesis, w.error));
    }
    if min.regression {
        warnings.push("minimization regressed; the unpruned inputs are kept".into());
    }
    let used = &min.result.used_inputs;
    let hints: Vec<_> = interpretation.hints.iter().filter(|h| used.contains(&h.name)).collect();
    let needed: BTreeSet<&String> = hints.iter().flat_map(|h| h.needs_selectors.iter()).collect();
    let selectors: Vec<_> =
        interpretation.selectors.iter().filter(|s| used.contains(&s.fact_name) || needed.contains(&s.name)).collect();
    let hypotheses: Vec<String> = pg.hypotheses.iter().filter(|h| used.contains(&h.name)).map(|h| h.name.clone()).collect();
    let lemmas: Vec<String> =
        min.inputs.iter().filter(|i| i.role == InputRole::TheoryLemma && used.contains(&i.name)).map(|i| i.name.clone()).collect();
    let script = emit_script(
        sig,
        &ScriptInputs {
            record: Some(&record),
            negation_changed: goal.target != Term::False,
            selectors,
            hints,
            hypotheses,
            lemmas,
            warnings,
        },
    );
    Ok(PipelineOutput {
        preprocessed: pg,
        record,
        smt,
        symbols,
        outcome,
        core,
        interpretation,
        inputs: min.inputs,
        result: min.result,
        minimization_regressed: min.regression,
        script,
    })
}
