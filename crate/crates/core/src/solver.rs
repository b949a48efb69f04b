//! Running an SMT solver, or replaying a recorded run.
//!
//! Solver output is `sat`, `unsat` or `unknown`, then for `unsat` the unsat
//! core as a list of labels, then zero or more hint lines:
//!
//! ```text
//! (hint preprocess <formula>)
//! (hint theory-lemma <formula>)
//! (hint rewrite <lhs> <rhs>)
//! ```
//!
//! A transcript is the line `(transcript :digest <sha256 of script>)` followed
//! by the solver's raw stdout.

use std::cell::Cell;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::sexp::{read_all_located, Located, Sexp};
use crate::translate::{SmtScript, SmtSort, SortError};

pub const SOLVER_ENV: &str = "HINTSMT_SOLVER";
pub const DEFAULT_TIMEOUT_MS: u64 = 30_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverMode {
    Live,
    Replay(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub solver_path: PathBuf,
    /// Arguments passed instead of the defaults for the solver's name.
    pub extra_args: Vec<String>,
    pub timeout_ms: u64,
    pub mode: SolverMode,
}

impl SolverConfig {
    /// Live mode with the solver from `HINTSMT_SOLVER`, falling back to `z3`.
    pub fn live() -> SolverConfig {
        let path = std::env::var_os(SOLVER_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("z3"));
        SolverConfig { solver_path: path, extra_args: Vec::new(), timeout_ms: DEFAULT_TIMEOUT_MS, mode: SolverMode::Live }
    }

    pub fn with_solver(path: impl Into<PathBuf>) -> SolverConfig {
        SolverConfig { solver_path: path.into(), ..SolverConfig::live() }
    }

    pub fn replay(transcript: impl Into<PathBuf>) -> SolverConfig {
        SolverConfig { mode: SolverMode::Replay(transcript.into()), ..SolverConfig::live() }
    }

    fn args(&self) -> Vec<String> {
        if !self.extra_args.is_empty() {
            return self.extra_args.clone();
        }
        let name = self.solver_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if name.starts_with("cvc5") {
            vec!["--lang=smt2".into()]
        } else {
            vec!["-in".into()]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HintKind {
    Preprocess,
    TheoryLemma,
    Rewrite,
}

impl HintKind {
    pub fn wire_name(self) -> &'static str {
        match self {
            HintKind::Preprocess => "preprocess",
            HintKind::TheoryLemma => "theory-lemma",
            HintKind::Rewrite => "rewrite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HintPayload {
    Formula(Sexp),
    Rewrite(Sexp, Sexp),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hint {
    pub kind: HintKind,
    pub payload: HintPayload,
    pub ordinal: usize,
}

impl Hint {
    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom("hint"), Sexp::atom(self.kind.wire_name())];
        match &self.payload {
            HintPayload::Formula(f) => items.push(f.clone()),
            HintPayload::Rewrite(l, r) => items.extend([l.clone(), r.clone()]),
        }
        Sexp::List(items)
    }

    /// The hint as one SMT formula: rewrites become equations.
    pub fn formula(&self) -> Sexp {
        match &self.payload {
            HintPayload::Formula(f) => f.clone(),
            HintPayload::Rewrite(l, r) => Sexp::app("=", [l.clone(), r.clone()]),
        }
    }

    /// Does the hint mention a solver-internal Skolem symbol?
    pub fn mentions_solver_skolem(&self) -> bool {
        let mut found = false;
        self.formula().walk(&mut |s| {
            if s.as_atom().is_some_and(is_solver_skolem) {
                found = true;
            }
        });
        found
    }
}

pub fn is_solver_skolem(name: &str) -> bool {
    name.trim_matches('|').starts_with("@QUANTIFIERS_SKOLEMIZE")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Unsat,
    Sat,
    Unknown,
    Timeout,
    Crash(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOutcome {
    pub status: SolverStatus,
    /// Labels (`hN`) of the assertions in the unsat core.
    pub unsat_core: Vec<String>,
    pub hints: Vec<Hint>,
}

impl SolverOutcome {
    fn without_evidence(status: SolverStatus) -> SolverOutcome {
        SolverOutcome { status, unsat_core: Vec::new(), hints: Vec::new() }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver not found: {0}")]
    SolverNotFound(PathBuf),
    #[error("unparseable solver output at line {line}: {msg}")]
    ProtocolError { line: usize, msg: String },
    #[error("transcript digest {found} does not match script digest {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error("transcript error: {0}")]
    BadTranscript(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Hex SHA-256 of a script's text.
pub fn digest(script: &SmtScript) -> String {
    hex::encode(Sha256::digest(script.text().as_bytes()))
}

/// Run the configured solver on `script`, or replay a transcript.
pub fn run_solver(cfg: &SolverConfig, script: &SmtScript) -> Result<SolverOutcome, SolverError> {
    match &cfg.mode {
        SolverMode::Live => match run_live(cfg, &script.text())? {
            Raw::Output(out) => parse_output(&out, script),
            Raw::Timeout => Ok(SolverOutcome::without_evidence(SolverStatus::Timeout)),
            Raw::Crash(msg) => Ok(SolverOutcome::without_evidence(SolverStatus::Crash(msg))),
        },
        SolverMode::Replay(path) => {
            let text = std::fs::read_to_string(path)?;
            let (found, body) = split_transcript(&text)?;
            let expected = digest(script);
            if found != expected {
                return Err(SolverError::DigestMismatch { expected, found });
            }
            parse_output(body, script)
        }
    }
}

/// Run live and save a transcript that replays to the same outcome.
pub fn record_transcript(cfg: &SolverConfig, script: &SmtScript, path: &Path) -> Result<SolverOutcome, SolverError> {
    let live = SolverConfig { mode: SolverMode::Live, ..cfg.clone() };
    let out = match run_live(&live, &script.text())? {
        Raw::Output(out) => out,
        Raw::Timeout => return Ok(SolverOutcome::without_evidence(SolverStatus::Timeout)),
        Raw::Crash(msg) => return Ok(SolverOutcome::without_evidence(SolverStatus::Crash(msg))),
    };
    let outcome = parse_output(&out, script)?;
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "(transcript :digest {})", digest(script))?;
    f.write_all(out.as_bytes())?;
    Ok(outcome)
}

fn split_transcript(text: &str) -> Result<(String, &str), SolverError> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let bad = || SolverError::BadTranscript(format!("malformed header `{header}`"));
    let h = crate::sexp::read_one(header).map_err(|_| bad())?;
    match h.as_list() {
        Some([t, k, Sexp::Atom(d)]) if t.is_atom("transcript") && k.is_atom(":digest") => Ok((d.clone(), body)),
        _ => Err(bad()),
    }
}

enum Raw {
    Output(String),
    Timeout,
    Crash(String),
}

thread_local! {
    static INVOCATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of solver processes started on this thread.
pub fn solver_invocations() -> usize {
    INVOCATIONS.with(Cell::get)
}

/// Run raw SMT-LIB text and report the first verdict line.
pub fn check_sat(cfg: &SolverConfig, text: &str) -> Result<SolverStatus, SolverError> {
    match run_live(cfg, text)? {
        Raw::Timeout => Ok(SolverStatus::Timeout),
        Raw::Crash(msg) => Ok(SolverStatus::Crash(msg)),
        Raw::Output(out) => Ok(match out.lines().map(str::trim).find(|l| !l.is_empty()) {
            Some("unsat") => SolverStatus::Unsat,
            Some("sat") => SolverStatus::Sat,
            Some("unknown") => SolverStatus::Unknown,
            other => SolverStatus::Crash(other.unwrap_or("no output").to_string()),
        }),
    }
}

fn run_live(cfg: &SolverConfig, input: &str) -> Result<Raw, SolverError> {
    INVOCATIONS.with(|c| c.set(c.get() + 1));
    let mut child = Command::new(&cfg.solver_path)
        .args(cfg.args())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound | std::io::ErrorKind::PermissionDenied => {
                SolverError::SolverNotFound(cfg.solver_path.clone())
            }
            _ => SolverError::Io(e),
        })?;
    let mut stdin = child.stdin.take().unwrap();
    let input = input.to_string();
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(input.as_bytes());
    });
    let mut stdout = child.stdout.take().unwrap();
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let mut stderr = child.stderr.take().unwrap();
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });
    let deadline = Instant::now() + Duration::from_millis(cfg.timeout_ms.max(1));
    let status = loop {
        if let Some(st) = child.try_wait()? {
            break Some(st);
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        std::thread::sleep(Duration::from_millis(2));
    };
    let _ = writer.join();
    let out = reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    match status {
        None => Ok(Raw::Timeout),
        Some(st) => {
            let first = out.split_whitespace().next().unwrap_or("");
            if matches!(first, "sat" | "unsat" | "unknown") {
                Ok(Raw::Output(out))
            } else if first == "timeout" {
                Ok(Raw::Timeout)
            } else {
                let msg = if err.trim().is_empty() { out.trim().to_string() } else { err.trim().to_string() };
                Ok(Raw::Crash(format!("exit {st}: {msg}")))
            }
        }
    }
}

fn protocol(item: &Located, msg: impl Into<String>) -> SolverError {
    SolverError::ProtocolError { line: item.pos().line, msg: msg.into() }
}

/// Parse raw solver stdout against the script it answers.
pub fn parse_output(out: &str, script: &SmtScript) -> Result<SolverOutcome, SolverError> {
    let items = read_all_located(out).map_err(|e| SolverError::ProtocolError { line: e.pos.line, msg: e.msg })?;
    let Some(first) = items.first() else {
        return Err(SolverError::ProtocolError { line: 1, msg: "empty output".into() });
    };
    let status = match first.as_atom() {
        Some("unsat") => SolverStatus::Unsat,
        Some("sat") => SolverStatus::Sat,
        Some("unknown") => SolverStatus::Unknown,
        Some("timeout") => SolverStatus::Timeout,
        _ => return Err(protocol(first, "expected sat, unsat or unknown")),
    };
    if status != SolverStatus::Unsat {
        return Ok(SolverOutcome::without_evidence(status));
    }
    let core_item = items.get(1).ok_or_else(|| protocol(first, "missing unsat core"))?;
    let core = core_item
        .as_list()
        .filter(|l| l.first().and_then(Located::as_atom) != Some("error"))
        .ok_or_else(|| protocol(core_item, "expected the unsat core list"))?
        .iter()
        .map(|l| l.as_atom().map(|a| a.trim_matches('|').to_string()).ok_or_else(|| protocol(l, "core entries are labels")))
        .collect::<Result<Vec<_>, _>>()?;
    for label in &core {
        if script.hypothesis_for_label(label).is_none() {
            return Err(protocol(core_item, format!("unknown core label `{label}`")));
        }
    }
    let mut hints = Vec::new();
    for item in &items[2..] {
        let s = item.to_sexp();
        let parts = s.as_list().unwrap_or(&[]);
        if parts.first().map(|h| h.is_atom("hint")) != Some(true) || parts.len() < 3 {
            return Err(protocol(item, "expected a hint"));
        }
        let kind = match parts[1].as_atom() {
            Some("preprocess") => HintKind::Preprocess,
            Some("theory-lemma") => HintKind::TheoryLemma,
            Some("rewrite") => HintKind::Rewrite,
            _ => return Err(protocol(item, "unknown hint kind")),
        };
        let payload = match (kind, &parts[2..]) {
            (HintKind::Rewrite, [l, r]) => HintPayload::Rewrite(l.clone(), r.clone()),
            (HintKind::Rewrite, _) => return Err(protocol(item, "rewrite hints carry two terms")),
            (_, [f]) => HintPayload::Formula(f.clone()),
            _ => return Err(protocol(item, "hint carries one formula")),
        };
        let hint = Hint { kind, payload, ordinal: hints.len() };
        check_hint_sort(script, &hint).map_err(|e| protocol(item, e.to_string()))?;
        hints.push(hint);
    }
    Ok(SolverOutcome { status, unsat_core: core, hints })
}

/// Sort-check a hint. Hints with solver-internal Skolems cannot be checked
/// and are accepted here; interpretation drops them.
pub fn check_hint_sort(script: &SmtScript, hint: &Hint) -> Result<(), SortError> {
    if hint.mentions_solver_skolem() {
        return Ok(());
    }
    let sig = &script.signature;
    match &hint.payload {
        HintPayload::Formula(f) => {
            let s = sig.sort_of_term(&mut Vec::new(), f)?;
            if s != SmtSort::Bool {
                return Err(SortError::IllSorted { term: f.to_string(), msg: format!("hint has sort {s}, expected Bool") });
            }
        }
        HintPayload::Rewrite(l, r) => {
            // Undeclared atoms are the rewrite's pattern variables, read as Int.
            let mut env = Vec::new();
            for t in [l, r] {
                t.walk(&mut |x| {
                    if let Sexp::Atom(a) = x {
                        let known = sig.functions.contains_key(a.as_str())
                            || a == "true"
                            || a == "false"
                            || a.bytes().all(|b| b.is_ascii_digit())
                            || is_builtin(a);
                        if !known && !env.iter().any(|(n, _)| n == a) {
                            env.push((a.clone(), SmtSort::Int));
                        }
                    }
                });
            }
            let ls = sig.sort_of_term(&mut env.clone(), l)?;
            let rs = sig.sort_of_term(&mut env, r)?;
            if ls != rs {
                return Err(SortError::IllSorted { term: r.to_string(), msg: format!("rewrite sides have sorts {ls} and {rs}") });
            }
        }
    }
    Ok(())
}

fn is_builtin(a: &str) -> bool {
    matches!(
        a,
        "+" | "-" | "*" | "div" | "mod" | "abs" | "<=" | "<" | ">=" | ">" | "=" | "distinct" | "not" | "and" | "or"
            | "=>" | "xor" | "ite" | "let" | "forall" | "exists" | "_" | "is" | "as"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::preprocess::preprocess;
    use crate::translate::translate_goal;

    fn script(src: &str) -> SmtScript {
        translate_goal(&preprocess(&parse_problem(src).unwrap()).0).unwrap().0
    }

    #[test]
    fn parses_unsat_with_hints() {
        let s = script("(declare-fun f (Int) Int)(declare-const a Int)(goal (= (f a) (f a)))");
        let out = "unsat\n(h0)\n(hint theory-lemma (or (not (= a a)) (= (f a) (f a))))\n(hint rewrite (+ a 0) a)\n";
        let o = parse_output(out, &s).unwrap();
        assert_eq!(o.status, SolverStatus::Unsat);
        assert_eq!(o.unsat_core, vec!["h0".to_string()]);
        assert_eq!(o.hints.len(), 2);
        assert_eq!(o.hints[1].kind, HintKind::Rewrite);
        assert_eq!(o.hints[1].ordinal, 1);
    }

    #[test]
    fn sat_ignores_core_error() {
        let s = script("(declare-const n Nat)(goal (< n 0))");
        let o = parse_output("sat\n(error \"line 7: unsat core is not available\")\n", &s).unwrap();
        assert_eq!(o, SolverOutcome::without_evidence(SolverStatus::Sat));
    }

    #[test]
    fn protocol_errors_carry_lines() {
        let s = script("(declare-const a Int)(goal (= a a))");
        match parse_output("unsat\n(h0)\n(hint theory-lemma (+ a 1))\n", &s) {
            Err(SolverError::ProtocolError { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_output("hello\n", &s), Err(SolverError::ProtocolError { line: 1, .. })));
    }

    #[test]
    fn solver_skolems_pass_sort_checking() {
        let s = script("(declare-const a Int)(goal (= a a))");
        let o = parse_output("unsat\n(h0)\n(hint preprocess (= a @QUANTIFIERS_SKOLEMIZE_1))\n", &s).unwrap();
        assert!(o.hints[0].mentions_solver_skolem());
    }

    #[test]
    fn missing_solver() {
        let s = script("(goal true)");
        let cfg = SolverConfig::with_solver("/nonexistent/solver-binary");
        assert!(matches!(run_solver(&cfg, &s), Err(SolverError::SolverNotFound(_))));
    }

    #[test]
    fn transcript_round_trip_and_tamper() {
        let s = script("(goal true)");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.transcript");
        std::fs::write(&path, format!("(transcript :digest {})\nunsat\n(h0)\n", digest(&s))).unwrap();
        let a = run_solver(&SolverConfig::replay(&path), &s).unwrap();
        let b = run_solver(&SolverConfig::replay(&path), &s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.unsat_core, vec!["h0".to_string()]);
        std::fs::write(&path, "(transcript :digest 00)\nunsat\n(h0)\n").unwrap();
        assert!(matches!(run_solver(&SolverConfig::replay(&path), &s), Err(SolverError::DigestMismatch { .. })));
    }
}

#[cfg(test)]
mod live_tests {
    use super::*;
    use crate::logic::parse_problem;
    use crate::preprocess::preprocess;
    use crate::translate::translate_goal;

    fn z3() -> Option<SolverConfig> {
        let cfg = SolverConfig::live();
        Command::new(&cfg.solver_path).arg("-version").output().ok().map(|_| cfg)
    }

    #[test]
    fn live_unsat_and_sat() {
        let Some(cfg) = z3() else { return };
        let (s, _) = translate_goal(&preprocess(&parse_problem("(hyp h (not true))(goal false)").unwrap()).0).unwrap();
        let o = run_solver(&cfg, &s).unwrap();
        assert_eq!(o.status, SolverStatus::Unsat);
        assert_eq!(o.unsat_core, vec!["h0".to_string()]);
        let (s, _) = translate_goal(&preprocess(&parse_problem("(declare-const n Nat)(goal (< n 3))").unwrap()).0).unwrap();
        let o = run_solver(&cfg, &s).unwrap();
        assert_eq!(o.status, SolverStatus::Sat);
        assert!(o.unsat_core.is_empty());
    }
}
