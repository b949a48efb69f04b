//! Preprocess a problem and print its SMT translation.
//!
//! `cargo run --example translate [FILE]` reads a problem file (by default a
//! small list goal), shows the Skolem symbols introduced for the negated
//! goal, the SMT-LIB script with its well-formedness assertions, and the
//! coverage check over that script.

use hintsmt::logic::{parse_problem, print_term};
use hintsmt::preprocess::preprocess;
use hintsmt::translate::{check_wf_coverage, translate_goal};

const SAMPLE: &str = "(declare-sort A)
(declare-datatype List ((nil) (cons A List)))
(declare-fun len (List) Nat)
(hyp len_cons (forall ((x A) (l List)) (= (len (cons x l)) (+ (len l) 1))))
(goal (forall ((x A)) (exists ((n Nat)) (= (len (cons x nil)) (+ n 1)))))";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    let goal = parse_problem(&text)?;
    let (pg, record) = preprocess(&goal);
    for step in &record.steps {
        let fresh: Vec<String> = step.fresh_symbols.iter().map(|(n, ty)| format!("{n} : {ty}")).collect();
        println!("; {} skolemized with [{}]", step.hypothesis, fresh.join(", "));
        println!(";   {}", print_term(&step.rewritten));
    }
    for w in &record.warnings {
        println!("; {} left as is: {:?}", w.hypothesis, w.error);
    }
    let (smt, _) = translate_goal(&pg)?;
    println!("{}", smt.text());
    let report = check_wf_coverage(&smt);
    if report.passed() {
        println!("; coverage: every symbol and binder is guarded");
    }
    for v in &report.violations {
        println!("; coverage violation in {:?}: {} ({})", v.assertion, v.term, v.reason);
    }
    Ok(())
}
