//! Run the superposition prover directly on a refutation problem.
//!
//! `cargo run --example saturate [FILE]` negates and Skolemizes the goal,
//! puts every hypothesis in the set of support, saturates, and prints the
//! checked proof or the verdict.

use hintsmt::logic::parse_problem;
use hintsmt::preprocess::preprocess;
use hintsmt::prover::{check_proof, saturate, InputRole, Limits, ProverInput, Verdict};

const SAMPLE: &str = "(declare-sort U)
(declare-fun P (U) Prop)
(declare-fun f (U) U)
(hyp step (forall ((x U)) (=> (P x) (P (f x)))))
(hyp base (exists ((x U)) (P x)))
(goal (exists ((y U)) (P (f (f y)))))";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    let (pg, record) = preprocess(&parse_problem(&text)?);
    let inputs: Vec<ProverInput> = pg
        .hypotheses
        .iter()
        .map(|h| ProverInput {
            name: h.name.clone(),
            role: if h.name == record.negated_target_name { InputRole::NegatedGoal } else { InputRole::Hypothesis },
            statement: h.prop.clone(),
            in_sos: true,
        })
        .collect();
    let r = saturate(&pg.signature, &inputs, Limits::default())?;
    println!("{} clauses in {:?}", r.clauses_created, r.elapsed);
    match &r.verdict {
        Verdict::ProofFound(p) => {
            check_proof(p)?;
            println!("proof (checked), using {:?}\n{}", r.used_inputs, p.dump());
        }
        other => println!("no proof: {other:?}"),
    }
    Ok(())
}
