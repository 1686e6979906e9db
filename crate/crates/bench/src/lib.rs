//! Benchmark fixtures shared by the criterion benches.

use aspt_core::families::gen_php;
use aspt_core::tableau::solve;
use aspt_core::{EngineConfig, ExtensionSet, Outcome, Program, TableauProof};

/// A pigeonhole program with the engine's refutation of it.
pub fn php_with_proof(n: usize) -> (Program, TableauProof) {
    let program = gen_php(n).expect("n >= 1");
    match solve(&program, &ExtensionSet::new(), &EngineConfig::full()).expect("engine runs").outcome {
        Outcome::Unsat { proof: Some(p) } => (program, p),
        other => panic!("php({n}) gave {other:?}"),
    }
}
