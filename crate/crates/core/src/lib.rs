//! Proof laboratory for ground normal logic programs.
//!
//! The crate covers stable-model semantics and its brute-force oracles, the
//! translations between programs and clause sets, a tableau engine that
//! emits checkable proofs, resolution and tableau proof checkers with the
//! simulations between the two systems, and the pigeonhole benchmark
//! families with their simplification and redundancy tools.

pub mod bridge;
pub mod cnf;
pub mod error;
pub mod experiment;
pub mod families;
pub mod formats;
pub mod program;
pub mod proofkit;
pub mod semantics;
pub mod tableau;

#[cfg(test)]
mod testutil;

pub use cnf::{Assignment, Clause, ClauseSet, Lit};
pub use error::{Error, Result};
pub use program::{Atom, Body, DefaultLiteral, Interpretation, Program, ProgramBuilder, Rule, Symbols};
pub use tableau::{
    EngineConfig, Entry, ExtRule, ExtensionSet, Object, Outcome, ProofRecord, RuleId, Solution, TableauProof,
};
