//! Proof checkers and the transformations between tableau and resolution
//! proofs.

mod resolution;
mod simulate;
mod tableau_check;

use std::fmt;

pub use resolution::{check_eres_proof, check_res_proof, is_tree_like, ExtensionTriple, Provenance, ResolutionProof, Step};
pub use simulate::{aspt_to_tres, easpt_to_eres, eres_to_easpt, tres_to_aspt};
pub use tableau_check::check_tableau_proof;
pub(crate) use simulate::{chain_proof, close_triple_clause, falsify_clause, ChainPlan};

/// Checker outcome. `at` is the offending record or step, when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { at: Option<usize>, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub(crate) fn invalid(at: Option<usize>, reason: impl Into<String>) -> Self {
        Verdict::Invalid { at, reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("VALID"),
            Verdict::Invalid { at: Some(i), reason } => write!(f, "INVALID at {i}: {reason}"),
            Verdict::Invalid { at: None, reason } => write!(f, "INVALID: {reason}"),
        }
    }
}
