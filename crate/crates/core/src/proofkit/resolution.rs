//! Resolution and extended resolution proofs.

use std::collections::HashSet;

use super::Verdict;
use crate::cnf::{Clause, ClauseSet, Lit};

/// `var ≡ l1 ∧ l2`, introducing the clauses `{var, ¬l1, ¬l2}`,
/// `{¬var, l1}` and `{¬var, l2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionTriple {
    pub var: u32,
    pub l1: Lit,
    pub l2: Lit,
}

impl ExtensionTriple {
    pub fn new(var: u32, l1: Lit, l2: Lit) -> Self {
        ExtensionTriple { var, l1, l2 }
    }

    pub fn clauses(&self) -> [Clause; 3] {
        let x = Lit::pos(self.var);
        [
            Clause::new([x, !self.l1, !self.l2]),
            Clause::new([!x, self.l1]),
            Clause::new([!x, self.l2]),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// An input clause, or for extended resolution a clause of a triple.
    Initial,
    /// Indices of earlier steps; the pivot is inferred when absent.
    Resolved { left: usize, right: usize, pivot: Option<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub clause: Clause,
    pub provenance: Provenance,
}

impl Step {
    pub fn initial(clause: Clause) -> Self {
        Step { clause, provenance: Provenance::Initial }
    }

    pub fn resolved(clause: Clause, left: usize, right: usize, pivot: Option<u32>) -> Self {
        Step { clause, provenance: Provenance::Resolved { left, right, pivot } }
    }
}

/// A sequential proof; extension triples (if any) are listed up front.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionProof {
    pub triples: Vec<ExtensionTriple>,
    pub steps: Vec<Step>,
}

impl ResolutionProof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Steps plus extension triples.
    pub fn size(&self) -> usize {
        self.steps.len() + self.triples.len()
    }
}

/// Every resolved step is used as a parent at most once.
pub fn is_tree_like(proof: &ResolutionProof) -> bool {
    let mut used = vec![false; proof.steps.len()];
    for s in &proof.steps {
        if let Provenance::Resolved { left, right, .. } = s.provenance {
            for p in [left, right] {
                if p < used.len() && matches!(proof.steps[p].provenance, Provenance::Resolved { .. }) {
                    if used[p] {
                        return false;
                    }
                    used[p] = true;
                }
            }
        }
    }
    true
}

/// Checks a resolution refutation of `clauses`: every step is an input
/// clause or a resolvent of earlier steps, and the last step is empty.
pub fn check_res_proof(clauses: &ClauseSet, proof: &ResolutionProof) -> Verdict {
    if !proof.triples.is_empty() {
        return Verdict::invalid(None, "resolution proofs cannot contain extension triples");
    }
    check_steps(clauses, &HashSet::new(), proof)
}

/// As [`check_res_proof`], where initial clauses may also come from the
/// proof's extension triples, which are checked for freshness first.
pub fn check_eres_proof(clauses: &ClauseSet, proof: &ResolutionProof) -> Verdict {
    let mut known: HashSet<u32> = (1..=clauses.num_vars()).collect();
    let mut extra = HashSet::new();
    for (i, t) in proof.triples.iter().enumerate() {
        if t.var <= clauses.num_vars() || known.contains(&t.var) {
            return Verdict::invalid(None, format!("triple {}: variable {} is not fresh", i + 1, t.var));
        }
        for l in [t.l1, t.l2] {
            if !known.contains(&l.var()) {
                return Verdict::invalid(
                    None,
                    format!("triple {}: literal {} is over an undefined variable", i + 1, l.dimacs()),
                );
            }
        }
        known.insert(t.var);
        extra.extend(t.clauses());
    }
    check_steps(clauses, &extra, proof)
}

fn check_steps(clauses: &ClauseSet, extra: &HashSet<Clause>, proof: &ResolutionProof) -> Verdict {
    let input: HashSet<&Clause> = clauses.clauses().iter().collect();
    for (i, s) in proof.steps.iter().enumerate() {
        match s.provenance {
            Provenance::Initial => {
                if !input.contains(&s.clause) && !extra.contains(&s.clause) {
                    return Verdict::invalid(Some(i), "initial clause is not in the input");
                }
            }
            Provenance::Resolved { left, right, pivot } => {
                if left >= i || right >= i {
                    return Verdict::invalid(Some(i), "parents must precede the resolvent");
                }
                let (a, b) = (&proof.steps[left].clause, &proof.steps[right].clause);
                let clashing: Vec<u32> = a
                    .lits()
                    .iter()
                    .filter(|&&l| b.contains(!l))
                    .map(|l| l.var())
                    .collect();
                let v = match pivot {
                    Some(v) => {
                        if !clashing.contains(&v) {
                            return Verdict::invalid(Some(i), format!("pivot {v} does not clash between the parents"));
                        }
                        v
                    }
                    None => match clashing.first() {
                        Some(&v) => v,
                        None => return Verdict::invalid(Some(i), "parents have no clashing pivot"),
                    },
                };
                if clashing.len() > 1 {
                    return Verdict::invalid(Some(i), "both polarities of a non-pivot variable survive");
                }
                let expected = if a.contains(Lit::pos(v)) { a.resolve(b, v) } else { b.resolve(a, v) };
                if expected != s.clause {
                    return Verdict::invalid(Some(i), format!("clause is not the resolvent on {v}"));
                }
            }
        }
    }
    match proof.steps.last() {
        Some(s) if s.clause.is_empty() => Verdict::Valid,
        Some(_) => Verdict::invalid(Some(proof.steps.len() - 1), "last clause is not empty"),
        None => Verdict::invalid(None, "empty proof"),
    }
}
