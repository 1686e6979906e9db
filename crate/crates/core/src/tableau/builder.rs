//! Hand construction of tableau proofs, used by the proof transformations
//! and by tests that rebuild proofs from the literature.

use std::collections::HashMap;

use super::{Entry, ExtensionSet, Object, ProofRecord, RuleId, TableauProof};
use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Program};

/// Position to return to with [`ProofBuilder::reset`].
#[derive(Clone, Copy, Debug)]
pub struct Mark {
    trail: usize,
    tip: usize,
    closed: bool,
}

/// Builds a proof branch by branch. Premises are given as entries and
/// resolved to the records on the current branch.
pub struct ProofBuilder {
    program: Program,
    proof: TableauProof,
    assigned: HashMap<Object, (bool, usize)>,
    trail: Vec<Object>,
    tip: usize,
    closed: bool,
}

impl ProofBuilder {
    pub fn new(program: &Program, extension: ExtensionSet) -> Result<Self> {
        let full = program.extended(&extension)?;
        let proof = TableauProof::root(extension);
        let mut assigned = HashMap::new();
        assigned.insert(Object::Atom(Atom::BOT), (false, 0));
        Ok(ProofBuilder { program: full, proof, assigned, trail: Vec::new(), tip: 0, closed: false })
    }

    /// Π ∪ E.
    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.program.atom(name).ok_or_else(|| Error::Input(format!("unknown atom `{name}`")))
    }

    pub fn lit(&self, text: &str) -> Result<DefaultLiteral> {
        Ok(match text.strip_prefix("not ") {
            Some(a) => DefaultLiteral::neg(self.atom(a.trim())?),
            None => DefaultLiteral::pos(self.atom(text.trim())?),
        })
    }

    /// A body from literal texts such as `["b", "not a"]`.
    pub fn body(&self, lits: &[&str]) -> Result<Body> {
        Ok(Body::new(lits.iter().map(|l| self.lit(l)).collect::<Result<Vec<_>>>()?))
    }

    pub fn value(&self, object: &Object) -> Option<bool> {
        self.assigned.get(object).map(|&(s, _)| s)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn tip(&self) -> usize {
        self.tip
    }

    pub fn mark(&self) -> Mark {
        Mark { trail: self.trail.len(), tip: self.tip, closed: self.closed }
    }

    /// Returns to a marked node; records added since stay in the proof.
    pub fn reset(&mut self, m: Mark) {
        while self.trail.len() > m.trail {
            let o = self.trail.pop().unwrap();
            self.assigned.remove(&o);
        }
        self.tip = m.tip;
        self.closed = m.closed;
    }

    fn push(&mut self, entry: Entry, rule: RuleId, premises: Vec<usize>, witness: Vec<Atom>) -> usize {
        let id = self.proof.records.len();
        self.proof.records.push(ProofRecord { parent: Some(self.tip), entry: entry.clone(), rule, premises, witness });
        self.tip = id;
        match self.assigned.get(&entry.object) {
            Some(_) => self.closed = true,
            None => {
                self.assigned.insert(entry.object.clone(), (entry.sign, id));
                self.trail.push(entry.object);
            }
        }
        id
    }

    /// Adds a deduced entry. Already present entries are not repeated; an
    /// entry contradicting the branch closes it.
    pub fn deduce(&mut self, entry: Entry, rule: RuleId, premises: &[Entry], witness: &[Atom]) -> Result<usize> {
        if self.closed {
            return Err(Error::Precondition("branch is already contradictory".into()));
        }
        if let Some(&(s, id)) = self.assigned.get(&entry.object) {
            if s == entry.sign {
                return Ok(id);
            }
        }
        let mut ids = Vec::with_capacity(premises.len());
        for p in premises {
            match self.assigned.get(&p.object) {
                Some(&(s, id)) if s == p.sign => ids.push(id),
                _ => {
                    return Err(Error::Precondition(format!(
                        "premise {} is not on the branch",
                        p.text(&self.program)
                    )))
                }
            }
        }
        Ok(self.push(entry, rule, ids, witness.to_vec()))
    }

    /// Adds one side of a cut.
    pub fn cut(&mut self, sign: bool, object: Object) -> Result<usize> {
        if self.closed {
            return Err(Error::Precondition("branch is already contradictory".into()));
        }
        if self.assigned.contains_key(&object) {
            return Err(Error::Cut(format!("{} is already assigned", object.text(&self.program))));
        }
        Ok(self.push(Entry::new(sign, object), RuleId::Cut, Vec::new(), Vec::new()))
    }

    pub fn finish(self) -> TableauProof {
        self.proof
    }
}
