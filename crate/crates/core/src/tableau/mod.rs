//! ASP tableaux: entries, justifications, proofs and the extension rule.
//!
//! A [`TableauProof`] is stored as a flat list of [`ProofRecord`]s, each
//! pointing at its parent; record 0 is the root entry `F⊥`. A node has no
//! children (a leaf), one deduced child, or two `cut` children on the same
//! object with opposite signs.

mod builder;
mod engine;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

pub use builder::{Mark, ProofBuilder};
pub use engine::{
    cut, enumerate_models, propagate, solve, Branch, CutScope, EngineConfig, Heuristic, Outcome, Preset, RuleSet, Semantics, Solution,
    SolveStats,
};

use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Program, Rule, BOT_NAME};

/// The thing an entry assigns: an atom (possibly ⊥) or a body.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Atom(Atom),
    Body(Body),
}

impl Object {
    pub fn text(&self, program: &Program) -> String {
        match self {
            Object::Atom(a) if a.is_bot() => BOT_NAME.to_string(),
            Object::Atom(a) => program.name(*a).to_string(),
            Object::Body(b) => program.body_text(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    /// `true` for T, `false` for F.
    pub sign: bool,
    pub object: Object,
}

impl Entry {
    pub fn new(sign: bool, object: Object) -> Self {
        Entry { sign, object }
    }

    pub fn atom(sign: bool, a: Atom) -> Self {
        Entry::new(sign, Object::Atom(a))
    }

    pub fn body(sign: bool, b: Body) -> Self {
        Entry::new(sign, Object::Body(b))
    }

    /// `t l`: the entry making a default literal true.
    pub fn t(l: DefaultLiteral) -> Self {
        Entry::atom(!l.negative, l.atom)
    }

    /// `f l`: the entry making a default literal false.
    pub fn f(l: DefaultLiteral) -> Self {
        Entry::atom(l.negative, l.atom)
    }

    pub fn text(&self, program: &Program) -> String {
        format!("{}{}", if self.sign { 'T' } else { 'F' }, self.object.text(program))
    }
}

/// Justification tags: the cut rule and the deduction rules (b)–(i) with
/// their side conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Root,
    Cut,
    /// Forward True Body.
    B,
    /// Backward False Body.
    C,
    /// Forward True Atom.
    D,
    /// Backward False Atom.
    E,
    /// Forward False Body.
    F,
    /// Backward True Body.
    G,
    HSec,
    HDag,
    HDdag,
    ISec,
    IDag,
    IDdag,
}

impl RuleId {
    pub const ALL: [RuleId; 14] = [
        RuleId::Root,
        RuleId::Cut,
        RuleId::B,
        RuleId::C,
        RuleId::D,
        RuleId::E,
        RuleId::F,
        RuleId::G,
        RuleId::HSec,
        RuleId::HDag,
        RuleId::HDdag,
        RuleId::ISec,
        RuleId::IDag,
        RuleId::IDdag,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Root => "root",
            RuleId::Cut => "cut",
            RuleId::B => "b",
            RuleId::C => "c",
            RuleId::D => "d",
            RuleId::E => "e",
            RuleId::F => "f",
            RuleId::G => "g",
            RuleId::HSec => "h-sec",
            RuleId::HDag => "h-dag",
            RuleId::HDdag => "h-ddag",
            RuleId::ISec => "i-sec",
            RuleId::IDag => "i-dag",
            RuleId::IDdag => "i-ddag",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        RuleId::ALL.into_iter().find(|r| r.as_str() == s)
    }

    pub fn needs_witness(self) -> bool {
        matches!(self, RuleId::HDag | RuleId::HDdag | RuleId::IDag | RuleId::IDdag)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofRecord {
    pub parent: Option<usize>,
    pub entry: Entry,
    pub rule: RuleId,
    /// Ids of earlier records on the same branch.
    pub premises: Vec<usize>,
    /// Unfounded set for † rules, loop for ‡ rules, empty otherwise.
    pub witness: Vec<Atom>,
}

/// A tableau for Π ∪ E. Atoms in records refer to the symbol table of
/// `program.extended(&extension)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauProof {
    pub records: Vec<ProofRecord>,
    pub extension: ExtensionSet,
}

impl TableauProof {
    /// A proof holding only the root entry.
    pub fn root(extension: ExtensionSet) -> Self {
        TableauProof {
            records: vec![ProofRecord {
                parent: None,
                entry: Entry::atom(false, Atom::BOT),
                rule: RuleId::Root,
                premises: Vec::new(),
                witness: Vec::new(),
            }],
            extension,
        }
    }

    pub fn cut_count(&self) -> usize {
        self.records.iter().filter(|r| r.rule == RuleId::Cut).count()
    }
}

/// Number of entries plus the number of extension rules.
pub fn proof_length(proof: &TableauProof) -> usize {
    proof.records.len() + proof.extension.len()
}

/// One extending rule, by atom name so it can be carried between symbol tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtRule {
    pub head: String,
    /// `(atom, negative)` pairs.
    pub body: Vec<(String, bool)>,
}

impl ExtRule {
    pub fn new(head: impl Into<String>, body: &[&str]) -> Self {
        let body = body
            .iter()
            .map(|s| match s.strip_prefix("not ") {
                Some(a) => (a.trim().to_string(), true),
                None => (s.trim().to_string(), false),
            })
            .collect();
        ExtRule { head: head.into(), body }
    }

    pub fn text(&self) -> String {
        let lits: Vec<String> =
            self.body.iter().map(|(a, n)| if *n { format!("not {a}") } else { a.clone() }).collect();
        if lits.is_empty() {
            format!("{}.", self.head)
        } else {
            format!("{} :- {}.", self.head, lits.join(", "))
        }
    }
}

/// An ordered extension E. Each head is fresh when its (contiguous) group of
/// rules is introduced, and bodies only mention atoms known at that point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionSet {
    rules: Vec<ExtRule>,
}

impl ExtensionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rules(rules: Vec<ExtRule>) -> Self {
        ExtensionSet { rules }
    }

    pub fn rules(&self) -> &[ExtRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Elementary: one rule per head with one or two body literals.
    pub fn is_elementary(&self) -> bool {
        let mut heads = HashSet::new();
        self.rules.iter().all(|r| heads.insert(r.head.as_str()) && (1..=2).contains(&r.body.len()))
    }

    /// Π ∪ E, validating the extension chain.
    pub fn apply(&self, program: &Program) -> Result<Program> {
        if self.rules.is_empty() {
            return Ok(program.clone());
        }
        let mut sym = program.symbols().clone();
        let mut known: HashSet<Atom> = program.atoms().iter().copied().collect();
        let mut closed: HashSet<String> = HashSet::new();
        let mut current: Option<&str> = None;
        let mut rules: Vec<Rule> = program.rules().to_vec();
        for (i, r) in self.rules.iter().enumerate() {
            if current != Some(r.head.as_str()) {
                if let Some(prev) = current {
                    closed.insert(prev.to_string());
                }
                if closed.contains(&r.head) {
                    return Err(Error::Extension(format!(
                        "rule {} reopens head `{}` after other heads were introduced",
                        i + 1,
                        r.head
                    )));
                }
                if r.head == BOT_NAME || sym.get(&r.head).is_some_and(|a| known.contains(&a)) {
                    return Err(Error::Extension(format!("rule {}: head `{}` is not fresh", i + 1, r.head)));
                }
                current = Some(r.head.as_str());
            }
            let mut lits = Vec::with_capacity(r.body.len());
            for (name, neg) in &r.body {
                let a = sym.get(name).filter(|a| known.contains(a)).ok_or_else(|| {
                    Error::Extension(format!("rule {}: body atom `{name}` is not yet defined", i + 1))
                })?;
                lits.push(DefaultLiteral { atom: a, negative: *neg });
            }
            let head = sym.intern(&r.head);
            rules.push(Rule::new(head, Body::new(lits)));
            // The head becomes usable only after its whole group.
            if self.rules.get(i + 1).map(|n| n.head != r.head).unwrap_or(true) {
                known.insert(head);
            }
        }
        Program::new(Arc::new(sym), rules)
    }
}

/// Appends `new_rules` to `e` after checking the combined chain against `program`.
pub fn extend(program: &Program, e: &ExtensionSet, new_rules: Vec<ExtRule>) -> Result<ExtensionSet> {
    let mut rules = e.rules.clone();
    rules.extend(new_rules);
    let ext = ExtensionSet { rules };
    ext.apply(program)?;
    Ok(ext)
}
