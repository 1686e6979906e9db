//! Ground normal logic programs: atoms, default literals, bodies and rules.
//!
//! Atoms are interned in a [`Symbols`] table that is shared (copy-on-write)
//! between a program and everything derived from it, so interpretations and
//! atom sets computed for a program stay meaningful for its reduct, its
//! bottom/top split or its extension by fresh rules.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An interned atom. `Atom::BOT` is the falsity pseudo-atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub(crate) u32);

impl Atom {
    pub const BOT: Atom = Atom(0);

    pub fn is_bot(self) -> bool {
        self == Atom::BOT
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Name used for the falsity pseudo-atom in textual output.
pub const BOT_NAME: &str = "#bot";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl Symbols {
    pub fn new() -> Self {
        let mut s = Symbols { names: Vec::new(), index: HashMap::new() };
        s.names.push(BOT_NAME.to_string());
        s.index.insert(BOT_NAME.to_string(), Atom::BOT);
        s
    }

    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.index.get(name) {
            return a;
        }
        let a = Atom(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), a);
        a
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.names.get(atom.index()).map(String::as_str).unwrap_or("?")
    }

    /// Number of interned symbols, including the falsity pseudo-atom.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.len() <= 1
    }
}

/// `a` or `not a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefaultLiteral {
    pub atom: Atom,
    pub negative: bool,
}

impl DefaultLiteral {
    pub fn pos(atom: Atom) -> Self {
        DefaultLiteral { atom, negative: false }
    }

    pub fn neg(atom: Atom) -> Self {
        DefaultLiteral { atom, negative: true }
    }

    /// Truth value of the literal under a truth value of its atom.
    pub fn holds(self, atom_value: bool) -> bool {
        atom_value != self.negative
    }
}

/// A rule body: a canonically ordered set of default literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Body(Vec<DefaultLiteral>);

impl Body {
    pub fn new(lits: impl IntoIterator<Item = DefaultLiteral>) -> Self {
        let mut v: Vec<DefaultLiteral> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        Body(v)
    }

    pub fn empty() -> Self {
        Body(Vec::new())
    }

    pub fn literals(&self) -> &[DefaultLiteral] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// B⁺
    pub fn pos(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().filter(|l| !l.negative).map(|l| l.atom)
    }

    /// B⁻
    pub fn neg(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().filter(|l| l.negative).map(|l| l.atom)
    }

    pub fn contains(&self, lit: DefaultLiteral) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().map(|l| l.atom)
    }

    /// True when the body holds in the interpretation given by `truth`.
    pub fn satisfied_by(&self, truth: impl Fn(Atom) -> bool) -> bool {
        self.0.iter().all(|l| l.holds(truth(l.atom)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Body,
}

impl Rule {
    pub fn new(head: Atom, body: Body) -> Self {
        Rule { head, body }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_bot()
    }
}

/// Index of a distinct body inside [`Program::bodies`].
pub type BodyId = usize;

/// A ground normal logic program.
#[derive(Clone)]
pub struct Program {
    symbols: Arc<Symbols>,
    rules: Vec<Rule>,
    atoms: Vec<Atom>,
    bodies: Vec<Body>,
    body_ids: HashMap<Body, BodyId>,
    rule_body: Vec<BodyId>,
    rules_by_head: HashMap<Atom, Vec<usize>>,
}

impl Program {
    /// Builds a program over an existing symbol table.
    ///
    /// Fails when a body mentions the falsity pseudo-atom.
    pub fn new(symbols: Arc<Symbols>, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if r.body.atoms().any(Atom::is_bot) {
                return Err(Error::Input(format!("{BOT_NAME} may only occur as a rule head")));
            }
            for a in std::iter::once(r.head).chain(r.body.atoms()) {
                if a.index() >= symbols.len() {
                    return Err(Error::Input(format!("atom id {} not in symbol table", a.0)));
                }
            }
        }
        Ok(Self::build(symbols, rules))
    }

    fn build(symbols: Arc<Symbols>, rules: Vec<Rule>) -> Self {
        let mut seen = vec![false; symbols.len()];
        let mut bodies = Vec::new();
        let mut body_ids = HashMap::new();
        let mut rule_body = Vec::with_capacity(rules.len());
        let mut rules_by_head: HashMap<Atom, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            for a in std::iter::once(r.head).chain(r.body.atoms()) {
                seen[a.index()] = true;
            }
            let id = *body_ids.entry(r.body.clone()).or_insert_with(|| {
                bodies.push(r.body.clone());
                bodies.len() - 1
            });
            rule_body.push(id);
            rules_by_head.entry(r.head).or_default().push(i);
        }
        let atoms = (1..symbols.len())
            .filter(|&i| seen[i])
            .map(|i| Atom(i as u32))
            .collect();
        Program { symbols, rules, atoms, bodies, body_ids, rule_body, rules_by_head }
    }

    pub fn empty() -> Self {
        Self::build(Arc::new(Symbols::new()), Vec::new())
    }

    /// Same symbol table, different rules.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Self {
        Self::build(self.symbols.clone(), rules)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn shared_symbols(&self) -> Arc<Symbols> {
        self.symbols.clone()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// atom(Π): atoms occurring in some rule, in interning order, without ⊥.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// body(Π): distinct bodies in order of first occurrence.
    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn body_id(&self, body: &Body) -> Option<BodyId> {
        self.body_ids.get(body).copied()
    }

    pub fn rule_body_id(&self, rule: usize) -> BodyId {
        self.rule_body[rule]
    }

    /// Indices of rules with the given head.
    pub fn rules_for(&self, head: Atom) -> &[usize] {
        self.rules_by_head.get(&head).map(Vec::as_slice).unwrap_or(&[])
    }

    /// body(rule(h)) as distinct body ids.
    pub fn head_bodies(&self, head: Atom) -> Vec<BodyId> {
        let mut v: Vec<BodyId> = self.rules_for(head).iter().map(|&r| self.rule_body[r]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// head(Π) without ⊥.
    pub fn heads(&self) -> BTreeSet<Atom> {
        self.rules.iter().map(|r| r.head).filter(|h| !h.is_bot()).collect()
    }

    pub fn contains_atom(&self, a: Atom) -> bool {
        self.atoms.binary_search(&a).is_ok()
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.symbols.get(name)
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.symbols.name(atom)
    }

    /// dlit(Π) in canonical order: `a, not a` for each atom.
    pub fn dlit(&self) -> Vec<DefaultLiteral> {
        self.atoms
            .iter()
            .flat_map(|&a| [DefaultLiteral::pos(a), DefaultLiteral::neg(a)])
            .collect()
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| r.body.neg().next().is_none())
    }

    pub fn literal_text(&self, l: DefaultLiteral) -> String {
        if l.negative {
            format!("not {}", self.name(l.atom))
        } else {
            self.name(l.atom).to_string()
        }
    }

    /// `{b, not a}` style rendering in canonical literal order.
    pub fn body_text(&self, body: &Body) -> String {
        let parts: Vec<String> = body.literals().iter().map(|&l| self.literal_text(l)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn rule_text(&self, r: &Rule) -> String {
        let head = if r.head.is_bot() { String::new() } else { self.name(r.head).to_string() };
        if r.body.is_empty() {
            if head.is_empty() {
                ":- .".to_string()
            } else {
                format!("{head}.")
            }
        } else {
            let parts: Vec<String> = r.body.literals().iter().map(|&l| self.literal_text(l)).collect();
            if head.is_empty() {
                format!(":- {}.", parts.join(", "))
            } else {
                format!("{head} :- {}.", parts.join(", "))
            }
        }
    }

    /// A rule in symbol-independent form: head name and body literals sorted by name.
    pub fn named_rule(&self, r: &Rule) -> NamedRule {
        let mut body: Vec<(String, bool)> = r
            .body
            .literals()
            .iter()
            .map(|l| (self.name(l.atom).to_string(), l.negative))
            .collect();
        body.sort();
        NamedRule { head: self.name(r.head).to_string(), body }
    }

    /// The rules as a set of symbol-independent rules.
    pub fn rule_set(&self) -> BTreeSet<NamedRule> {
        self.rules.iter().map(|r| self.named_rule(r)).collect()
    }

    /// Interpretation from atom names; unknown names are an input error.
    pub fn interpretation<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Interpretation> {
        names
            .into_iter()
            .map(|n| self.atom(n).ok_or_else(|| Error::Input(format!("unknown atom `{n}`"))))
            .collect::<Result<BTreeSet<_>>>()
            .map(Interpretation)
    }

    /// Atom names of an interpretation, sorted.
    pub fn names_of(&self, m: &Interpretation) -> Vec<String> {
        let mut v: Vec<String> = m.iter().map(|a| self.name(a).to_string()).collect();
        v.sort();
        v
    }

    /// Π ∪ E: the rules of `ext` appended, with fresh heads interned in order.
    pub fn extended(&self, ext: &crate::tableau::ExtensionSet) -> Result<Program> {
        ext.apply(self)
    }

    /// Builder-style helper used by generators and tests.
    pub fn builder() -> ProgramBuilder {
        ProgramBuilder::default()
    }
}

/// Programs compare by their rule sequences with atoms taken by name.
impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules.len() == other.rules.len()
            && self
                .rules
                .iter()
                .zip(&other.rules)
                .all(|(a, b)| self.named_rule(a) == other.named_rule(b))
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in &self.rules {
            l.entry(&format_args!("{}", self.rule_text(r)));
        }
        l.finish()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}", self.rule_text(r))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedRule {
    pub head: String,
    pub body: Vec<(String, bool)>,
}

/// Accumulates rules by atom name.
#[derive(Default)]
pub struct ProgramBuilder {
    symbols: Symbols,
    rules: Vec<Rule>,
    started: bool,
}

impl ProgramBuilder {
    fn symbols(&mut self) -> &mut Symbols {
        if !self.started {
            self.symbols = Symbols::new();
            self.started = true;
        }
        &mut self.symbols
    }

    pub fn atom(&mut self, name: &str) -> Atom {
        self.symbols().intern(name)
    }

    /// Adds `head :- body`. `None` as head means ⊥. Body entries are
    /// `"a"` or `"not a"`.
    pub fn rule(&mut self, head: Option<&str>, body: &[&str]) -> &mut Self {
        let head = match head {
            Some(h) => self.atom(h),
            None => {
                self.symbols();
                Atom::BOT
            }
        };
        let lits: Vec<DefaultLiteral> = body
            .iter()
            .map(|s| match s.strip_prefix("not ") {
                Some(a) => DefaultLiteral::neg(self.atom(a.trim())),
                None => DefaultLiteral::pos(self.atom(s.trim())),
            })
            .collect();
        self.rules.push(Rule::new(head, Body::new(lits)));
        self
    }

    pub fn push(&mut self, rule: Rule) -> &mut Self {
        self.symbols();
        self.rules.push(rule);
        self
    }

    pub fn build(&mut self) -> Program {
        self.symbols();
        Program::build(Arc::new(std::mem::take(&mut self.symbols)), std::mem::take(&mut self.rules))
    }
}

/// A set of true atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(pub BTreeSet<Atom>);

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Interpretation(atoms.into_iter().collect())
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.contains(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}
