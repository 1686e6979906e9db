//! Clauses, clause sets and truth assignments.

use std::collections::HashSet;
use std::fmt;

/// A propositional literal in DIMACS convention: `v` or `-v`, `v >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: u32, negative: bool) -> Self {
        assert!(var >= 1, "variables are numbered from 1");
        let v = var as i32;
        Lit(if negative { -v } else { v })
    }

    pub fn pos(var: u32) -> Self {
        Lit::new(var, false)
    }

    pub fn neg(var: u32) -> Self {
        Lit::new(var, true)
    }

    pub fn from_dimacs(v: i32) -> Option<Self> {
        (v != 0).then_some(Lit(v))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn dimacs(self) -> i32 {
        self.0
    }

    pub fn holds(self, value: bool) -> bool {
        value != self.is_negative()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by variable, positive before negative.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var(), self.is_negative()).cmp(&(other.var(), other.is_negative()))
    }
}

/// A clause as a canonically ordered set of literals. Tautologies are
/// representable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Self {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        Clause(v)
    }

    pub fn empty() -> Self {
        Clause(Vec::new())
    }

    pub fn from_dimacs(lits: &[i32]) -> Self {
        Clause::new(lits.iter().filter_map(|&l| Lit::from_dimacs(l)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    pub fn is_tautology(&self) -> bool {
        self.0.windows(2).any(|w| w[0].var() == w[1].var())
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.var()).max().unwrap_or(0)
    }

    /// Resolvent on `var`: `(self \ {x}) ∪ (other \ {x̄})` where `self`
    /// holds the positive and `other` the negative pivot literal.
    pub fn resolve(&self, other: &Clause, var: u32) -> Clause {
        let p = Lit::pos(var);
        let n = Lit::neg(var);
        Clause::new(
            self.0.iter().copied().filter(|&l| l != p).chain(other.0.iter().copied().filter(|&l| l != n)),
        )
    }

    /// True when every literal is false under the (partial) assignment.
    pub fn falsified_by(&self, value: impl Fn(u32) -> Option<bool>) -> bool {
        self.0.iter().all(|&l| value(l.var()).is_some_and(|v| !l.holds(v)))
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.0.iter().any(|&l| a.value(l.var()).map(|v| l.holds(v)).unwrap_or(false))
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// A CNF formula over variables `1..=num_vars`, with optional names.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClauseSet {
    num_vars: u32,
    clauses: Vec<Clause>,
    names: Vec<String>,
}

impl ClauseSet {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Self {
        let num_vars = clauses.iter().map(Clause::max_var).max().unwrap_or(0).max(num_vars);
        ClauseSet { num_vars, clauses, names: Vec::new() }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.num_vars as usize);
        self.names = names;
        self
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn var_name(&self, var: u32) -> String {
        match self.names.get(var as usize - 1) {
            Some(n) => n.clone(),
            None => var.to_string(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.clauses.contains(c)
    }

    /// The clause list with duplicates removed, first occurrence kept.
    pub fn deduplicated(&self) -> (Vec<Clause>, usize) {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in &self.clauses {
            if seen.insert(c.clone()) {
                out.push(c.clone());
            }
        }
        let dropped = self.clauses.len() - out.len();
        (out, dropped)
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(a))
    }

    /// All satisfying total assignments, by enumeration.
    pub fn enumerate_models(&self, var_limit: u32) -> Option<Vec<Assignment>> {
        if self.num_vars > var_limit {
            return None;
        }
        let n = self.num_vars;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let a = Assignment::from_fn(n, |v| mask >> (v - 1) & 1 == 1);
            if self.satisfied_by(&a) {
                out.push(a);
            }
        }
        Some(out)
    }
}

/// A partial map from variables to truth values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Assignment(Vec<Option<bool>>);

impl Assignment {
    pub fn new(num_vars: u32) -> Self {
        Assignment(vec![None; num_vars as usize])
    }

    pub fn from_fn(num_vars: u32, f: impl Fn(u32) -> bool) -> Self {
        Assignment((1..=num_vars).map(|v| Some(f(v))).collect())
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.0.get(var as usize - 1).copied().flatten()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        let i = var as usize - 1;
        if self.0.len() <= i {
            self.0.resize(i + 1, None);
        }
        self.0[i] = Some(value);
    }

    pub fn num_vars(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn true_vars(&self) -> Vec<u32> {
        (1..=self.num_vars()).filter(|&v| self.value(v) == Some(true)).collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<i32> = (1..=self.num_vars())
            .filter_map(|v| self.value(v).map(|b| if b { v as i32 } else { -(v as i32) }))
            .collect();
        write!(f, "{lits:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_canonical_order_and_resolution() {
        let c = Clause::from_dimacs(&[-2, 1, 1]);
        assert_eq!(c.lits(), &[Lit::pos(1), Lit::neg(2)]);
        let d = Clause::from_dimacs(&[-1, 3]);
        assert_eq!(c.resolve(&d, 1), Clause::from_dimacs(&[-2, 3]));
        assert!(Clause::from_dimacs(&[1, -1]).is_tautology());
    }

    #[test]
    fn falsified_needs_every_literal_false() {
        let c = Clause::from_dimacs(&[1, -2]);
        let val = |v: u32| match v {
            1 => Some(false),
            2 => Some(true),
            _ => None,
        };
        assert!(c.falsified_by(val));
        assert!(!c.falsified_by(|v| if v == 1 { Some(false) } else { None }));
    }

    #[test]
    fn enumerate_small() {
        let cs = ClauseSet::new(2, vec![Clause::from_dimacs(&[1, 2])]);
        assert_eq!(cs.enumerate_models(8).unwrap().len(), 3);
    }
}
