//! Translations between clause sets and normal logic programs.
//!
//! [`to_asp`] is the guess-and-check encoding whose stable models are in
//! one-to-one correspondence with satisfying assignments. [`to_cnf`] is the
//! clausal completion with one variable per atom and one per distinct body;
//! it is faithful for tight programs only.

use std::collections::HashMap;
use std::sync::Arc;

use log::warn;

use crate::cnf::{Assignment, Clause, ClauseSet, Lit};
use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Interpretation, Program, Rule, Symbols};
use crate::semantics;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameKind {
    /// `a_x`, the atom standing for variable `x` being true.
    Pos,
    /// `â_x`, its complement.
    Hat,
    /// The atom of the `var`-th clause.
    Clause,
    /// `x_a` for a program atom.
    Atom,
    /// `x_B` for a program body.
    Body,
}

impl NameKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NameKind::Pos => "pos",
            NameKind::Hat => "hat",
            NameKind::Clause => "clause",
            NameKind::Atom => "atom",
            NameKind::Body => "body",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pos" => NameKind::Pos,
            "hat" => NameKind::Hat,
            "clause" => NameKind::Clause,
            "atom" => NameKind::Atom,
            "body" => NameKind::Body,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameEntry {
    pub kind: NameKind,
    pub name: String,
    pub var: u32,
}

/// Bidirectional map between program objects and CNF variables (or clause
/// numbers, for [`NameKind::Clause`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameMap {
    entries: Vec<NameEntry>,
    by_name: HashMap<(NameKind, String), u32>,
    by_var: HashMap<(NameKind, u32), String>,
}

impl NameMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: NameKind, name: impl Into<String>, var: u32) -> Result<()> {
        let name = name.into();
        if self.by_name.contains_key(&(kind, name.clone())) || self.by_var.contains_key(&(kind, var)) {
            return Err(Error::Input(format!("duplicate name map entry {} {name} {var}", kind.as_str())));
        }
        self.by_name.insert((kind, name.clone()), var);
        self.by_var.insert((kind, var), name.clone());
        self.entries.push(NameEntry { kind, name, var });
        Ok(())
    }

    pub fn entries(&self) -> &[NameEntry] {
        &self.entries
    }

    pub fn var(&self, kind: NameKind, name: &str) -> Option<u32> {
        self.by_name.get(&(kind, name.to_string())).copied()
    }

    pub fn name(&self, kind: NameKind, var: u32) -> Option<&str> {
        self.by_var.get(&(kind, var)).map(String::as_str)
    }

    /// Variable of a program atom in a completion map.
    pub fn atom_var(&self, program: &Program, a: Atom) -> Option<u32> {
        self.var(NameKind::Atom, program.name(a))
    }

    /// Variable of a program body in a completion map.
    pub fn body_var(&self, program: &Program, b: &Body) -> Option<u32> {
        self.var(NameKind::Body, &program.body_text(b))
    }
}

/// Guess-and-check encoding of a clause set.
///
/// Duplicate clauses are merged (with a warning); clause atoms are numbered
/// over the deduplicated list.
pub fn to_asp(clauses: &ClauseSet) -> (Program, NameMap) {
    let (list, dropped) = clauses.deduplicated();
    if dropped > 0 {
        warn!("to_asp: merged {dropped} duplicate clause(s)");
    }
    let mut sym = Symbols::new();
    let mut names = NameMap::new();
    let mut rules = Vec::new();
    let mut pos = Vec::with_capacity(clauses.num_vars() as usize + 1);
    pos.push(Atom::BOT);
    for v in 1..=clauses.num_vars() {
        let n = clauses.var_name(v);
        let a = sym.intern(&format!("a_{n}"));
        let h = sym.intern(&format!("ah_{n}"));
        names.insert(NameKind::Pos, format!("a_{n}"), v).expect("fresh");
        names.insert(NameKind::Hat, format!("ah_{n}"), v).expect("fresh");
        rules.push(Rule::new(a, Body::new([DefaultLiteral::neg(h)])));
        rules.push(Rule::new(h, Body::new([DefaultLiteral::neg(a)])));
        pos.push(a);
    }
    let mut catoms = Vec::with_capacity(list.len());
    for k in 1..=list.len() {
        let c = sym.intern(&format!("c{k}"));
        names.insert(NameKind::Clause, format!("c{k}"), k as u32).expect("fresh");
        rules.push(Rule::new(Atom::BOT, Body::new([DefaultLiteral::neg(c)])));
        catoms.push(c);
    }
    for (c, clause) in catoms.iter().zip(&list) {
        for l in clause.lits() {
            let a = pos[l.var() as usize];
            let lit = if l.is_negative() { DefaultLiteral::neg(a) } else { DefaultLiteral::pos(a) };
            rules.push(Rule::new(*c, Body::new([lit])));
        }
    }
    let program = Program::new(Arc::new(sym), rules).expect("well-formed encoding");
    (program, names)
}

/// The default literal of the encoding standing for a CNF literal.
pub fn asp_literal(program: &Program, names: &NameMap, l: Lit) -> Option<DefaultLiteral> {
    let a = program.atom(names.name(NameKind::Pos, l.var())?)?;
    Some(if l.is_negative() { DefaultLiteral::neg(a) } else { DefaultLiteral::pos(a) })
}

/// Clausal completion.
pub fn to_cnf(program: &Program) -> (ClauseSet, NameMap) {
    let mut names = NameMap::new();
    let mut var_names = Vec::new();
    let mut atom_var = HashMap::new();
    for (i, &a) in program.atoms().iter().enumerate() {
        let v = i as u32 + 1;
        atom_var.insert(a, v);
        names.insert(NameKind::Atom, program.name(a), v).expect("atoms are distinct");
        var_names.push(format!("x@atom:{}", program.name(a)));
    }
    let base = program.atoms().len() as u32;
    for (i, b) in program.bodies().iter().enumerate() {
        let text = program.body_text(b);
        names.insert(NameKind::Body, text.clone(), base + i as u32 + 1).expect("bodies are distinct");
        var_names.push(format!("x@body:{text}"));
    }
    let body_var = |id: usize| base + id as u32 + 1;
    let lit_of = |l: &DefaultLiteral| Lit::new(atom_var[&l.atom], l.negative);

    let mut out: Vec<Clause> = Vec::new();
    for (id, b) in program.bodies().iter().enumerate() {
        let xb = body_var(id);
        out.push(Clause::new(std::iter::once(Lit::pos(xb)).chain(b.literals().iter().map(|l| !lit_of(l)))));
        for l in b.literals() {
            out.push(Clause::new([Lit::neg(xb), lit_of(l)]));
        }
    }
    for id in program.head_bodies(Atom::BOT) {
        out.push(Clause::new([Lit::neg(body_var(id))]));
    }
    for &h in program.atoms() {
        let bodies = program.head_bodies(h);
        if bodies.is_empty() {
            continue;
        }
        let xh = atom_var[&h];
        for &id in &bodies {
            out.push(Clause::new([Lit::pos(xh), Lit::neg(body_var(id))]));
        }
        out.push(Clause::new(std::iter::once(Lit::neg(xh)).chain(bodies.iter().map(|&id| Lit::pos(body_var(id))))));
    }
    let heads = program.heads();
    for &a in program.atoms() {
        if !heads.contains(&a) {
            out.push(Clause::new([Lit::neg(atom_var[&a])]));
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|c| seen.insert(c.clone()));
    let n = base + program.bodies().len() as u32;
    (ClauseSet::new(n, out).with_names(var_names), names)
}

/// Stable model of `to_asp(clauses)` → satisfying assignment.
pub fn asp_model_to_assignment(
    clauses: &ClauseSet,
    program: &Program,
    names: &NameMap,
    m: &Interpretation,
) -> Result<Assignment> {
    if !semantics::is_stable(program, m)? {
        return Err(Error::Input("interpretation is not a stable model of the encoding".into()));
    }
    let mut tau = Assignment::new(clauses.num_vars());
    for v in 1..=clauses.num_vars() {
        let a = names
            .name(NameKind::Pos, v)
            .and_then(|n| program.atom(n))
            .ok_or_else(|| Error::Input(format!("variable {v} missing from name map")))?;
        tau.set(v, m.contains(a));
    }
    Ok(tau)
}

/// Satisfying assignment → the corresponding stable model of `to_asp(clauses)`.
pub fn assignment_to_asp_model(
    clauses: &ClauseSet,
    program: &Program,
    names: &NameMap,
    tau: &Assignment,
) -> Result<Interpretation> {
    if !tau.is_total() || tau.num_vars() != clauses.num_vars() || !clauses.satisfied_by(tau) {
        return Err(Error::Input("assignment does not satisfy the clause set".into()));
    }
    let (list, _) = clauses.deduplicated();
    let lookup = |kind, v: u32| -> Result<Atom> {
        names
            .name(kind, v)
            .and_then(|n| program.atom(n))
            .ok_or_else(|| Error::Input(format!("{} {v} missing from name map", NameKind::as_str(kind))))
    };
    let mut m = Vec::new();
    for v in 1..=clauses.num_vars() {
        let kind = if tau.value(v) == Some(true) { NameKind::Pos } else { NameKind::Hat };
        m.push(lookup(kind, v)?);
    }
    for (k, c) in list.iter().enumerate() {
        if c.satisfied_by(tau) {
            m.push(lookup(NameKind::Clause, k as u32 + 1)?);
        }
    }
    Ok(Interpretation::new(m))
}

/// Satisfying assignment of `to_cnf(program)` → atoms whose variable is true.
/// For tight programs the result is a stable model.
pub fn assignment_to_model(
    clauses: &ClauseSet,
    program: &Program,
    names: &NameMap,
    tau: &Assignment,
) -> Result<Interpretation> {
    if !tau.is_total() || !clauses.satisfied_by(tau) {
        return Err(Error::Input("assignment does not satisfy the completion".into()));
    }
    let mut m = Vec::new();
    for &a in program.atoms() {
        let v = names
            .atom_var(program, a)
            .ok_or_else(|| Error::Input(format!("atom `{}` missing from name map", program.name(a))))?;
        if tau.value(v) == Some(true) {
            m.push(a);
        }
    }
    Ok(Interpretation::new(m))
}

/// Stable model of a tight program → the satisfying assignment of its completion.
pub fn model_to_assignment(
    clauses: &ClauseSet,
    program: &Program,
    names: &NameMap,
    m: &Interpretation,
) -> Result<Assignment> {
    if !semantics::is_stable(program, m)? {
        return Err(Error::Input("interpretation is not a stable model".into()));
    }
    let mut tau = Assignment::new(clauses.num_vars());
    for &a in program.atoms() {
        let v = names.atom_var(program, a).ok_or_else(|| Error::Internal("atom without variable".into()))?;
        tau.set(v, m.contains(a));
    }
    for b in program.bodies() {
        let v = names.body_var(program, b).ok_or_else(|| Error::Internal("body without variable".into()))?;
        tau.set(v, b.satisfied_by(|a| m.contains(a)));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::ProgramBuilder;

    fn c0() -> ClauseSet {
        ClauseSet::new(
            2,
            vec![
                Clause::from_dimacs(&[1, 2]),
                Clause::from_dimacs(&[1, -2]),
                Clause::from_dimacs(&[-1, 2]),
                Clause::from_dimacs(&[-1, -2]),
            ],
        )
        .with_names(vec!["x".into(), "y".into()])
    }

    #[test]
    fn nlp_of_four_clauses_matches_the_sixteen_rule_program() {
        let (p, _) = to_asp(&c0());
        let expected = "a_x :- not ah_x.\nah_x :- not a_x.\na_y :- not ah_y.\nah_y :- not a_y.\n\
                        :- not c1.\n:- not c2.\n:- not c3.\n:- not c4.\n\
                        c1 :- a_x.\nc1 :- a_y.\nc2 :- a_x.\nc2 :- not a_y.\n\
                        c3 :- not a_x.\nc3 :- a_y.\nc4 :- not a_x.\nc4 :- not a_y.\n";
        assert_eq!(p.to_string(), expected);
        assert_eq!(p.rules().len(), 16);
    }

    #[test]
    fn unit_clause_has_one_model() {
        let cs = ClauseSet::new(1, vec![Clause::from_dimacs(&[1])]);
        let (p, names) = to_asp(&cs);
        assert_eq!(p.to_string(), "a_1 :- not ah_1.\nah_1 :- not a_1.\n:- not c1.\nc1 :- a_1.\n");
        let models = semantics::enumerate_stable(&p, 20).unwrap();
        assert_eq!(models.len(), 1);
        let m = models.into_iter().next().unwrap();
        assert_eq!(p.names_of(&m), ["a_1", "c1"]);
        let tau = asp_model_to_assignment(&cs, &p, &names, &m).unwrap();
        assert_eq!(tau.value(1), Some(true));
    }

    #[test]
    fn no_clauses_gives_guess_rules_only() {
        let cs = ClauseSet::new(1, vec![]);
        let (p, _) = to_asp(&cs);
        assert_eq!(p.rules().len(), 2);
        assert_eq!(semantics::enumerate_stable(&p, 20).unwrap().len(), 2);
    }

    #[test]
    fn empty_clause_makes_encoding_unsat() {
        let cs = ClauseSet::new(1, vec![Clause::empty()]);
        let (p, _) = to_asp(&cs);
        assert!(semantics::enumerate_stable(&p, 20).unwrap().is_empty());
    }

    #[test]
    fn duplicate_clauses_are_merged() {
        let cs = ClauseSet::new(1, vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[1])]);
        let (p, _) = to_asp(&cs);
        assert_eq!(p.rules().len(), 4);
    }

    fn pi0() -> Program {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["b", "not a"]).rule(Some("b"), &["c"]).rule(Some("c"), &["not b"]);
        b.build()
    }

    #[test]
    fn completion_of_pi0_has_thirteen_clauses() {
        let p = pi0();
        let (cs, names) = to_cnf(&p);
        assert_eq!(cs.len(), 13);
        let xa = names.var(NameKind::Atom, "a").unwrap() as i32;
        let xb = names.var(NameKind::Atom, "b").unwrap() as i32;
        let xc = names.var(NameKind::Atom, "c").unwrap() as i32;
        let b1 = names.var(NameKind::Body, "{not a, b}").unwrap() as i32;
        let b2 = names.var(NameKind::Body, "{c}").unwrap() as i32;
        let b3 = names.var(NameKind::Body, "{not b}").unwrap() as i32;
        let expected = [
            vec![b1, xa, -xb],
            vec![-b1, -xa],
            vec![-b1, xb],
            vec![b2, -xc],
            vec![-b2, xc],
            vec![b3, xb],
            vec![-b3, -xb],
            vec![xa, -b1],
            vec![-xa, b1],
            vec![xb, -b2],
            vec![-xb, b2],
            vec![xc, -b3],
            vec![-xc, b3],
        ];
        let mut want: Vec<Clause> = expected.iter().map(|c| Clause::from_dimacs(c)).collect();
        let mut got = cs.clauses().to_vec();
        want.sort();
        got.sort();
        assert_eq!(got, want);
        assert!(cs.enumerate_models(16).unwrap().is_empty());
    }

    #[test]
    fn completion_of_a_fact_forces_its_atom() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &[]);
        let p = b.build();
        let (cs, names) = to_cnf(&p);
        let models = cs.enumerate_models(8).unwrap();
        assert_eq!(models.len(), 1);
        let xa = names.var(NameKind::Atom, "a").unwrap();
        let xe = names.var(NameKind::Body, "{}").unwrap();
        assert_eq!(models[0].value(xa), Some(true));
        assert_eq!(models[0].value(xe), Some(true));
        let m = assignment_to_model(&cs, &p, &names, &models[0]).unwrap();
        assert_eq!(p.names_of(&m), ["a"]);
    }

    #[test]
    fn headless_atom_gets_negative_unit() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("b"), &["not c"]);
        let p = b.build();
        let (cs, names) = to_cnf(&p);
        let xc = names.var(NameKind::Atom, "c").unwrap();
        assert!(cs.contains(&Clause::new([Lit::neg(xc)])));
    }

    #[test]
    fn completion_is_unfaithful_for_self_loop() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["a"]);
        let p = b.build();
        let (cs, names) = to_cnf(&p);
        let models = cs.enumerate_models(8).unwrap();
        let xa = names.var(NameKind::Atom, "a").unwrap();
        assert!(models.iter().any(|t| t.value(xa) == Some(true)));
        assert!(semantics::enumerate_stable(&p, 8).unwrap().iter().all(|m| m.is_empty()));
    }

    #[test]
    fn mapping_rejects_non_models() {
        let cs = ClauseSet::new(1, vec![Clause::from_dimacs(&[1])]);
        let (p, names) = to_asp(&cs);
        let bad = p.interpretation(["ah_1"]).unwrap();
        assert!(asp_model_to_assignment(&cs, &p, &names, &bad).is_err());
        let falsy = Assignment::from_fn(1, |_| false);
        assert!(assignment_to_asp_model(&cs, &p, &names, &falsy).is_err());
    }
}
