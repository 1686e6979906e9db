//! Stable-model semantics and the structural notions built on the positive
//! dependency graph: loops, tightness, external bodies, unfounded sets and
//! splitting sets.

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::program::{Atom, Body, Interpretation, Program, Rule};

pub const DEFAULT_ENUM_LIMIT: usize = 20;
pub const DEFAULT_LOOP_LIMIT: usize = 15;

fn check_subset(program: &Program, m: &Interpretation) -> Result<()> {
    match m.iter().find(|&a| a.is_bot() || !program.contains_atom(a)) {
        Some(a) => Err(Error::Input(format!(
            "atom `{}` is not an atom of the program",
            program.symbols().name(a)
        ))),
        None => Ok(()),
    }
}

/// Classical model check; a ⊥ head is never satisfied.
pub fn classical_model_check(program: &Program, m: &Interpretation) -> Result<bool> {
    check_subset(program, m)?;
    Ok(is_model(program, m))
}

fn is_model(program: &Program, m: &Interpretation) -> bool {
    program.rules().iter().all(|r| {
        !r.body.satisfied_by(|a| m.contains(a)) || (!r.head.is_bot() && m.contains(r.head))
    })
}

/// Gelfond-Lifschitz reduct Π^M.
pub fn gl_reduct(program: &Program, m: &Interpretation) -> Result<Program> {
    check_subset(program, m)?;
    Ok(reduct(program, m))
}

fn reduct(program: &Program, m: &Interpretation) -> Program {
    let rules = program
        .rules()
        .iter()
        .filter(|r| r.body.neg().all(|a| !m.contains(a)))
        .map(|r| Rule::new(r.head, Body::new(r.body.literals().iter().copied().filter(|l| !l.negative))))
        .collect();
    program.with_rules(rules)
}

/// Least model of the non-⊥ rules of a program, reading negative literals
/// as absent (callers pass negation-free programs).
pub fn least_model(program: &Program) -> Interpretation {
    let n = program.symbols().len();
    let mut truth = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for r in program.rules() {
            if r.head.is_bot() || truth[r.head.index()] {
                continue;
            }
            if r.body.pos().all(|a| truth[a.index()]) {
                truth[r.head.index()] = true;
                changed = true;
            }
        }
    }
    (1..n).filter(|&i| truth[i]).map(|i| Atom(i as u32)).collect()
}

/// `m` is stable iff it is a model and the least model of the reduct.
/// ⊥-headed rules only act as constraints.
pub fn is_stable(program: &Program, m: &Interpretation) -> Result<bool> {
    check_subset(program, m)?;
    Ok(stable_unchecked(program, m))
}

fn stable_unchecked(program: &Program, m: &Interpretation) -> bool {
    is_model(program, m) && least_model(&reduct(program, m)) == *m
}

/// All stable models by exhaustive search.
pub fn enumerate_stable(program: &Program, atom_limit: usize) -> Result<BTreeSet<Interpretation>> {
    let atoms = program.atoms();
    if atoms.len() > atom_limit {
        return Err(Error::LimitExceeded { what: "program", count: atoms.len(), limit: atom_limit });
    }
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << atoms.len()) {
        let m: Interpretation =
            atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        if stable_unchecked(program, &m) {
            out.insert(m);
        }
    }
    Ok(out)
}

/// Cyclic SCCs of the positive dependency graph restricted to the rules
/// accepted by `keep`.
fn dependency_sccs(program: &Program, keep: impl Fn(usize) -> bool) -> Vec<Vec<Atom>> {
    let atoms = program.atoms();
    let mut node = vec![NodeIndex::end(); program.symbols().len()];
    let mut g: DiGraph<Atom, ()> = DiGraph::with_capacity(atoms.len(), 0);
    for &a in atoms {
        node[a.index()] = g.add_node(a);
    }
    let mut self_loop = vec![false; program.symbols().len()];
    for (i, r) in program.rules().iter().enumerate() {
        if r.head.is_bot() || !keep(i) {
            continue;
        }
        for b in r.body.pos() {
            if b == r.head {
                self_loop[b.index()] = true;
            }
            g.add_edge(node[r.head.index()], node[b.index()], ());
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<Atom> = c.into_iter().map(|n| g[n]).collect();
            v.sort();
            v
        })
        .filter(|c| c.len() > 1 || self_loop[c[0].index()])
        .collect()
}

/// Non-trivial strongly connected components of the positive dependency
/// graph (those containing at least one loop).
pub fn cyclic_components(program: &Program) -> Vec<Vec<Atom>> {
    dependency_sccs(program, |_| true)
}

/// Same as [`cyclic_components`], over the rules selected by `keep`.
pub fn cyclic_components_of(program: &Program, keep: impl Fn(usize) -> bool) -> Vec<Vec<Atom>> {
    dependency_sccs(program, keep)
}

pub fn is_tight(program: &Program) -> bool {
    cyclic_components(program).is_empty()
}

/// True iff `set` is a loop: non-empty and every ordered pair is joined by
/// a non-empty path inside `set`.
pub fn is_loop(program: &Program, set: &BTreeSet<Atom>) -> bool {
    if set.is_empty() {
        return false;
    }
    let idx: Vec<Atom> = set.iter().copied().collect();
    let pos = |a: Atom| idx.binary_search(&a).ok();
    let n = idx.len();
    let mut adj = vec![vec![false; n]; n];
    for r in program.rules() {
        if let Some(h) = pos(r.head) {
            for b in r.body.pos() {
                if let Some(j) = pos(b) {
                    adj[h][j] = true;
                }
            }
        }
    }
    // reach[i][j]: path of length >= 1 from i to j
    let mut reach = adj.clone();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).all(|i| (0..n).all(|j| reach[i][j]))
}

/// loop(Π), by enumerating subsets of each cyclic component.
pub fn loops(program: &Program, atom_limit: usize) -> Result<BTreeSet<BTreeSet<Atom>>> {
    if program.atoms().len() > atom_limit {
        return Err(Error::LimitExceeded { what: "loop enumeration", count: program.atoms().len(), limit: atom_limit });
    }
    let mut out = BTreeSet::new();
    for comp in cyclic_components(program) {
        for mask in 1u64..(1u64 << comp.len()) {
            let set: BTreeSet<Atom> =
                comp.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
            if is_loop(program, &set) {
                out.insert(set);
            }
        }
    }
    Ok(out)
}

/// eb(A) = { body(r) | head(r) ∈ A, body(r)⁺ ∩ A = ∅ }.
pub fn external_bodies(program: &Program, set: &BTreeSet<Atom>) -> BTreeSet<Body> {
    program
        .rules()
        .iter()
        .filter(|r| set.contains(&r.head) && r.body.pos().all(|a| !set.contains(&a)))
        .map(|r| r.body.clone())
        .collect()
}

/// Atoms that can be derived bottom-up from rules accepted by `keep`,
/// ignoring negative literals. Their complement is the greatest unfounded
/// set of the selected rules.
pub(crate) fn supported_closure(program: &Program, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut founded = vec![false; program.symbols().len()];
    let mut changed = true;
    while changed {
        changed = false;
        for (i, r) in program.rules().iter().enumerate() {
            if r.head.is_bot() || founded[r.head.index()] || !keep(i) {
                continue;
            }
            if r.body.pos().all(|a| founded[a.index()]) {
                founded[r.head.index()] = true;
                changed = true;
            }
        }
    }
    founded
}

/// gus(Π): the union of all unfounded sets.
pub fn greatest_unfounded(program: &Program) -> BTreeSet<Atom> {
    let founded = supported_closure(program, |_| true);
    program.atoms().iter().copied().filter(|a| !founded[a.index()]).collect()
}

pub fn is_splitting_set(program: &Program, u: &BTreeSet<Atom>) -> Option<usize> {
    program
        .rules()
        .iter()
        .position(|r| u.contains(&r.head) && r.body.atoms().any(|a| !u.contains(&a)))
}

/// Bottom and top of a program relative to a splitting set.
pub fn split(program: &Program, u: &BTreeSet<Atom>) -> Result<(Program, Program)> {
    if let Some(i) = is_splitting_set(program, u) {
        let names: Vec<&str> = u.iter().map(|&a| program.name(a)).collect();
        return Err(Error::NotSplitting(
            format!("{{{}}}", names.join(", ")),
            program.rule_text(&program.rules()[i]),
        ));
    }
    let (bottom, top): (Vec<Rule>, Vec<Rule>) = program
        .rules()
        .iter()
        .cloned()
        .partition(|r| (r.head.is_bot() || u.contains(&r.head)) && r.body.atoms().all(|a| u.contains(&a)));
    Ok((program.with_rules(bottom), program.with_rules(top)))
}

/// Partial evaluation of a top program w.r.t. `x ⊆ u`.
pub fn partial_eval(top: &Program, u: &BTreeSet<Atom>, x: &Interpretation) -> Program {
    let rules = top
        .rules()
        .iter()
        .filter(|r| {
            r.body.pos().filter(|a| u.contains(a)).all(|a| x.contains(a))
                && r.body.neg().filter(|a| u.contains(a)).all(|a| !x.contains(a))
        })
        .map(|r| Rule::new(r.head, Body::new(r.body.literals().iter().copied().filter(|l| !u.contains(&l.atom)))))
        .collect();
    top.with_rules(rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::ProgramBuilder;

    fn pi0() -> Program {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["b", "not a"]).rule(Some("b"), &["c"]).rule(Some("c"), &["not b"]);
        b.build()
    }

    fn pi1() -> Program {
        let mut b = ProgramBuilder::default();
        b.rule(None, &["not a"]).rule(Some("a"), &["b"]).rule(Some("b"), &["a"]);
        b.build()
    }

    fn choice() -> Program {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["not b"]).rule(Some("b"), &["not a"]);
        b.build()
    }

    fn interp(p: &Program, names: &[&str]) -> Interpretation {
        p.interpretation(names.iter().copied()).unwrap()
    }

    #[test]
    fn model_check_examples() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &[]);
        let fact = b.build();
        assert!(classical_model_check(&fact, &interp(&fact, &["a"])).unwrap());
        let c = choice();
        assert!(!classical_model_check(&c, &interp(&c, &[])).unwrap());
        let p = pi0();
        assert!(classical_model_check(&p, &interp(&p, &["a", "b"])).unwrap());
        assert!(!classical_model_check(&p, &interp(&p, &["c"])).unwrap());
    }

    #[test]
    fn model_check_rejects_foreign_atoms() {
        let p = pi0();
        let foreign = Interpretation::new([Atom(99)]);
        assert!(matches!(classical_model_check(&p, &foreign), Err(Error::Input(_))));
    }

    #[test]
    fn reduct_examples() {
        let c = choice();
        let r = gl_reduct(&c, &interp(&c, &["a"])).unwrap();
        assert_eq!(r.to_string(), "a.\n");
        let p = pi0();
        let r = gl_reduct(&p, &interp(&p, &["a", "b", "c"])).unwrap();
        assert_eq!(r.to_string(), "b :- c.\n");
        let mut b = ProgramBuilder::default();
        b.rule(Some("b"), &["a"]);
        let pos = b.build();
        assert_eq!(gl_reduct(&pos, &interp(&pos, &["a"])).unwrap(), pos);
    }

    #[test]
    fn stability_examples() {
        let c = choice();
        assert!(is_stable(&c, &interp(&c, &["a"])).unwrap());
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["a"]);
        let selfloop = b.build();
        assert!(!is_stable(&selfloop, &interp(&selfloop, &["a"])).unwrap());
        let p = pi0();
        for mask in 0..8 {
            let m: Interpretation = p.atoms().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
            assert!(!is_stable(&p, &m).unwrap());
        }
    }

    #[test]
    fn enumeration_examples() {
        let c = choice();
        let models = enumerate_stable(&c, DEFAULT_ENUM_LIMIT).unwrap();
        let names: Vec<Vec<String>> = models.iter().map(|m| c.names_of(m)).collect();
        assert_eq!(names, vec![vec!["a".to_string()], vec!["b".to_string()]]);
        assert!(enumerate_stable(&pi1(), DEFAULT_ENUM_LIMIT).unwrap().is_empty());
        assert!(matches!(enumerate_stable(&c, 1), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn loop_examples() {
        let p1 = pi1();
        let l = loops(&p1, DEFAULT_LOOP_LIMIT).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.iter().next().unwrap().len(), 2);
        assert!(!is_tight(&p1));
        assert!(is_tight(&pi0()));
        assert!(loops(&pi0(), DEFAULT_LOOP_LIMIT).unwrap().is_empty());
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["a"]);
        let s = b.build();
        assert_eq!(loops(&s, DEFAULT_LOOP_LIMIT).unwrap().len(), 1);
    }

    #[test]
    fn external_body_examples() {
        let p1 = pi1();
        let ab: BTreeSet<Atom> = p1.atoms().iter().copied().collect();
        assert!(external_bodies(&p1, &ab).is_empty());
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["b"]).rule(Some("b"), &["not c"]);
        let p = b.build();
        let set: BTreeSet<Atom> = [p.atom("a").unwrap(), p.atom("b").unwrap()].into();
        let eb = external_bodies(&p, &set);
        assert_eq!(eb.len(), 1);
        assert_eq!(p.body_text(eb.iter().next().unwrap()), "{not c}");
        assert!(external_bodies(&p, &BTreeSet::new()).is_empty());
    }

    #[test]
    fn unfounded_examples() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["b"]).rule(Some("b"), &["a"]);
        let p = b.build();
        assert_eq!(greatest_unfounded(&p).len(), 2);
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &[]);
        assert!(greatest_unfounded(&b.build()).is_empty());
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &["b"]).rule(Some("b"), &["not c"]);
        let p = b.build();
        // c has no rule at all, so it is unfounded; a and b are not
        let g = greatest_unfounded(&p);
        assert_eq!(g, [p.atom("c").unwrap()].into());
    }

    #[test]
    fn split_examples() {
        let mut b = ProgramBuilder::default();
        b.rule(Some("a"), &[]).rule(Some("p"), &["a", "not b"]);
        let p = b.build();
        let u: BTreeSet<Atom> = [p.atom("a").unwrap(), p.atom("b").unwrap()].into();
        let (bottom, top) = split(&p, &u).unwrap();
        assert_eq!(bottom.to_string(), "a.\n");
        assert_eq!(top.to_string(), "p :- a, not b.\n");
        let x = interp(&p, &["a"]);
        assert_eq!(partial_eval(&top, &u, &x).to_string(), "p.\n");

        let all: BTreeSet<Atom> = p.atoms().iter().copied().collect();
        let (bottom, top) = split(&p, &all).unwrap();
        assert_eq!(bottom, p);
        assert!(top.rules().is_empty());

        let p1 = pi1();
        let ua: BTreeSet<Atom> = [p1.atom("a").unwrap()].into();
        assert!(matches!(split(&p1, &ua), Err(Error::NotSplitting(_, r)) if r == "a :- b."));
    }
}
