//! Independent checker for tableau proofs.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::Verdict;
use crate::program::{Atom, Body, DefaultLiteral, Program};
use crate::semantics;
use crate::tableau::{Entry, Object, RuleId, TableauProof};

struct Ctx<'a> {
    p: &'a Program,
    body_heads: HashMap<&'a Body, HashSet<Atom>>,
}

impl<'a> Ctx<'a> {
    fn new(p: &'a Program) -> Self {
        let mut body_heads: HashMap<&Body, HashSet<Atom>> = HashMap::new();
        for r in p.rules() {
            body_heads.entry(&r.body).or_default().insert(r.head);
        }
        Ctx { p, body_heads }
    }

    fn has_rule(&self, head: Atom, body: &Body) -> bool {
        self.body_heads.get(body).is_some_and(|h| h.contains(&head))
    }

    fn bodies_of(&self, head: Atom) -> Vec<Body> {
        self.p.head_bodies(head).into_iter().map(|b| self.p.bodies()[b].clone()).collect()
    }

    fn in_scope(&self, o: &Object) -> bool {
        match o {
            Object::Atom(a) => a.is_bot() || self.p.contains_atom(*a),
            Object::Body(b) => self.p.body_id(b).is_some(),
        }
    }

    fn atom_set(&self, w: &[Atom]) -> Option<BTreeSet<Atom>> {
        let s: BTreeSet<Atom> = w.iter().copied().collect();
        (!s.is_empty() && s.iter().all(|&a| !a.is_bot() && self.p.contains_atom(a))).then_some(s)
    }
}

fn same_set(given: &[&Entry], required: impl IntoIterator<Item = Entry>) -> bool {
    let req: HashSet<Entry> = required.into_iter().collect();
    let got: HashSet<&Entry> = given.iter().copied().collect();
    got.len() == given.len() && got.len() == req.len() && req.iter().all(|e| got.contains(e))
}

fn as_body(e: &Entry) -> Option<(bool, &Body)> {
    match &e.object {
        Object::Body(b) => Some((e.sign, b)),
        Object::Atom(_) => None,
    }
}

fn as_atom(e: &Entry) -> Option<(bool, Atom)> {
    match e.object {
        Object::Atom(a) => Some((e.sign, a)),
        Object::Body(_) => None,
    }
}

/// The literal made false by an atom entry: `Fa` falsifies `a`, `Ta` falsifies `not a`.
fn falsified_literal(sign: bool, a: Atom) -> DefaultLiteral {
    DefaultLiteral { atom: a, negative: sign }
}

/// Checks one deduction against the rule definitions. `prem` are the premise
/// entries in the order given.
fn check_rule(ctx: &Ctx, entry: &Entry, rule: RuleId, prem: &[&Entry], witness: &[Atom]) -> Result<(), String> {
    if !rule.needs_witness() && !witness.is_empty() {
        return Err(format!("rule {rule} takes no witness"));
    }
    let fail = |msg: &str| Err(format!("{rule}: {msg}"));
    match rule {
        RuleId::Root => fail("only the first record may be the root"),
        RuleId::Cut => Ok(()),
        RuleId::B => match as_body(entry) {
            Some((true, b)) if same_set(prem, b.literals().iter().map(|&l| Entry::t(l))) => Ok(()),
            Some((true, _)) => fail("premises must be exactly t l for the body's literals"),
            _ => fail("conclusion must be a true body"),
        },
        RuleId::C => {
            let Some((sign, a)) = as_atom(entry).filter(|(_, a)| !a.is_bot()) else {
                return fail("conclusion must be an atom entry");
            };
            let bodies: Vec<&Body> =
                prem.iter().filter_map(|e| as_body(e)).filter(|(s, _)| !s).map(|(_, b)| b).collect();
            let [b] = bodies.as_slice() else { return fail("needs exactly one false body premise") };
            let l = falsified_literal(sign, a);
            if !b.contains(l) {
                return fail("conclusion is not f of a literal of the body");
            }
            let req = std::iter::once(Entry::body(false, (*b).clone()))
                .chain(b.literals().iter().filter(|&&x| x != l).map(|&x| Entry::t(x)));
            if same_set(prem, req) {
                Ok(())
            } else {
                fail("premises must be F B and t l for the other literals")
            }
        }
        RuleId::D => match (as_atom(entry), prem) {
            (Some((true, h)), [p]) => match as_body(p) {
                Some((true, b)) if ctx.has_rule(h, b) => Ok(()),
                _ => fail("premise must be T B for a rule with this head"),
            },
            _ => fail("needs a true atom and one premise"),
        },
        RuleId::E => match (as_body(entry), prem) {
            (Some((false, b)), [p]) => match as_atom(p) {
                Some((false, h)) if ctx.has_rule(h, b) => Ok(()),
                _ => fail("premise must be F h for a rule with this body"),
            },
            _ => fail("needs a false body and one premise"),
        },
        RuleId::F => match (as_body(entry), prem) {
            (Some((false, b)), [p]) => match as_atom(p) {
                Some((s, a)) if !a.is_bot() && b.contains(falsified_literal(s, a)) => Ok(()),
                _ => fail("premise must be f l for a literal of the body"),
            },
            _ => fail("needs a false body and one premise"),
        },
        RuleId::G => match (as_atom(entry), prem) {
            (Some((s, a)), [p]) if !a.is_bot() => match as_body(p) {
                Some((true, b)) if b.contains(falsified_literal(!s, a)) => Ok(()),
                _ => fail("premise must be T B with the literal in B"),
            },
            _ => fail("needs an atom conclusion and one premise"),
        },
        RuleId::HSec => match as_atom(entry) {
            Some((false, h)) if !h.is_bot() => {
                if same_set(prem, ctx.bodies_of(h).into_iter().map(|b| Entry::body(false, b))) {
                    Ok(())
                } else {
                    fail("premises must be F B for exactly the bodies of the head")
                }
            }
            _ => fail("conclusion must be a false atom"),
        },
        RuleId::ISec => {
            let Some((true, b)) = as_body(entry) else { return fail("conclusion must be a true body") };
            let heads: Vec<Atom> = prem.iter().filter_map(|e| as_atom(e)).filter(|(s, _)| *s).map(|(_, a)| a).collect();
            let [h] = heads.as_slice() else { return fail("needs exactly one true atom premise") };
            let bodies = ctx.bodies_of(*h);
            if !bodies.contains(b) {
                return fail("body is not a body of the head");
            }
            let req = std::iter::once(Entry::atom(true, *h))
                .chain(bodies.into_iter().filter(|x| x != b).map(|x| Entry::body(false, x)));
            if same_set(prem, req) {
                Ok(())
            } else {
                fail("premises must be T h and F B for the other bodies")
            }
        }
        RuleId::HDag | RuleId::HDdag | RuleId::IDag | RuleId::IDdag => {
            let lower = matches!(rule, RuleId::HDag | RuleId::HDdag);
            let (h, extra) = if lower {
                match as_atom(entry) {
                    Some((false, h)) if !h.is_bot() => (h, None),
                    _ => return fail("conclusion must be a false atom"),
                }
            } else {
                let Some((true, b)) = as_body(entry) else { return fail("conclusion must be a true body") };
                let heads: Vec<Atom> =
                    prem.iter().filter_map(|e| as_atom(e)).filter(|(s, _)| *s).map(|(_, a)| a).collect();
                let [h] = heads.as_slice() else { return fail("needs exactly one true atom premise") };
                (*h, Some(b.clone()))
            };
            let mut falses: BTreeSet<Body> = BTreeSet::new();
            for e in prem {
                match as_body(e) {
                    Some((false, b)) => {
                        if !falses.insert(b.clone()) {
                            return fail("duplicate premise");
                        }
                    }
                    _ if !lower && as_atom(e) == Some((true, h)) => {}
                    _ => return fail("premises must be false bodies"),
                }
            }
            let Some(set) = ctx.atom_set(witness) else { return fail("witness must be a non-empty set of atoms") };
            if !set.contains(&h) {
                return fail("witness does not contain the head");
            }
            if let Some(b) = &extra {
                if falses.contains(b) {
                    return fail("concluded body is also a premise");
                }
            }
            let eb = semantics::external_bodies(ctx.p, &set);
            let mut allowed = falses;
            if let Some(b) = extra {
                allowed.insert(b);
            }
            if matches!(rule, RuleId::HDag | RuleId::IDag) {
                if eb.is_subset(&allowed) {
                    Ok(())
                } else {
                    fail("witness is not unfounded once the premise bodies are false")
                }
            } else if !semantics::is_loop(ctx.p, &set) {
                fail("witness is not a loop")
            } else if eb == allowed {
                Ok(())
            } else {
                fail("premise bodies differ from the loop's external bodies")
            }
        }
    }
}

/// Validates the extension chain, every justification and the tree shape,
/// and requires every leaf branch to be contradictory.
pub fn check_tableau_proof(program: &Program, proof: &TableauProof) -> Verdict {
    let full = match proof.extension.apply(program) {
        Ok(p) => p,
        Err(e) => return Verdict::invalid(None, e.to_string()),
    };
    let ctx = Ctx::new(&full);
    let recs = &proof.records;
    match recs.first() {
        Some(r) if r.parent.is_none() && r.rule == RuleId::Root && r.entry == Entry::atom(false, Atom::BOT) => {}
        _ => return Verdict::invalid(Some(0), "first record must be the root F#bot"),
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); recs.len()];
    for (i, r) in recs.iter().enumerate().skip(1) {
        match r.parent {
            Some(p) if p < i => children[p].push(i),
            _ => return Verdict::invalid(Some(i), "parent must be an earlier record"),
        }
        if !ctx.in_scope(&r.entry.object) {
            return Verdict::invalid(Some(i), "object is not an atom or body of the program");
        }
    }
    for (i, ch) in children.iter().enumerate() {
        match ch.as_slice() {
            [] => {}
            [c] if recs[*c].rule != RuleId::Cut => {}
            [a, b] if recs[*a].rule == RuleId::Cut
                && recs[*b].rule == RuleId::Cut
                && recs[*a].entry.object == recs[*b].entry.object
                && recs[*a].entry.sign != recs[*b].entry.sign => {}
            _ => return Verdict::invalid(Some(i), "node must have no child, one deduced child or a pair of cuts"),
        }
    }

    // Depth-first walk with an undo log.
    let mut value: HashMap<&Object, bool> = HashMap::new();
    value.insert(&recs[0].entry.object, false);
    let mut on_path = vec![false; recs.len()];
    on_path[0] = true;
    let mut contradictory = vec![false; recs.len()];
    enum Ev {
        Enter(usize),
        Exit(usize, bool),
    }
    let mut stack: Vec<Ev> = children[0].iter().rev().map(|&c| Ev::Enter(c)).collect();
    if children[0].is_empty() {
        return Verdict::invalid(Some(0), "open leaf: branch is not contradictory");
    }
    while let Some(ev) = stack.pop() {
        match ev {
            Ev::Exit(i, assigned) => {
                on_path[i] = false;
                if assigned {
                    value.remove(&recs[i].entry.object);
                }
            }
            Ev::Enter(i) => {
                let r = &recs[i];
                let parent = r.parent.unwrap();
                if contradictory[parent] {
                    return Verdict::invalid(Some(i), "extends a contradictory branch");
                }
                let mut prem = Vec::with_capacity(r.premises.len());
                for &p in &r.premises {
                    if p >= recs.len() || !on_path[p] {
                        return Verdict::invalid(Some(i), format!("premise {p} is not an earlier entry on the branch"));
                    }
                    prem.push(&recs[p].entry);
                }
                let current = value.get(&r.entry.object).copied();
                if r.rule == RuleId::Cut && current.is_some() {
                    return Verdict::invalid(Some(i), "cut on an object that is already assigned");
                }
                if let Err(msg) = check_rule(&ctx, &r.entry, r.rule, &prem, &r.witness) {
                    return Verdict::invalid(Some(i), msg);
                }
                let assigned = current.is_none();
                if assigned {
                    value.insert(&r.entry.object, r.entry.sign);
                }
                contradictory[i] = current == Some(!r.entry.sign);
                if children[i].is_empty() && !contradictory[i] {
                    return Verdict::invalid(Some(i), "open leaf: branch is not contradictory");
                }
                on_path[i] = true;
                stack.push(Ev::Exit(i, assigned));
                stack.extend(children[i].iter().rev().map(|&c| Ev::Enter(c)));
            }
        }
    }
    Verdict::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{proof_length, solve, EngineConfig, ExtensionSet, Object, Outcome, ProofBuilder};
    use crate::testutil::{pi0, pi0_hand_proof, pi1};

    #[test]
    fn hand_proof_is_valid() {
        let proof = pi0_hand_proof();
        assert_eq!(proof.records.len(), 11);
        assert_eq!(proof_length(&proof), 11);
        assert_eq!(check_tableau_proof(&pi0(), &proof), Verdict::Valid);
    }

    #[test]
    fn engine_proof_is_valid() {
        let p = pi0();
        for cfg in [EngineConfig::full(), EngineConfig::full().with_lookahead(true)] {
            let sol = solve(&p, &ExtensionSet::new(), &cfg).unwrap();
            let Outcome::Unsat { proof: Some(proof) } = sol.outcome else { panic!() };
            assert_eq!(check_tableau_proof(&p, &proof), Verdict::Valid);
        }
    }

    #[test]
    fn mutations_are_rejected() {
        let p = pi0();
        let good = pi0_hand_proof();
        let mut bad = good.clone();
        bad.records[2].rule = RuleId::D;
        assert!(!check_tableau_proof(&p, &bad).is_valid());

        let mut bad = good.clone();
        bad.records[3].premises.clear();
        assert!(!check_tableau_proof(&p, &bad).is_valid());

        let mut bad = good.clone();
        bad.records[3].entry.sign = true;
        assert!(!check_tableau_proof(&p, &bad).is_valid());

        // Dropping the last entry leaves an open leaf.
        let mut bad = good.clone();
        bad.records.pop();
        assert!(!check_tableau_proof(&p, &bad).is_valid());

        // Premise from the sibling branch.
        let mut bad = good.clone();
        bad.records[5].premises = vec![2];
        assert!(!check_tableau_proof(&p, &bad).is_valid());

        let mut bad = good;
        bad.records[4].entry.sign = true;
        assert!(!check_tableau_proof(&p, &bad).is_valid());
    }

    fn pi1_proof(witness: &[&str]) -> TableauProof {
        let p = pi1();
        let mut b = ProofBuilder::new(&p, ExtensionSet::new()).unwrap();
        let a = b.atom("a").unwrap();
        let na = b.body(&["not a"]).unwrap();
        b.deduce(Entry::body(false, na.clone()), RuleId::E, &[Entry::atom(false, Atom::BOT)], &[]).unwrap();
        b.deduce(Entry::atom(true, a), RuleId::C, &[Entry::body(false, na)], &[]).unwrap();
        let w: Vec<Atom> = witness.iter().map(|n| b.atom(n).unwrap()).collect();
        b.deduce(Entry::atom(false, a), RuleId::HDag, &[], &w).unwrap();
        assert!(b.is_closed());
        b.finish()
    }

    #[test]
    fn unfounded_witness_must_have_no_external_body() {
        let p = pi1();
        assert_eq!(check_tableau_proof(&p, &pi1_proof(&["a", "b"])), Verdict::Valid);
        assert!(!check_tableau_proof(&p, &pi1_proof(&["a"])).is_valid());
        assert!(!check_tableau_proof(&p, &pi1_proof(&[])).is_valid());
    }

    #[test]
    fn loop_rule_checks_the_external_bodies() {
        let p = pi1();
        let mut proof = pi1_proof(&["a", "b"]);
        proof.records[3].rule = RuleId::HDdag;
        assert_eq!(check_tableau_proof(&p, &proof), Verdict::Valid);
        proof.records[3].witness.pop();
        assert!(!check_tableau_proof(&p, &proof).is_valid());
    }

    #[test]
    fn cut_on_assigned_object_is_rejected() {
        let p = pi0();
        let mut proof = pi0_hand_proof();
        let a = proof.records[1].entry.object.clone();
        assert!(matches!(a, Object::Atom(_)));
        // Re-parent the second cut below the first one.
        let second = proof.records.iter().position(|r| r.rule == RuleId::Cut && !r.entry.sign).unwrap();
        proof.records[second].parent = Some(1);
        assert!(!check_tableau_proof(&p, &proof).is_valid());
    }
}
