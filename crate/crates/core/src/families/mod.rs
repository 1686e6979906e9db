//! Benchmark families: pigeonhole programs and their extended variants, the
//! `red` simplifier, random redundancy and a visible-equivalence check.

mod ephp;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::program::{Body, Interpretation, Program, Rule};
use crate::semantics;
use crate::tableau::{enumerate_models, EngineConfig, ExtRule, ExtensionSet};

pub use ephp::{gen_ephp, gen_ephp_proof, php_clauses, php_eres_proof, PhpEres};

/// Pigeon `i` sits in hole `j`.
pub fn p(i: usize, j: usize) -> String {
    format!("p{i}_{j}")
}

/// The complement atom of [`p`].
pub fn p_bar(i: usize, j: usize) -> String {
    format!("p{i}_{j}'")
}

/// Layer-`l` extension atom; layer `n + 1` is the pigeonhole atom itself.
pub fn e(n: usize, l: usize, i: usize, j: usize) -> String {
    if l == n + 1 {
        p(i, j)
    } else {
        format!("e{l}_{i}_{j}")
    }
}

fn require_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Input("family size must be at least 1".into()));
    }
    Ok(())
}

/// `n + 1` pigeons in `n` holes.
pub fn gen_php(n: usize) -> Result<Program> {
    require_n(n)?;
    let mut b = Program::builder();
    for i in 1..=n + 1 {
        let body: Vec<String> = (1..=n).map(|j| format!("not {}", p(i, j))).collect();
        b.rule(None, &body.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for k in 1..=n {
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                b.rule(None, &[&p(i, k), &p(j, k)]);
            }
        }
    }
    for i in 1..=n + 1 {
        for j in 1..=n {
            b.rule(Some(&p(i, j)), &[&format!("not {}", p_bar(i, j))]);
            b.rule(Some(&p_bar(i, j)), &[&format!("not {}", p(i, j))]);
        }
    }
    Ok(b.build())
}

/// `e^l_ij ← e^(l+1)_ij` and `e^l_ij ← e^(l+1)_il, e^(l+1)_(l+1)j` for
/// `1 < l ≤ n`, highest layer first.
pub fn gen_ext_layers(n: usize) -> Vec<ExtRule> {
    let mut rules = Vec::new();
    for l in (2..=n).rev() {
        for i in 1..=l {
            for j in 1..l {
                let h = e(n, l, i, j);
                rules.push(ExtRule::new(h.clone(), &[&e(n, l + 1, i, j)]));
                rules.push(ExtRule::new(h, &[&e(n, l + 1, i, l), &e(n, l + 1, l + 1, j)]));
            }
        }
    }
    rules
}

/// Pigeonhole program with the extension layers added as ordinary rules.
pub fn gen_cphp(n: usize) -> Result<Program> {
    gen_php(n)?.extended(&ExtensionSet::from_rules(gen_ext_layers(n)))
}

/// Pigeonhole program with a self-loop `p_ij ← p_ij` per pigeonhole atom.
pub fn gen_php_selfloops(n: usize) -> Result<Program> {
    let php = gen_php(n)?;
    let mut rules = php.rules().to_vec();
    for i in 1..=n + 1 {
        for j in 1..=n {
            let a = php.atom(&p(i, j)).expect("pigeonhole atom");
            rules.push(Rule::new(a, Body::new([crate::program::DefaultLiteral::pos(a)])));
        }
    }
    Program::new(php.shared_symbols(), rules)
}

/// Removes rules whose head is not ⊥ and occurs in no body.
pub fn red(program: &Program) -> Program {
    let used: BTreeSet<_> = program.rules().iter().flat_map(|r| r.body.atoms()).collect();
    let kept = program.rules().iter().filter(|r| r.head.is_bot() || used.contains(&r.head)).cloned().collect();
    program.with_rules(kept)
}

/// [`red`] to a fixpoint.
pub fn red_star(program: &Program) -> Program {
    let mut cur = program.clone();
    loop {
        let next = red(&cur);
        if next.rules().len() == cur.rules().len() {
            return next;
        }
        cur = next;
    }
}

/// True iff the stable models of both programs, projected to `visible`,
/// are equal as multisets. Programs within `atom_limit` atoms are
/// enumerated by brute force, larger ones with the engine (at most
/// `atom_limit` models each, refused beyond that).
pub fn visibly_equivalent(p1: &Program, p2: &Program, visible: &BTreeSet<String>, atom_limit: usize) -> Result<bool> {
    let project = |p: &Program| -> Result<Vec<Vec<String>>> {
        let models: Vec<Interpretation> = if p.atoms().len() <= atom_limit {
            semantics::enumerate_stable(p, atom_limit)?.into_iter().collect()
        } else {
            enumerate_models(p, &EngineConfig::full(), atom_limit)?.ok_or(Error::LimitExceeded {
                what: "stable model enumeration",
                count: atom_limit + 1,
                limit: atom_limit,
            })?
        };
        let mut out: Vec<Vec<String>> = models
            .iter()
            .map(|m| p.names_of(m).into_iter().filter(|a| visible.contains(a)).collect())
            .collect();
        out.sort();
        Ok(out)
    };
    Ok(project(p1)? == project(p2)?)
}

/// Adds `⌊p·n/100⌋` rules `r_i ← l1, l2` with distinct literals drawn from
/// the current program's default literals; each `r_i` is fresh and joins the
/// pool for later draws. Draw order per rule: `l1`, then `l2` until it
/// differs from `l1`.
pub fn add_random_redundancy(program: &Program, n: usize, percent: usize, seed: u64) -> Result<Program> {
    let mut pool = program.dlit();
    if pool.len() < 2 {
        return Err(Error::Precondition("the program needs at least one atom".into()));
    }
    let count = percent * n / 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = program.symbols().clone();
    let mut rules = program.rules().to_vec();
    for i in 1..=count {
        let l1 = pool[rng.gen_range(0..pool.len())];
        let l2 = loop {
            let l = pool[rng.gen_range(0..pool.len())];
            if l != l1 {
                break l;
            }
        };
        let mut name = format!("r{i}");
        while symbols.get(&name).is_some() {
            name.push('\'');
        }
        let r = symbols.intern(&name);
        rules.push(Rule::new(r, Body::new([l1, l2])));
        pool.push(crate::program::DefaultLiteral::pos(r));
        pool.push(crate::program::DefaultLiteral::neg(r));
    }
    Program::new(std::sync::Arc::new(symbols), rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofkit::{check_eres_proof, check_tableau_proof, eres_to_easpt, Provenance, Verdict};
    use crate::tableau::{proof_length, solve, Outcome};

    fn names(p: &Program) -> BTreeSet<String> {
        p.atoms().iter().map(|&a| p.name(a).to_string()).collect()
    }

    #[test]
    fn php_sizes() {
        let p1 = gen_php(1).unwrap();
        assert_eq!((p1.rules().len(), p1.atoms().len()), (7, 4));
        let p2 = gen_php(2).unwrap();
        assert_eq!((p2.rules().len(), p2.atoms().len()), (21, 12));
        assert!(gen_php(0).is_err());
    }

    #[test]
    fn small_php_is_unsat() {
        for n in 1..=2 {
            assert!(semantics::enumerate_stable(&gen_php(n).unwrap(), 20).unwrap().is_empty());
        }
        let sol = solve(&gen_php(3).unwrap(), &ExtensionSet::new(), &EngineConfig::full()).unwrap();
        assert!(matches!(sol.outcome, Outcome::Unsat { .. }));
    }

    #[test]
    fn layers_and_cphp() {
        assert_eq!(gen_ext_layers(2).len(), 4);
        assert!(gen_ext_layers(1).is_empty());
        assert_eq!(gen_cphp(1).unwrap().rule_set(), gen_php(1).unwrap().rule_set());
        let c2 = gen_cphp(2).unwrap();
        assert_eq!(c2.rules().len(), 25);
        assert!(semantics::enumerate_stable(&c2, 20).unwrap().is_empty());
    }

    #[test]
    fn selfloops_are_non_tight() {
        let p = gen_php_selfloops(1).unwrap();
        assert!(!semantics::is_tight(&p));
        let p2 = gen_php_selfloops(2).unwrap();
        let loops = semantics::loops(&p2, 20).unwrap();
        assert_eq!(loops.len(), 6);
        assert!(loops.iter().all(|l| l.len() == 1));
        for n in 1..=3 {
            let sol = solve(&gen_php_selfloops(n).unwrap(), &ExtensionSet::new(), &EngineConfig::full()).unwrap();
            assert!(matches!(sol.outcome, Outcome::Unsat { .. }));
        }
    }

    #[test]
    fn eres_proof_for_one_hole() {
        let r = php_eres_proof(1).unwrap();
        assert!(r.proof.triples.is_empty());
        let initial = r.proof.steps.iter().filter(|s| s.provenance == Provenance::Initial).count();
        assert_eq!((initial, r.proof.steps.len() - initial), (3, 2));
        assert_eq!(check_eres_proof(&r.clauses, &r.proof), Verdict::Valid);
    }

    #[test]
    fn eres_proofs_check() {
        for n in 2..=4 {
            let r = php_eres_proof(n).unwrap();
            assert_eq!(check_eres_proof(&r.clauses, &r.proof), Verdict::Valid, "n = {n}");
            assert_eq!(r.var_names.len(), r.clauses.num_vars() as usize + r.proof.triples.len());
        }
    }

    #[test]
    fn eres_proofs_transform_to_tableaux() {
        for n in 1..=3 {
            let r = php_eres_proof(n).unwrap();
            let t = eres_to_easpt(&r.clauses, &r.proof).unwrap();
            let (prog, _) = crate::bridge::to_asp(&r.clauses);
            assert_eq!(check_tableau_proof(&prog, &t), Verdict::Valid, "n = {n}");
        }
    }

    #[test]
    fn ephp_proofs_check_against_php() {
        for n in 1..=3 {
            let proof = gen_ephp_proof(n).unwrap();
            assert_eq!(check_tableau_proof(&gen_php(n).unwrap(), &proof), Verdict::Valid, "n = {n}");
            assert!(proof_length(&proof) > proof.records.len());
        }
    }

    #[test]
    fn red_star_recovers_php() {
        for n in 1..=3 {
            let ephp = gen_ephp(n).unwrap();
            let r = red_star(&ephp);
            assert_eq!(r.rule_set(), gen_php(n).unwrap().rule_set(), "n = {n}");
            assert_eq!(red_star(&r).rule_set(), r.rule_set());
        }
    }

    #[test]
    fn red_drops_unused_heads() {
        let p = Program::builder().rule(Some("a"), &["not b"]).rule(Some("b"), &["not a"]).rule(Some("p"), &["a", "b"]).build();
        let r = red(&p);
        assert_eq!(r.rules().len(), 2);
        let c = Program::builder().rule(None, &["a"]).rule(Some("a"), &[]).build();
        assert_eq!(red(&c).rules().len(), 2);
    }

    #[test]
    fn visible_equivalence() {
        let p = Program::builder().rule(Some("a"), &["not b"]).rule(Some("b"), &["not a"]).build();
        let q = Program::builder().rule(Some("a"), &["not b"]).rule(Some("b"), &["not a"]).rule(Some("p"), &["a", "b"]).build();
        assert!(visibly_equivalent(&p, &q, &names(&p), 20).unwrap());
        let fact = Program::builder().rule(Some("a"), &[]).build();
        let vis: BTreeSet<String> = ["a".to_string()].into();
        assert!(!visibly_equivalent(&fact, &Program::empty(), &vis, 20).unwrap());
        // Engine enumeration agrees with brute force.
        assert!(visibly_equivalent(&p, &q, &names(&p), 1).is_err());
        assert!(visibly_equivalent(&p, &q, &names(&p), 2).unwrap());
        let php = gen_php(2).unwrap();
        assert!(visibly_equivalent(&gen_ephp(2).unwrap(), &php, &names(&php), 20).unwrap());
    }

    #[test]
    fn random_redundancy_counts_and_determinism() {
        let php = gen_php(2).unwrap();
        let a = add_random_redundancy(&php, 10, 50, 7).unwrap();
        assert_eq!(a.rules().len(), php.rules().len() + 5);
        let b = add_random_redundancy(&php, 12, 450, 7).unwrap();
        assert_eq!(b.rules().len(), php.rules().len() + 54);
        assert_eq!(add_random_redundancy(&php, 12, 450, 7).unwrap().rule_set(), b.rule_set());
        assert_ne!(add_random_redundancy(&php, 12, 450, 8).unwrap().rule_set(), b.rule_set());
        for r in &b.rules()[php.rules().len()..] {
            let l = r.body.literals();
            assert_eq!(l.len(), 2);
        }
        assert!(add_random_redundancy(&Program::empty(), 10, 50, 1).is_err());
    }
}
