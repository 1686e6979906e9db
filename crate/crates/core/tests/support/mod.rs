//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's semantics.

#![allow(dead_code)]

use std::collections::BTreeSet;

use aspt_core::proofkit::{ResolutionProof, Step};
use aspt_core::{Clause, Lit, Program};
use rand::Rng;

/// A program over at most 64 atoms; `head == None` is ⊥.
#[derive(Clone, Debug)]
pub struct Prog {
    pub names: Vec<String>,
    pub rules: Vec<(Option<usize>, u64, u64)>,
}

impl Prog {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (h, pos, neg) in &self.rules {
            let mut lits = Vec::new();
            for i in 0..self.names.len() {
                if pos >> i & 1 == 1 {
                    lits.push(self.names[i].clone());
                }
                if neg >> i & 1 == 1 {
                    lits.push(format!("not {}", self.names[i]));
                }
            }
            match (h, lits.is_empty()) {
                (Some(h), true) => out.push_str(&format!("{}.\n", self.names[*h])),
                (Some(h), false) => out.push_str(&format!("{} :- {}.\n", self.names[*h], lits.join(", "))),
                (None, _) => out.push_str(&format!(":- {}.\n", lits.join(", "))),
            }
        }
        out
    }

    /// Reads the rules of a library program without using its semantics.
    pub fn from_program(p: &Program) -> Prog {
        let names: Vec<String> = p.atoms().iter().map(|&a| p.name(a).to_string()).collect();
        assert!(names.len() <= 64, "oracle handles at most 64 atoms");
        let idx = |a| p.atoms().iter().position(|&b| b == a).unwrap();
        let rules = p
            .rules()
            .iter()
            .map(|r| {
                let (mut pos, mut neg) = (0u64, 0u64);
                for l in r.body.literals() {
                    let bit = 1u64 << idx(l.atom);
                    if l.negative {
                        neg |= bit;
                    } else {
                        pos |= bit;
                    }
                }
                (if r.head.is_bot() { None } else { Some(idx(r.head)) }, pos, neg)
            })
            .collect();
        Prog { names, rules }
    }

    /// Least model of the reduct by `m`; bit 63 stands for ⊥.
    fn reduct_lm(&self, m: u64) -> u64 {
        const BOT: u64 = 1 << 63;
        let mut lm = 0u64;
        loop {
            let mut next = lm;
            for &(h, pos, neg) in &self.rules {
                if neg & m == 0 && pos & !lm == 0 {
                    next |= h.map_or(BOT, |h| 1 << h);
                }
            }
            if next == lm {
                return lm;
            }
            lm = next;
        }
    }

    pub fn is_stable(&self, m: u64) -> bool {
        self.reduct_lm(m) == m
    }

    /// Stable models by the definition: every subset, reduct, least model.
    pub fn stable_models(&self) -> Vec<u64> {
        let n = self.names.len();
        assert!(n <= 20, "plain enumeration is for small programs");
        (0..1u64 << n).filter(|&m| self.is_stable(m)).collect()
    }

    /// Same set, guessing only atoms that occur negatively in non-⊥ rules:
    /// the reduct of the other rules does not depend on the rest.
    pub fn stable_models_by_guess(&self) -> Vec<u64> {
        let guess: u64 = self.rules.iter().filter(|r| r.0.is_some()).fold(0, |acc, r| acc | r.2);
        let bits: Vec<u64> = (0..64).map(|i| 1u64 << i).filter(|b| guess & b != 0).collect();
        assert!(bits.len() <= 24, "too many guessed atoms");
        let definite = Prog { names: self.names.clone(), rules: self.rules.iter().filter(|r| r.0.is_some()).copied().collect() };
        let mut out = Vec::new();
        for k in 0..1u64 << bits.len() {
            let s: u64 = bits.iter().enumerate().filter(|(i, _)| k >> i & 1 == 1).fold(0, |a, (_, b)| a | b);
            let m = definite.reduct_lm(s);
            if m & guess == s && self.is_stable(m) {
                out.push(m);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn names_of(&self, m: u64) -> BTreeSet<String> {
        (0..self.names.len()).filter(|i| m >> i & 1 == 1).map(|i| self.names[i].clone()).collect()
    }
}

/// Random program over `x0..x{n-1}`. Tight programs only use positive body
/// atoms with a larger index than the head.
pub fn random_prog(rng: &mut impl Rng, max_atoms: usize, max_rules: usize, tight: bool) -> Prog {
    let n = rng.gen_range(1..=max_atoms);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let k = rng.gen_range(1..=max_rules);
    let mut rules = Vec::with_capacity(k);
    for _ in 0..k {
        let head = if rng.gen_bool(0.15) { None } else { Some(rng.gen_range(0..n)) };
        let (mut pos, mut neg) = (0u64, 0u64);
        for _ in 0..rng.gen_range(0..=3) {
            let a = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                if tight && head.is_some_and(|h| a <= h) {
                    continue;
                }
                pos |= 1 << a;
            } else {
                neg |= 1 << a;
            }
        }
        rules.push((head, pos, neg));
    }
    Prog { names, rules }
}

/// Random CNF with DIMACS-style literals.
pub fn random_cnf(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> (u32, Vec<Vec<i32>>) {
    let nv = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let w = rng.gen_range(1..=3usize);
            let mut c: Vec<i32> = (0..w)
                .map(|_| {
                    let v = rng.gen_range(1..=nv) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    (nv, clauses)
}

pub fn clause_true(c: &[i32], a: u64) -> bool {
    c.iter().any(|&l| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
}

/// All satisfying assignments as bitmasks (bit v-1 is variable v).
pub fn cnf_models(nv: u32, clauses: &[Vec<i32>]) -> Vec<u64> {
    assert!(nv <= 20);
    (0..1u64 << nv).filter(|&a| clauses.iter().all(|c| clause_true(c, a))).collect()
}

/// Number of models by backtracking in variable order, pruning on
/// clauses whose variables are all assigned; models projected onto the
/// first `project` variables are collected.
pub fn cnf_models_projected(nv: u32, clauses: &[Clause], project: u32) -> (u64, BTreeSet<u64>) {
    let mut by_max: Vec<Vec<&Clause>> = vec![Vec::new(); nv as usize + 1];
    for c in clauses {
        by_max[c.lits().iter().map(|l| l.var()).max().unwrap_or(0) as usize].push(c);
    }
    let mut vals = vec![false; nv as usize + 1];
    let mut count = 0;
    let mut proj = BTreeSet::new();
    fn go(v: u32, nv: u32, project: u32, vals: &mut Vec<bool>, by_max: &[Vec<&Clause>], count: &mut u64, proj: &mut BTreeSet<u64>) {
        if by_max[v as usize - 1].iter().any(|c| !c.lits().iter().any(|l| vals[l.var() as usize] != l.is_negative())) {
            return;
        }
        if v > nv {
            *count += 1;
            proj.insert((1..=project).filter(|&x| vals[x as usize]).fold(0, |a, x| a | 1 << (x - 1)));
            return;
        }
        for b in [false, true] {
            vals[v as usize] = b;
            go(v + 1, nv, project, vals, by_max, count, proj);
        }
    }
    if by_max[0].iter().next().is_some() {
        return (0, proj);
    }
    by_max.push(Vec::new());
    go(1, nv, project, &mut vals, &by_max, &mut count, &mut proj);
    (count, proj)
}

enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>, u32, Vec<i32>),
}

fn clause_of(t: &Tree, clauses: &[Vec<i32>]) -> Vec<i32> {
    match t {
        Tree::Leaf(i) => clauses[*i].clone(),
        Tree::Node(_, _, _, c) => c.clone(),
    }
}

/// Tree-like refutation read off a DPLL search tree; `None` when satisfiable.
pub fn dpll_refutation(nv: u32, clauses: &[Vec<i32>]) -> Option<ResolutionProof> {
    fn search(v: u32, nv: u32, a: &mut Vec<Option<bool>>, clauses: &[Vec<i32>]) -> Option<Tree> {
        if let Some(i) = clauses.iter().position(|c| c.iter().all(|&l| a[l.unsigned_abs() as usize] == Some(l < 0))) {
            return Some(Tree::Leaf(i));
        }
        if v > nv {
            return None;
        }
        a[v as usize] = Some(true);
        let t = search(v + 1, nv, a, clauses);
        a[v as usize] = Some(false);
        let f = search(v + 1, nv, a, clauses);
        a[v as usize] = None;
        let (t, f) = (t?, f?);
        let (ct, cf) = (clause_of(&t, clauses), clause_of(&f, clauses));
        let vi = v as i32;
        if !ct.contains(&-vi) {
            return Some(t);
        }
        if !cf.contains(&vi) {
            return Some(f);
        }
        let mut r: Vec<i32> = ct.iter().chain(&cf).copied().filter(|&l| l != vi && l != -vi).collect();
        r.sort_unstable();
        r.dedup();
        Some(Tree::Node(Box::new(t), Box::new(f), v, r))
    }
    fn emit(t: &Tree, clauses: &[Vec<i32>], steps: &mut Vec<Step>) -> usize {
        match t {
            Tree::Leaf(i) => steps.push(Step::initial(Clause::from_dimacs(&clauses[*i]))),
            Tree::Node(l, r, v, c) => {
                let a = emit(l, clauses, steps);
                let b = emit(r, clauses, steps);
                steps.push(Step::resolved(Clause::from_dimacs(c), a, b, Some(*v)));
            }
        }
        steps.len() - 1
    }
    let mut a = vec![None; nv as usize + 1];
    let tree = search(1, nv, &mut a, clauses)?;
    let mut steps = Vec::new();
    emit(&tree, clauses, &mut steps);
    if !steps.last().unwrap().clause.is_empty() {
        return None;
    }
    Some(ResolutionProof { triples: vec![], steps })
}

pub fn lit(v: i32) -> Lit {
    Lit::from_dimacs(v).unwrap()
}
