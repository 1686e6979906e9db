//! Proof transformations between tableaux and (extended) resolution.
//!
//! `aspt_to_tres` and `easpt_to_eres` read a tableau as a cut tree in which
//! every deduced entry is a cut whose other side closes at once; clauses are
//! combined bottom-up. `tres_to_aspt` and `eres_to_easpt` go the other way
//! over the guess-and-check encoding of the clause set.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::resolution::{check_eres_proof, check_res_proof, is_tree_like, ExtensionTriple, Provenance, ResolutionProof, Step};
use super::tableau_check::check_tableau_proof;
use super::Verdict;
use crate::bridge::{self, NameKind, NameMap};
use crate::cnf::{Clause, ClauseSet, Lit};
use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Program};
use crate::semantics;
use crate::tableau::{Entry, ExtRule, ExtensionSet, Object, ProofBuilder, RuleId, TableauProof};

enum Deriv {
    Leaf(usize),
    Res { pos: Box<Deriv>, neg: Box<Deriv>, var: u32, clause: Clause },
}

impl Deriv {
    fn clause<'a>(&'a self, clauses: &'a [Clause]) -> &'a Clause {
        match self {
            Deriv::Leaf(i) => &clauses[*i],
            Deriv::Res { clause, .. } => clause,
        }
    }
}

struct CutTree<'a> {
    proof: &'a TableauProof,
    children: Vec<Vec<usize>>,
    clauses: &'a [Clause],
    vars: Vec<Option<u32>>,
    value: Vec<Option<bool>>,
}

impl<'a> CutTree<'a> {
    fn falsified(&self, extra: Option<(u32, bool)>) -> Result<usize> {
        let value = |v: u32| match extra {
            Some((x, b)) if x == v => Some(b),
            _ => self.value[v as usize],
        };
        self.clauses
            .iter()
            .position(|c| c.falsified_by(value))
            .ok_or_else(|| Error::Internal("no completion clause is falsified at a closed branch".into()))
    }

    /// Derivation whose clause is falsified by the current assignment once
    /// record `n` (not yet applied) is accounted for.
    fn node(&mut self, n: usize) -> Result<Deriv> {
        let rec = &self.proof.records[n];
        let var = self.vars[n];
        let sign = rec.entry.sign;
        let Some(x) = var else {
            // Entries on ⊥: `T⊥` contradicts the root, `F⊥` repeats it.
            return if sign { Ok(Deriv::Leaf(self.falsified(None)?)) } else { self.below(n) };
        };
        match self.value[x as usize] {
            Some(v) if v != sign => return Ok(Deriv::Leaf(self.falsified(None)?)),
            Some(_) => return self.below(n),
            None => {}
        }
        self.value[x as usize] = Some(sign);
        let main = self.below(n);
        self.value[x as usize] = None;
        let main = main?;
        let bad = Lit::new(x, sign);
        if !main.clause(self.clauses).contains(bad) {
            return Ok(main);
        }
        let other = Deriv::Leaf(self.falsified(Some((x, !sign)))?);
        if !other.clause(self.clauses).contains(!bad) {
            return Ok(other);
        }
        Ok(combine(x, sign, main, other, self.clauses))
    }

    /// Derivation for the branch ending at `n`, with `n` applied.
    fn below(&mut self, n: usize) -> Result<Deriv> {
        let ch = self.children[n].clone();
        match ch.as_slice() {
            [] => Err(Error::Precondition(format!("record {n} is an open leaf"))),
            [c] => self.node(*c),
            [a, b] => {
                let (t, f) = if self.proof.records[*a].entry.sign { (*a, *b) } else { (*b, *a) };
                let x = self.vars[t].ok_or_else(|| Error::Precondition("cut on #bot".into()))?;
                if self.value[x as usize].is_some() {
                    return Err(Error::Precondition("cut on an assigned object".into()));
                }
                self.value[x as usize] = Some(true);
                let dt = self.below(t);
                self.value[x as usize] = Some(false);
                let df = self.below(f);
                self.value[x as usize] = None;
                let (dt, df) = (dt?, df?);
                if !dt.clause(self.clauses).contains(Lit::neg(x)) {
                    return Ok(dt);
                }
                if !df.clause(self.clauses).contains(Lit::pos(x)) {
                    return Ok(df);
                }
                Ok(combine(x, true, dt, df, self.clauses))
            }
            _ => Err(Error::Precondition("malformed proof tree".into())),
        }
    }
}

/// Resolves two derivations on `x`, where `a` was built under `x = sign`.
fn combine(x: u32, sign: bool, a: Deriv, b: Deriv, clauses: &[Clause]) -> Deriv {
    let (pos, neg) = if sign { (b, a) } else { (a, b) };
    let clause = pos.clause(clauses).resolve(neg.clause(clauses), x);
    Deriv::Res { pos: Box::new(pos), neg: Box::new(neg), var: x, clause }
}

fn emit(d: &Deriv, clauses: &[Clause], steps: &mut Vec<Step>, initial: &mut HashMap<usize, usize>) -> usize {
    match d {
        Deriv::Leaf(i) => *initial.entry(*i).or_insert_with(|| {
            steps.push(Step::initial(clauses[*i].clone()));
            steps.len() - 1
        }),
        Deriv::Res { pos, neg, var, clause } => {
            let l = emit(pos, clauses, steps, initial);
            let r = emit(neg, clauses, steps, initial);
            steps.push(Step::resolved(clause.clone(), l, r, Some(*var)));
            steps.len() - 1
        }
    }
}

fn cut_tree_refutation(
    proof: &TableauProof,
    clauses: &[Clause],
    num_vars: u32,
    var_of: impl Fn(&Object) -> Option<u32>,
) -> Result<Vec<Step>> {
    let mut children = vec![Vec::new(); proof.records.len()];
    for (i, r) in proof.records.iter().enumerate().skip(1) {
        children[r.parent.ok_or_else(|| Error::Precondition("record without parent".into()))?].push(i);
    }
    let vars = proof.records.iter().map(|r| var_of(&r.entry.object)).collect();
    let mut tree = CutTree { proof, children, clauses, vars, value: vec![None; num_vars as usize + 1] };
    let d = tree.below(0)?;
    if !d.clause(clauses).is_empty() {
        return Err(Error::Internal("cut tree did not yield the empty clause".into()));
    }
    let mut steps = Vec::new();
    emit(&d, clauses, &mut steps, &mut HashMap::new());
    Ok(steps)
}

fn require_valid(v: Verdict, what: &str) -> Result<()> {
    match v {
        Verdict::Valid => Ok(()),
        other => Err(Error::Precondition(format!("{what}: {other}"))),
    }
}

/// Tree-like resolution refutation of `to_cnf(program)` from a closed
/// tableau of a tight program.
pub fn aspt_to_tres(program: &Program, proof: &TableauProof) -> Result<ResolutionProof> {
    if !proof.extension.is_empty() {
        return Err(Error::Precondition("proof uses extension rules; use easpt_to_eres".into()));
    }
    if !semantics::is_tight(program) {
        return Err(Error::Precondition("program is not tight".into()));
    }
    require_valid(check_tableau_proof(program, proof), "tableau proof")?;
    let (cnf, names) = bridge::to_cnf(program);
    let steps = cut_tree_refutation(proof, cnf.clauses(), cnf.num_vars(), |o| object_var(program, &names, o))?;
    Ok(ResolutionProof { triples: Vec::new(), steps })
}

fn object_var(p: &Program, names: &NameMap, o: &Object) -> Option<u32> {
    match o {
        Object::Atom(a) if a.is_bot() => None,
        Object::Atom(a) => names.atom_var(p, *a),
        Object::Body(b) => names.body_var(p, b),
    }
}

/// Extended resolution refutation of `to_cnf(program)` from a closed
/// extended tableau whose extension is elementary.
pub fn easpt_to_eres(program: &Program, proof: &TableauProof) -> Result<ResolutionProof> {
    if !proof.extension.is_elementary() {
        return Err(Error::Precondition("extension is not elementary".into()));
    }
    if !semantics::is_tight(program) {
        return Err(Error::Precondition("program is not tight".into()));
    }
    require_valid(check_tableau_proof(program, proof), "tableau proof")?;
    let full = program.extended(&proof.extension)?;
    let (cnf, names) = bridge::to_cnf(program);
    let mut atom_var: HashMap<Atom, u32> = HashMap::new();
    for &a in program.atoms() {
        atom_var.insert(a, names.atom_var(program, a).expect("completion covers atoms"));
    }
    let mut body_var: HashMap<Body, u32> = HashMap::new();
    for b in program.bodies() {
        body_var.insert(b.clone(), names.body_var(program, b).expect("completion covers bodies"));
    }
    let mut next = cnf.num_vars();
    let mut triples = Vec::new();
    let n_base = program.rules().len();
    for r in &full.rules()[n_base..] {
        let lit = |l: &DefaultLiteral| -> Result<Lit> {
            let v = *atom_var.get(&l.atom).ok_or_else(|| Error::Internal("extension body over unknown atom".into()))?;
            Ok(Lit::new(v, l.negative))
        };
        let xb = match body_var.get(&r.body) {
            Some(&v) => v,
            None => {
                let lits = r.body.literals();
                let l1 = lit(&lits[0])?;
                let l2 = lit(lits.last().unwrap())?;
                next += 1;
                triples.push(ExtensionTriple::new(next, l1, l2));
                body_var.insert(r.body.clone(), next);
                next
            }
        };
        next += 1;
        triples.push(ExtensionTriple::new(next, Lit::pos(xb), Lit::pos(xb)));
        atom_var.insert(r.head, next);
    }
    let mut clauses: Vec<Clause> = cnf.clauses().to_vec();
    for t in &triples {
        for c in t.clauses() {
            if !clauses.contains(&c) {
                clauses.push(c);
            }
        }
    }
    let var_of = |o: &Object| match o {
        Object::Atom(a) if a.is_bot() => None,
        Object::Atom(a) => atom_var.get(a).copied(),
        Object::Body(b) => body_var.get(b).copied(),
    };
    let steps = cut_tree_refutation(proof, &clauses, next, var_of)?;
    Ok(ResolutionProof { triples, steps })
}

/// Tableau for `to_asp(clauses)` from a tree-like refutation.
pub fn tres_to_aspt(clauses: &ClauseSet, proof: &ResolutionProof) -> Result<TableauProof> {
    require_valid(check_res_proof(clauses, proof), "resolution proof")?;
    if !is_tree_like(proof) {
        return Err(Error::Precondition("resolution proof is not tree-like".into()));
    }
    let (program, names) = bridge::to_asp(clauses);
    let (list, _) = clauses.deduplicated();
    let mut b = ProofBuilder::new(&program, ExtensionSet::new())?;
    let pos: Vec<Atom> = (0..=clauses.num_vars())
        .map(|v| if v == 0 { Atom::BOT } else { program.atom(names.name(NameKind::Pos, v).unwrap()).unwrap() })
        .collect();
    let clause_atom = |c: &Clause| -> Result<Atom> {
        let k = list.iter().position(|x| x == c).ok_or_else(|| Error::Internal("leaf clause not in input".into()))?;
        Ok(program.atom(names.name(NameKind::Clause, k as u32 + 1).unwrap()).unwrap())
    };
    enum Task {
        Visit(usize),
        Reset(crate::tableau::Mark),
        Cut(u32, bool),
    }
    let mut tasks = vec![Task::Visit(proof.steps.len() - 1)];
    while let Some(t) = tasks.pop() {
        match t {
            Task::Reset(m) => b.reset(m),
            Task::Cut(x, sign) => {
                b.cut(sign, Object::Atom(pos[x as usize]))?;
            }
            Task::Visit(s) => {
                let step = &proof.steps[s];
                match step.provenance {
                    Provenance::Initial => {
                        let c = clause_atom(&step.clause)?;
                        close_clause_branch(&mut b, &program, &pos, &step.clause, c)?;
                    }
                    Provenance::Resolved { left, right, pivot } => {
                        let (l, r) = (&proof.steps[left].clause, &proof.steps[right].clause);
                        let x = pivot.unwrap_or_else(|| {
                            l.lits().iter().find(|&&y| r.contains(!y)).map(|y| y.var()).unwrap_or(0)
                        });
                        let (p, n) = if l.contains(Lit::pos(x)) { (left, right) } else { (right, left) };
                        match b.value(&Object::Atom(pos[x as usize])) {
                            Some(true) => tasks.push(Task::Visit(n)),
                            Some(false) => tasks.push(Task::Visit(p)),
                            None => {
                                let m = b.mark();
                                tasks.push(Task::Visit(p));
                                tasks.push(Task::Cut(x, false));
                                tasks.push(Task::Reset(m));
                                tasks.push(Task::Visit(n));
                                tasks.push(Task::Cut(x, true));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(b.finish())
}

/// Closes a branch on which every literal of `clause` is false, through the
/// clause atom `c` and the constraint `:- not c`.
fn close_clause_branch(b: &mut ProofBuilder, program: &Program, pos: &[Atom], clause: &Clause, c: Atom) -> Result<()> {
    for &l in clause.lits() {
        let dl = DefaultLiteral { atom: pos[l.var() as usize], negative: l.is_negative() };
        b.deduce(Entry::body(false, Body::new([dl])), RuleId::F, &[Entry::f(dl)], &[])?;
    }
    let bodies: Vec<Entry> =
        program.head_bodies(c).into_iter().map(|id| Entry::body(false, program.bodies()[id].clone())).collect();
    b.deduce(Entry::atom(false, c), RuleId::HSec, &bodies, &[])?;
    if b.is_closed() {
        return Ok(());
    }
    close_by_constraint(b, c)
}

/// `F⊥ ⟹ F{not c}` by (e), then `Tc` by (c).
pub(crate) fn close_by_constraint(b: &mut ProofBuilder, c: Atom) -> Result<()> {
    let notc = Body::new([DefaultLiteral::neg(c)]);
    b.deduce(Entry::body(false, notc.clone()), RuleId::E, &[Entry::atom(false, Atom::BOT)], &[])?;
    b.deduce(Entry::atom(true, c), RuleId::C, &[Entry::body(false, notc)], &[])?;
    Ok(())
}

fn fresh_name(taken: &dyn Fn(&str) -> bool, base: String) -> String {
    let mut name = base;
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Extended tableau for `to_asp(clauses)` from an extended resolution
/// refutation: triples become rules `a_x ← a_l1, a_l2`, non-input clauses
/// get clause atoms, and a chain `s_i ← c_i, s_{i-1}` is cut in order.
pub fn eres_to_easpt(clauses: &ClauseSet, proof: &ResolutionProof) -> Result<TableauProof> {
    require_valid(check_eres_proof(clauses, proof), "extended resolution proof")?;
    let (program, names) = bridge::to_asp(clauses);
    let (list, _) = clauses.deduplicated();

    let mut used: BTreeSet<String> = program.atoms().iter().map(|&a| program.name(a).to_string()).collect();
    let fresh = |base: String, used: &mut BTreeSet<String>| {
        let n = fresh_name(&|s: &str| used.contains(s), base);
        used.insert(n.clone());
        n
    };
    let mut var_atom: HashMap<u32, String> = HashMap::new();
    for v in 1..=clauses.num_vars() {
        var_atom.insert(v, names.name(NameKind::Pos, v).unwrap().to_string());
    }
    let mut ext = Vec::new();
    let lit_text = |l: Lit, var_atom: &HashMap<u32, String>| {
        let a = &var_atom[&l.var()];
        if l.is_negative() {
            format!("not {a}")
        } else {
            a.clone()
        }
    };
    for t in &proof.triples {
        let name = fresh(format!("a_{}", t.var), &mut used);
        var_atom.insert(t.var, name.clone());
        let (l1, l2) = (lit_text(t.l1, &var_atom), lit_text(t.l2, &var_atom));
        ext.push(ExtRule::new(name, &[l1.as_str(), l2.as_str()]));
    }
    let n = proof.steps.len();
    // Clause atom per distinct clause in the proof.
    let mut catom: HashMap<Clause, String> = HashMap::new();
    for (k, c) in list.iter().enumerate() {
        catom.insert(c.clone(), names.name(NameKind::Clause, k as u32 + 1).unwrap().to_string());
    }
    for s in &proof.steps[..n - 1] {
        if catom.contains_key(&s.clause) {
            continue;
        }
        let name = fresh(format!("cx{}", catom.len() + 1), &mut used);
        for &l in s.clause.lits() {
            ext.push(ExtRule::new(name.clone(), &[lit_text(l, &var_atom).as_str()]));
        }
        catom.insert(s.clause.clone(), name);
    }
    let mut chain = Vec::new();
    for (i, s) in proof.steps[..n - 1].iter().enumerate() {
        let name = fresh(format!("s{}", i + 1), &mut used);
        let c = catom[&s.clause].clone();
        if i == 0 {
            ext.push(ExtRule::new(name.clone(), &[c.as_str()]));
        } else {
            let prev: &String = &chain[i - 1];
            ext.push(ExtRule::new(name.clone(), &[c.as_str(), prev.as_str()]));
        }
        chain.push(name);
    }
    let e = ExtensionSet::from_rules(ext);
    let last = &proof.steps[n - 1];
    if last.provenance == Provenance::Initial {
        // The empty clause is an input clause: `:- not c` with no rule for c.
        let mut b = ProofBuilder::new(&program, e)?;
        let c = b.atom(&catom[&last.clause])?;
        b.deduce(Entry::atom(false, c), RuleId::HSec, &[], &[])?;
        close_by_constraint(&mut b, c)?;
        return Ok(b.finish());
    }
    let plan = ChainPlan { proof, input: list.iter().cloned().collect(), catom, chain, var_atom };
    chain_proof(&program, e, &plan, &mut |b, plan, i, c| {
        let clause = &plan.proof.steps[i].clause;
        if plan.input.contains(clause) {
            return close_by_constraint(b, c);
        }
        let t = plan
            .proof
            .triples
            .iter()
            .find(|t| t.clauses().contains(clause))
            .ok_or_else(|| Error::Internal("initial clause outside input and triples".into()))?;
        close_triple_clause(b, t, clause, &|b: &ProofBuilder, l| plan.lit(b, l))
    })
}

/// A refutation laid out for the chain construction: clause atoms, chain
/// atoms `s_i ← c_i, s_(i-1)` and the atom standing for each variable.
pub(crate) struct ChainPlan<'a> {
    pub proof: &'a ResolutionProof,
    /// Clauses whose branches the caller closes with its own rules.
    pub input: HashSet<Clause>,
    pub catom: HashMap<Clause, String>,
    pub chain: Vec<String>,
    pub var_atom: HashMap<u32, String>,
}

impl ChainPlan<'_> {
    pub fn lit(&self, b: &ProofBuilder, l: Lit) -> Result<DefaultLiteral> {
        let name = self.var_atom.get(&l.var()).ok_or_else(|| Error::Internal(format!("no atom for variable {}", l.var())))?;
        Ok(DefaultLiteral { atom: b.atom(name)?, negative: l.is_negative() })
    }
}

/// Called on the `F s_i` side, after `F c_i`, for input clauses and clauses
/// of extension triples.
pub(crate) type CloseInitial<'a> = dyn FnMut(&mut ProofBuilder, &ChainPlan, usize, Atom) -> Result<()> + 'a;

/// Cuts the chain atoms in order; every `F s_i` side closes by the case for
/// `C_i`, and the last branch closes on the parents of the empty clause.
pub(crate) fn chain_proof(
    program: &Program,
    e: ExtensionSet,
    plan: &ChainPlan,
    close_initial: &mut CloseInitial,
) -> Result<TableauProof> {
    let proof = plan.proof;
    let n = proof.steps.len();
    let mut b = ProofBuilder::new(program, e)?;
    for i in 0..n - 1 {
        let s = b.atom(&plan.chain[i])?;
        let cname = &plan.catom[&proof.steps[i].clause];
        let c = b.atom(cname)?;
        let chain_body = if i == 0 { b.body(&[cname])? } else { b.body(&[cname, &plan.chain[i - 1]])? };
        let prev = if i > 0 { Some(b.atom(&plan.chain[i - 1])?) } else { None };
        let m = b.mark();
        b.cut(false, Object::Atom(s))?;
        b.deduce(Entry::body(false, chain_body.clone()), RuleId::E, &[Entry::atom(false, s)], &[])?;
        let mut prem = vec![Entry::body(false, chain_body.clone())];
        prem.extend(prev.map(|p| Entry::atom(true, p)));
        b.deduce(Entry::atom(false, c), RuleId::C, &prem, &[])?;
        // A repeated clause closes right here against the earlier T c_j.
        if !b.is_closed() {
            close_step(&mut b, plan, i, c, close_initial)?;
        }
        if !b.is_closed() {
            return Err(Error::Internal(format!("branch for step {} did not close", i + 1)));
        }
        b.reset(m);
        b.cut(true, Object::Atom(s))?;
        b.deduce(Entry::body(true, chain_body.clone()), RuleId::ISec, &[Entry::atom(true, s)], &[])?;
        b.deduce(Entry::atom(true, c), RuleId::G, &[Entry::body(true, chain_body)], &[])?;
    }
    if let Provenance::Resolved { left, right, pivot } = proof.steps[n - 1].provenance {
        close_resolvent(&mut b, plan, left, right, pivot)?;
    }
    if !b.is_closed() {
        return Err(Error::Internal("final branch did not close".into()));
    }
    Ok(b.finish())
}

fn close_step(b: &mut ProofBuilder, plan: &ChainPlan, i: usize, c: Atom, close_initial: &mut CloseInitial) -> Result<()> {
    let step = &plan.proof.steps[i];
    if plan.input.contains(&step.clause) {
        return close_initial(b, plan, i, c);
    }
    if falsify_clause(b, plan, &step.clause, c)? {
        return Ok(());
    }
    match step.provenance {
        Provenance::Resolved { left, right, pivot } => close_resolvent(b, plan, left, right, pivot),
        Provenance::Initial => close_initial(b, plan, i, c),
    }
}

/// From `F c`: `F{l}` by (e) and `f l` by (c) for each literal of the
/// clause. Returns whether the branch closed on the way.
pub(crate) fn falsify_clause(b: &mut ProofBuilder, plan: &ChainPlan, clause: &Clause, c: Atom) -> Result<bool> {
    for &l in clause.lits() {
        let dl = plan.lit(b, l)?;
        let body = Body::new([dl]);
        b.deduce(Entry::body(false, body.clone()), RuleId::E, &[Entry::atom(false, c)], &[])?;
        b.deduce(Entry::f(dl), RuleId::C, &[Entry::body(false, body)], &[])?;
        if b.is_closed() {
            return Ok(true);
        }
    }
    Ok(false)
}

type LitFn<'a> = dyn Fn(&ProofBuilder, Lit) -> Result<DefaultLiteral> + 'a;

/// With `T c_j`, `T c_k` on the branch and every other literal of both
/// parents false, (i§) and (g) yield `t a_x` and `f a_x`.
fn close_resolvent(b: &mut ProofBuilder, plan: &ChainPlan, left: usize, right: usize, pivot: Option<u32>) -> Result<()> {
    let (l, r) = (&plan.proof.steps[left].clause, &plan.proof.steps[right].clause);
    let x = pivot.unwrap_or_else(|| l.lits().iter().find(|&&y| r.contains(!y)).map(|y| y.var()).unwrap_or(0));
    for parent in [l, r] {
        if b.is_closed() {
            break;
        }
        let pl = if parent.contains(Lit::pos(x)) { Lit::pos(x) } else { Lit::neg(x) };
        let c = b.atom(&plan.catom[parent])?;
        let dl = plan.lit(b, pl)?;
        let target = Body::new([dl]);
        let mut prem = vec![Entry::atom(true, c)];
        for &o in parent.lits() {
            if o != pl {
                prem.push(Entry::body(false, Body::new([plan.lit(b, o)?])));
            }
        }
        b.deduce(Entry::body(true, target.clone()), RuleId::ISec, &prem, &[])?;
        if b.is_closed() {
            break;
        }
        b.deduce(Entry::t(dl), RuleId::G, &[Entry::body(true, target)], &[])?;
    }
    Ok(())
}

/// Closes the branch of a triple clause whose literals are all false.
pub(crate) fn close_triple_clause(b: &mut ProofBuilder, t: &ExtensionTriple, clause: &Clause, lit: &LitFn) -> Result<()> {
    let x = lit(b, Lit::pos(t.var))?;
    let (l1, l2) = (lit(b, t.l1)?, lit(b, t.l2)?);
    let def = Body::new([l1, l2]);
    if clause.contains(Lit::pos(t.var)) {
        // {x, ¬l1, ¬l2}: t l1, t l2 and F a_x; (b) then (d) gives T a_x.
        let prem: Vec<Entry> = def.literals().iter().map(|&l| Entry::t(l)).collect();
        b.deduce(Entry::body(true, def.clone()), RuleId::B, &prem, &[])?;
        if b.is_closed() {
            return Ok(());
        }
        b.deduce(Entry::atom(true, x.atom), RuleId::D, &[Entry::body(true, def)], &[])?;
    } else {
        // {¬x, l}: T a_x gives T{l1, l2} by (i§) and t l by (g), against f l.
        let l = if clause.contains(t.l1) { l1 } else { l2 };
        b.deduce(Entry::body(true, def.clone()), RuleId::ISec, &[Entry::atom(true, x.atom)], &[])?;
        if b.is_closed() {
            return Ok(());
        }
        b.deduce(Entry::t(l), RuleId::G, &[Entry::body(true, def)], &[])?;
    }
    Ok(())
}
