//! Propagation, cut and search over ASP tableaux.
//!
//! Objects are numbered densely: 0 is ⊥, then the atoms of Π ∪ E, then its
//! bodies. The trail doubles as the FIFO agenda. Local rules fire per
//! processed entry in the order b, f, d, e, c, g, h§, i§; the global rules
//! (†, then ‡) run only once the agenda is empty and only for non-tight
//! programs, where they can add something the local rules cannot.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Entry, ExtensionSet, Object, ProofRecord, RuleId, TableauProof};
use crate::error::{Error, Result};
use crate::program::{Atom, Interpretation, Program};
use crate::semantics;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Full,
    Supported,
    NoMore,
    Smodels,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Full => "full",
            Preset::Supported => "supported",
            Preset::NoMore => "nomore",
            Preset::Smodels => "smodels",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "full" => Preset::Full,
            "supported" => Preset::Supported,
            "nomore" => Preset::NoMore,
            "smodels" => Preset::Smodels,
            _ => return None,
        })
    }

    pub fn rules(self) -> RuleSet {
        match self {
            Preset::Full | Preset::Smodels => RuleSet::ALL,
            Preset::Supported => RuleSet::SUPPORTED,
            Preset::NoMore => RuleSet { h_dag: true, ..RuleSet::SUPPORTED },
        }
    }
}

/// Which global rules are enabled on top of the local rules (b)–(g), (h§), (i§).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet {
    pub h_dag: bool,
    pub i_dag: bool,
    pub h_ddag: bool,
    pub i_ddag: bool,
}

impl RuleSet {
    pub const SUPPORTED: RuleSet = RuleSet { h_dag: false, i_dag: false, h_ddag: false, i_ddag: false };
    pub const ALL: RuleSet = RuleSet { h_dag: true, i_dag: true, h_ddag: true, i_ddag: true };

    fn any(self) -> bool {
        self.h_dag || self.i_dag || self.h_ddag || self.i_ddag
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutScope {
    Atoms,
    AtomsAndBodies,
}

impl CutScope {
    pub fn as_str(self) -> &'static str {
        match self {
            CutScope::Atoms => "atoms",
            CutScope::AtomsAndBodies => "atoms+bodies",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "atoms" => Some(CutScope::Atoms),
            "atoms+bodies" => Some(CutScope::AtomsAndBodies),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    Lex,
    Moms,
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub preset: Preset,
    pub rules: RuleSet,
    pub cut_scope: CutScope,
    pub heuristic: Heuristic,
    pub lookahead: bool,
    pub record_proof: bool,
    pub time_limit: Option<Duration>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig::preset(Preset::Full)
    }
}

impl EngineConfig {
    /// smodels restricts the cut to atoms; the others cut atoms and bodies.
    pub fn preset(preset: Preset) -> Self {
        EngineConfig {
            preset,
            rules: preset.rules(),
            cut_scope: if preset == Preset::Smodels { CutScope::Atoms } else { CutScope::AtomsAndBodies },
            heuristic: Heuristic::Lex,
            lookahead: false,
            record_proof: true,
            time_limit: None,
        }
    }

    pub fn full() -> Self {
        Self::preset(Preset::Full)
    }

    pub fn supported() -> Self {
        Self::preset(Preset::Supported)
    }

    pub fn with_lookahead(mut self, on: bool) -> Self {
        self.lookahead = on;
        self
    }

    pub fn with_heuristic(mut self, h: Heuristic) -> Self {
        self.heuristic = h;
        self
    }

    pub fn with_cut_scope(mut self, s: CutScope) -> Self {
        self.cut_scope = s;
        self
    }

    pub fn with_proof(mut self, on: bool) -> Self {
        self.record_proof = on;
        self
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Cut nodes opened by the search (lookahead assertions excluded).
    pub decisions: u64,
    /// Entries added to branches, cuts included.
    pub entries: u64,
    pub lookahead_probes: u64,
    pub conflicts: u64,
    pub proof_length: Option<usize>,
    pub elapsed: Duration,
}

/// Which semantics a SAT answer refers to. Without the † rules a complete
/// branch of a non-tight program need only be a supported model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Supported,
    Stable,
}

impl Semantics {
    pub fn label(self) -> &'static str {
        match self {
            Semantics::Supported => "supported-model semantics",
            Semantics::Stable => "stable-model semantics",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat { model: Interpretation, semantics: Semantics },
    Unsat { proof: Option<TableauProof> },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

/// A single branch: a root-first chain of records, each the parent of the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub records: Vec<ProofRecord>,
    pub contradictory: bool,
}

impl Branch {
    pub fn root() -> Self {
        Branch { records: TableauProof::root(ExtensionSet::new()).records, contradictory: false }
    }

    /// Sign of the first entry on the branch for `object`.
    pub fn value(&self, object: &Object) -> Option<bool> {
        self.records.iter().find(|r| &r.entry.object == object).map(|r| r.entry.sign)
    }

    pub fn contains(&self, entry: &Entry) -> bool {
        self.records.iter().any(|r| &r.entry == entry)
    }

    fn push(&mut self, entry: Entry, rule: RuleId) {
        let parent = Some(self.records.len() - 1);
        if self.value(&entry.object) == Some(!entry.sign) {
            self.contradictory = true;
        }
        self.records.push(ProofRecord { parent, entry, rule, premises: Vec::new(), witness: Vec::new() });
    }
}

const NONE: u32 = u32::MAX;

/// Static occurrence index of Π ∪ E.
struct Index {
    n_atoms: usize,
    /// `Atom::index()` → object id.
    atom_obj: Vec<u32>,
    /// Object id (atoms only) → atom.
    obj_atom: Vec<Atom>,
    body_lits: Vec<Vec<(u32, bool)>>,
    body_atoms: Vec<Vec<u32>>,
    pos_occ: Vec<Vec<u32>>,
    neg_occ: Vec<Vec<u32>>,
    body_heads: Vec<Vec<u32>>,
    head_bodies: Vec<Vec<u32>>,
    /// Non-⊥ rules as (head object, body index).
    rules: Vec<(u32, u32)>,
    rules_by_head: Vec<Vec<u32>>,
    rules_with_pos: Vec<Vec<u32>>,
    tight: bool,
}

impl Index {
    fn new(p: &Program) -> Self {
        let n_atoms = p.atoms().len();
        let mut atom_obj = vec![NONE; p.symbols().len()];
        atom_obj[0] = 0;
        let mut obj_atom = vec![Atom::BOT];
        for (i, &a) in p.atoms().iter().enumerate() {
            atom_obj[a.index()] = i as u32 + 1;
            obj_atom.push(a);
        }
        let n_obj_atoms = n_atoms + 1;
        let mut pos_occ = vec![Vec::new(); n_obj_atoms];
        let mut neg_occ = vec![Vec::new(); n_obj_atoms];
        let mut body_lits = Vec::with_capacity(p.bodies().len());
        let mut body_atoms = Vec::with_capacity(p.bodies().len());
        for (b, body) in p.bodies().iter().enumerate() {
            let lits: Vec<(u32, bool)> =
                body.literals().iter().map(|l| (atom_obj[l.atom.index()], l.negative)).collect();
            for &(a, neg) in &lits {
                if neg {
                    neg_occ[a as usize].push(b as u32);
                } else {
                    pos_occ[a as usize].push(b as u32);
                }
            }
            body_atoms.push(lits.iter().map(|&(a, _)| a).collect());
            body_lits.push(lits);
        }
        let mut body_heads = vec![Vec::new(); p.bodies().len()];
        let mut head_bodies = vec![Vec::new(); n_obj_atoms];
        let mut rules = Vec::new();
        let mut rules_by_head = vec![Vec::new(); n_obj_atoms];
        let mut rules_with_pos = vec![Vec::new(); n_obj_atoms];
        for (i, r) in p.rules().iter().enumerate() {
            let h = atom_obj[r.head.index()];
            let b = p.rule_body_id(i) as u32;
            body_heads[b as usize].push(h);
            head_bodies[h as usize].push(b);
            if h != 0 {
                let k = rules.len() as u32;
                rules.push((h, b));
                rules_by_head[h as usize].push(k);
                for a in r.body.pos() {
                    rules_with_pos[atom_obj[a.index()] as usize].push(k);
                }
            }
        }
        for v in body_heads.iter_mut().chain(head_bodies.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Index {
            n_atoms,
            atom_obj,
            obj_atom,
            body_lits,
            body_atoms,
            pos_occ,
            neg_occ,
            body_heads,
            head_bodies,
            rules,
            rules_by_head,
            rules_with_pos,
            tight: semantics::is_tight(p),
        }
    }

    fn n_objects(&self) -> usize {
        1 + self.n_atoms + self.body_lits.len()
    }

    fn is_atom(&self, obj: u32) -> bool {
        (obj as usize) <= self.n_atoms
    }

    fn body_obj(&self, b: u32) -> u32 {
        (1 + self.n_atoms) as u32 + b
    }

    fn body_of(&self, obj: u32) -> u32 {
        obj - (1 + self.n_atoms) as u32
    }

    fn object(&self, p: &Program, obj: u32) -> Object {
        if self.is_atom(obj) {
            Object::Atom(self.obj_atom[obj as usize])
        } else {
            Object::Body(p.bodies()[self.body_of(obj) as usize].clone())
        }
    }

    fn object_id(&self, p: &Program, o: &Object) -> Option<u32> {
        match o {
            Object::Atom(a) => self.atom_obj.get(a.index()).copied().filter(|&x| x != NONE),
            Object::Body(b) => p.body_id(b).map(|b| self.body_obj(b as u32)),
        }
    }
}

struct Rec {
    parent: u32,
    obj: u32,
    sign: bool,
    rule: RuleId,
    premises: Vec<u32>,
    witness: Vec<u32>,
}

struct Conflict;
type Step = std::result::Result<(), Conflict>;

const UNASSIGNED: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

fn code(sign: bool) -> u8 {
    if sign {
        TRUE
    } else {
        FALSE
    }
}

struct State {
    val: Vec<u8>,
    rec: Vec<u32>,
    trail: Vec<u32>,
    qhead: usize,
    recording: bool,
    records: Vec<Rec>,
    tip: u32,
    stats: SolveStats,
}

impl State {
    fn new(n: usize, recording: bool) -> Self {
        let mut s = State {
            val: vec![UNASSIGNED; n],
            rec: vec![NONE; n],
            trail: Vec::new(),
            qhead: 0,
            recording,
            records: Vec::new(),
            tip: 0,
            stats: SolveStats::default(),
        };
        s.val[0] = FALSE;
        s.rec[0] = 0;
        s.trail.push(0);
        if recording {
            s.records.push(Rec { parent: NONE, obj: 0, sign: false, rule: RuleId::Root, premises: vec![], witness: vec![] });
        }
        s
    }

    fn is(&self, obj: u32, sign: bool) -> bool {
        self.val[obj as usize] == code(sign)
    }

    fn unassigned(&self, obj: u32) -> bool {
        self.val[obj as usize] == UNASSIGNED
    }

    fn lit_true(&self, a: u32, neg: bool) -> bool {
        self.is(a, !neg)
    }

    fn push_record(&mut self, obj: u32, sign: bool, rule: RuleId, premises: &[u32], witness: &[u32]) {
        if self.recording {
            let premises = premises.iter().map(|&o| self.rec[o as usize]).collect();
            let id = self.records.len() as u32;
            self.records.push(Rec { parent: self.tip, obj, sign, rule, premises, witness: witness.to_vec() });
            self.tip = id;
        }
    }

    /// Adds an entry; an entry opposite to an existing one is recorded and
    /// closes the branch.
    fn derive(&mut self, obj: u32, sign: bool, rule: RuleId, premises: &[u32], witness: &[u32]) -> Step {
        match self.val[obj as usize] {
            UNASSIGNED => {
                self.push_record(obj, sign, rule, premises, witness);
                self.val[obj as usize] = code(sign);
                if self.recording {
                    self.rec[obj as usize] = self.tip;
                }
                self.trail.push(obj);
                self.stats.entries += 1;
                Ok(())
            }
            v if v == code(sign) => Ok(()),
            _ => {
                self.push_record(obj, sign, rule, premises, witness);
                self.stats.entries += 1;
                self.stats.conflicts += 1;
                Err(Conflict)
            }
        }
    }

    fn undo(&mut self, trail_len: usize, tip: u32) {
        while self.trail.len() > trail_len {
            let o = self.trail.pop().unwrap() as usize;
            self.val[o] = UNASSIGNED;
            self.rec[o] = NONE;
        }
        self.qhead = trail_len;
        self.tip = tip;
    }

    // Local rules.

    fn forward_true_body(&mut self, idx: &Index, b: u32) -> Step {
        let bo = idx.body_obj(b);
        if self.is(bo, true) {
            return Ok(());
        }
        if idx.body_lits[b as usize].iter().all(|&(a, n)| self.lit_true(a, n)) {
            self.derive(bo, true, RuleId::B, &idx.body_atoms[b as usize], &[])?;
        }
        Ok(())
    }

    fn backward_false_body(&mut self, idx: &Index, b: u32) -> Step {
        let lits = &idx.body_lits[b as usize];
        let mut open = None;
        for (i, &(a, n)) in lits.iter().enumerate() {
            if !self.lit_true(a, n) {
                if open.is_some() {
                    return Ok(());
                }
                open = Some(i);
            }
        }
        let Some(i) = open else { return Ok(()) };
        let (a, n) = lits[i];
        if !self.unassigned(a) {
            return Ok(());
        }
        let mut prem = Vec::with_capacity(lits.len());
        prem.push(idx.body_obj(b));
        prem.extend(lits.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(x, _))| x));
        self.derive(a, n, RuleId::C, &prem, &[])
    }

    fn forward_false_atom(&mut self, idx: &Index, h: u32) -> Step {
        if h == 0 || self.is(h, false) {
            return Ok(());
        }
        let bodies = &idx.head_bodies[h as usize];
        if bodies.iter().all(|&b| self.is(idx.body_obj(b), false)) {
            let prem: Vec<u32> = bodies.iter().map(|&b| idx.body_obj(b)).collect();
            self.derive(h, false, RuleId::HSec, &prem, &[])?;
        }
        Ok(())
    }

    fn backward_true_atom(&mut self, idx: &Index, h: u32) -> Step {
        if !self.is(h, true) {
            return Ok(());
        }
        let bodies = &idx.head_bodies[h as usize];
        let mut open = None;
        for (i, &b) in bodies.iter().enumerate() {
            if !self.is(idx.body_obj(b), false) {
                if open.is_some() {
                    return Ok(());
                }
                open = Some(i);
            }
        }
        let Some(i) = open else { return Ok(()) };
        let target = idx.body_obj(bodies[i]);
        if !self.unassigned(target) {
            return Ok(());
        }
        let mut prem = Vec::with_capacity(bodies.len());
        prem.push(h);
        prem.extend(bodies.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &b)| idx.body_obj(b)));
        self.derive(target, true, RuleId::ISec, &prem, &[])
    }

    fn process(&mut self, idx: &Index, obj: u32) -> Step {
        let sign = self.is(obj, true);
        if idx.is_atom(obj) {
            let a = obj as usize;
            let (same, other) = if sign { (&idx.pos_occ[a], &idx.neg_occ[a]) } else { (&idx.neg_occ[a], &idx.pos_occ[a]) };
            for &b in same {
                self.forward_true_body(idx, b)?;
            }
            for &b in other {
                self.derive(idx.body_obj(b), false, RuleId::F, &[obj], &[])?;
            }
            if !sign {
                for &b in &idx.head_bodies[a] {
                    self.derive(idx.body_obj(b), false, RuleId::E, &[obj], &[])?;
                }
            }
            for &b in same {
                if self.is(idx.body_obj(b), false) {
                    self.backward_false_body(idx, b)?;
                }
            }
            if sign {
                self.backward_true_atom(idx, obj)?;
            }
        } else {
            let b = idx.body_of(obj);
            if sign {
                for &h in &idx.body_heads[b as usize] {
                    self.derive(h, true, RuleId::D, &[obj], &[])?;
                }
                for &(a, n) in &idx.body_lits[b as usize] {
                    self.derive(a, !n, RuleId::G, &[obj], &[])?;
                }
            } else {
                self.backward_false_body(idx, b)?;
                for &h in &idx.body_heads[b as usize] {
                    self.forward_false_atom(idx, h)?;
                }
                for &h in &idx.body_heads[b as usize] {
                    self.backward_true_atom(idx, h)?;
                }
            }
        }
        Ok(())
    }

    fn local(&mut self, idx: &Index) -> Step {
        while self.qhead < self.trail.len() {
            let obj = self.trail[self.qhead];
            self.qhead += 1;
            self.process(idx, obj)?;
        }
        Ok(())
    }

    // Global rules.

    fn body_false(&self, idx: &Index, b: u32, skip: Option<u32>) -> bool {
        skip == Some(b) || self.is(idx.body_obj(b), false)
    }

    /// Atoms derivable from rules whose body is not false (and not `skip`).
    fn founded(&self, idx: &Index, skip: Option<u32>) -> Vec<bool> {
        let mut founded = vec![false; 1 + idx.n_atoms];
        let mut missing: Vec<u32> = Vec::with_capacity(idx.rules.len());
        let mut queue = Vec::new();
        for &(h, b) in &idx.rules {
            let n = idx.body_lits[b as usize].iter().filter(|&&(_, neg)| !neg).count() as u32;
            missing.push(n);
            if n == 0 && !self.body_false(idx, b, skip) && !founded[h as usize] {
                founded[h as usize] = true;
                queue.push(h);
            }
        }
        while let Some(a) = queue.pop() {
            for &k in &idx.rules_with_pos[a as usize] {
                missing[k as usize] -= 1;
                let (h, b) = idx.rules[k as usize];
                if missing[k as usize] == 0 && !founded[h as usize] && !self.body_false(idx, b, skip) {
                    founded[h as usize] = true;
                    queue.push(h);
                }
            }
        }
        founded
    }

    /// The part of the unfounded set `u` reachable from `h` through rules
    /// whose body is not false; it is itself unfounded.
    fn witness(&self, idx: &Index, u: &[bool], h: u32, skip: Option<u32>) -> Vec<u32> {
        let mut seen = vec![false; 1 + idx.n_atoms];
        let mut stack = vec![h];
        seen[h as usize] = true;
        let mut out = Vec::new();
        while let Some(g) = stack.pop() {
            out.push(g);
            for &k in &idx.rules_by_head[g as usize] {
                let b = idx.rules[k as usize].1;
                if self.body_false(idx, b, skip) {
                    continue;
                }
                for &(a, neg) in &idx.body_lits[b as usize] {
                    if !neg && u[a as usize] && !seen[a as usize] {
                        seen[a as usize] = true;
                        stack.push(a);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// eb(set) as body indices.
    fn external(&self, idx: &Index, set: &[u32]) -> Vec<u32> {
        let mut inset = vec![false; 1 + idx.n_atoms];
        for &a in set {
            inset[a as usize] = true;
        }
        let mut out = Vec::new();
        for &g in set {
            for &k in &idx.rules_by_head[g as usize] {
                let b = idx.rules[k as usize].1;
                if idx.body_lits[b as usize].iter().all(|&(a, neg)| neg || !inset[a as usize]) {
                    out.push(b);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Returns whether anything was derived.
    fn well_founded_negation(&mut self, idx: &Index) -> std::result::Result<bool, Conflict> {
        let founded = self.founded(idx, None);
        let u: Vec<bool> = (0..=idx.n_atoms).map(|a| a > 0 && !founded[a] && !self.is(a as u32, false)).collect();
        let targets: Vec<u32> = (1..=idx.n_atoms as u32).filter(|&a| u[a as usize]).collect();
        for &h in &targets {
            if self.is(h, false) {
                continue;
            }
            let w = self.witness(idx, &u, h, None);
            let prem: Vec<u32> = self.external(idx, &w).into_iter().map(|b| idx.body_obj(b)).collect();
            self.derive(h, false, RuleId::HDag, &prem, &w)?;
        }
        Ok(!targets.is_empty())
    }

    fn well_founded_justification(&mut self, idx: &Index) -> std::result::Result<bool, Conflict> {
        let mut any = false;
        for b in 0..idx.body_lits.len() as u32 {
            let bo = idx.body_obj(b);
            if !self.unassigned(bo) || idx.body_heads[b as usize].iter().all(|&h| h == 0) {
                continue;
            }
            let founded = self.founded(idx, Some(b));
            let Some(h) = (1..=idx.n_atoms as u32).find(|&a| self.is(a, true) && !founded[a as usize]) else {
                continue;
            };
            let u: Vec<bool> = (0..=idx.n_atoms).map(|a| a > 0 && !founded[a] && !self.is(a as u32, false)).collect();
            let w = self.witness(idx, &u, h, Some(b));
            let mut prem = vec![h];
            prem.extend(self.external(idx, &w).into_iter().filter(|&x| x != b).map(|x| idx.body_obj(x)));
            self.derive(bo, true, RuleId::IDag, &prem, &w)?;
            any = true;
        }
        Ok(any)
    }

    fn loops(&mut self, idx: &Index, p: &Program, rules: RuleSet) -> std::result::Result<bool, Conflict> {
        let comps = semantics::cyclic_components_of(p, |i| {
            let b = p.rule_body_id(i) as u32;
            !self.is(idx.body_obj(b), false)
        });
        let mut any = false;
        for comp in comps {
            let set: Vec<u32> = comp.iter().map(|a| idx.atom_obj[a.index()]).collect();
            let eb = self.external(idx, &set);
            let open: Vec<u32> = eb.iter().copied().filter(|&b| !self.is(idx.body_obj(b), false)).collect();
            let prem_all: Vec<u32> = eb.iter().map(|&b| idx.body_obj(b)).collect();
            if rules.h_ddag && open.is_empty() {
                for &h in &set {
                    if !self.is(h, false) {
                        self.derive(h, false, RuleId::HDdag, &prem_all, &set)?;
                        any = true;
                    }
                }
            } else if rules.i_ddag && open.len() == 1 && self.unassigned(idx.body_obj(open[0])) {
                if let Some(&h) = set.iter().find(|&&h| self.is(h, true)) {
                    let mut prem = vec![h];
                    prem.extend(eb.iter().filter(|&&b| b != open[0]).map(|&b| idx.body_obj(b)));
                    self.derive(idx.body_obj(open[0]), true, RuleId::IDdag, &prem, &set)?;
                    any = true;
                }
            }
        }
        Ok(any)
    }
}

struct Engine<'p> {
    program: &'p Program,
    idx: Index,
    st: State,
    config: EngineConfig,
    global: bool,
    scope: Vec<u32>,
    rng: ChaCha8Rng,
    deadline: Option<Instant>,
    started: bool,
}

enum Search {
    Sat,
    Unsat,
    Timeout,
}

impl<'p> Engine<'p> {
    fn new(program: &'p Program, config: EngineConfig) -> Self {
        let idx = Index::new(program);
        let st = State::new(idx.n_objects(), config.record_proof);
        let global = config.rules.any() && !idx.tight;
        let n_scope = match config.cut_scope {
            CutScope::Atoms => 1 + idx.n_atoms,
            CutScope::AtomsAndBodies => idx.n_objects(),
        };
        let scope = (1..n_scope as u32).collect();
        let seed = match config.heuristic {
            Heuristic::Random(s) => s,
            _ => 0,
        };
        let deadline = config.time_limit.map(|d| Instant::now() + d);
        Engine { program, idx, st, config, global, scope, rng: ChaCha8Rng::seed_from_u64(seed), deadline, started: false }
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Entries that hold without premises: atoms without rules, the empty body.
    fn seed(&mut self) -> Step {
        let (idx, st) = (&self.idx, &mut self.st);
        for h in 1..=idx.n_atoms as u32 {
            if idx.head_bodies[h as usize].is_empty() {
                st.derive(h, false, RuleId::HSec, &[], &[])?;
            }
        }
        for b in 0..idx.body_lits.len() as u32 {
            if idx.body_lits[b as usize].is_empty() {
                st.derive(idx.body_obj(b), true, RuleId::B, &[], &[])?;
            }
        }
        Ok(())
    }

    fn propagate(&mut self) -> Step {
        if !self.started {
            self.started = true;
            self.seed()?;
        }
        loop {
            self.st.local(&self.idx)?;
            if !self.global {
                return Ok(());
            }
            let rules = self.config.rules;
            let (idx, st) = (&self.idx, &mut self.st);
            if rules.h_dag && st.well_founded_negation(idx)? {
                continue;
            }
            if rules.i_dag && st.well_founded_justification(idx)? {
                continue;
            }
            if (rules.h_ddag || rules.i_ddag) && st.loops(idx, self.program, rules)? {
                continue;
            }
            return Ok(());
        }
    }

    fn choose(&mut self) -> Option<u32> {
        match self.config.heuristic {
            Heuristic::Lex => self.scope.iter().copied().find(|&o| self.st.unassigned(o)),
            Heuristic::Random(_) => {
                let open: Vec<u32> = self.scope.iter().copied().filter(|&o| self.st.unassigned(o)).collect();
                if open.is_empty() {
                    None
                } else {
                    Some(open[self.rng.gen_range(0..open.len())])
                }
            }
            Heuristic::Moms => self.moms().or_else(|| self.scope.iter().copied().find(|&o| self.st.unassigned(o))),
        }
    }

    /// The unassigned atom occurring most often in the open bodies of
    /// minimum open size.
    fn moms(&self) -> Option<u32> {
        let (idx, st) = (&self.idx, &self.st);
        let mut best = usize::MAX;
        let mut counts = vec![0u32; 1 + idx.n_atoms];
        for b in 0..idx.body_lits.len() as u32 {
            if !st.unassigned(idx.body_obj(b)) {
                continue;
            }
            let open = idx.body_lits[b as usize].iter().filter(|&&(a, _)| st.unassigned(a)).count();
            if open == 0 || open > best {
                continue;
            }
            if open < best {
                best = open;
                counts.iter_mut().for_each(|c| *c = 0);
            }
            for &(a, _) in &idx.body_lits[b as usize] {
                if st.unassigned(a) {
                    counts[a as usize] += 1;
                }
            }
        }
        let mut pick = None;
        let mut top = 0;
        for a in 1..=idx.n_atoms {
            if counts[a] > top {
                top = counts[a];
                pick = Some(a as u32);
            }
        }
        pick
    }

    /// Failed-literal probing over the cut scope until nothing changes.
    fn lookahead(&mut self) -> std::result::Result<Step, ()> {
        loop {
            let mut changed = false;
            for i in 0..self.scope.len() {
                let obj = self.scope[i];
                if !self.st.unassigned(obj) {
                    continue;
                }
                for sign in [true, false] {
                    if self.st.stats.lookahead_probes % 64 == 0 && self.timed_out() {
                        return Err(());
                    }
                    self.st.stats.lookahead_probes += 1;
                    let (trail_len, tip, n_rec) = (self.st.trail.len(), self.st.tip, self.st.records.len());
                    let failed = self.st.derive(obj, sign, RuleId::Cut, &[], &[]).and_then(|_| self.propagate()).is_err();
                    self.st.undo(trail_len, tip);
                    if failed {
                        if self.st.derive(obj, !sign, RuleId::Cut, &[], &[]).and_then(|_| self.propagate()).is_err() {
                            return Ok(Err(Conflict));
                        }
                        changed = true;
                        break;
                    }
                    self.st.records.truncate(n_rec);
                }
            }
            if !changed {
                return Ok(Ok(()));
            }
        }
    }

    fn search(&mut self) -> Search {
        struct Frame {
            trail_len: usize,
            tip: u32,
            obj: u32,
            flipped: bool,
        }
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            let mut ok = self.propagate().is_ok();
            if ok && self.config.lookahead {
                match self.lookahead() {
                    Err(()) => return Search::Timeout,
                    Ok(r) => ok = r.is_ok(),
                }
            }
            if ok {
                let Some(obj) = self.choose() else { return Search::Sat };
                if self.st.stats.decisions % 256 == 0 && self.timed_out() {
                    return Search::Timeout;
                }
                self.st.stats.decisions += 1;
                stack.push(Frame { trail_len: self.st.trail.len(), tip: self.st.tip, obj, flipped: false });
                let _ = self.st.derive(obj, true, RuleId::Cut, &[], &[]);
                continue;
            }
            loop {
                let Some(fr) = stack.last_mut() else { return Search::Unsat };
                if fr.flipped {
                    stack.pop();
                    continue;
                }
                fr.flipped = true;
                let (trail_len, tip, obj) = (fr.trail_len, fr.tip, fr.obj);
                self.st.undo(trail_len, tip);
                let _ = self.st.derive(obj, false, RuleId::Cut, &[], &[]);
                break;
            }
        }
    }

    fn model(&self, original: &Program) -> Interpretation {
        Interpretation::new(
            original
                .atoms()
                .iter()
                .copied()
                .filter(|a| self.st.is(self.idx.atom_obj[a.index()], true)),
        )
    }

    fn proof_records(&self) -> Vec<ProofRecord> {
        self.st
            .records
            .iter()
            .map(|r| ProofRecord {
                parent: (r.parent != NONE).then_some(r.parent as usize),
                entry: Entry::new(r.sign, self.idx.object(self.program, r.obj)),
                rule: r.rule,
                premises: r.premises.iter().map(|&p| p as usize).collect(),
                witness: r.witness.iter().map(|&a| self.idx.obj_atom[a as usize]).collect(),
            })
            .collect()
    }
}

/// Searches for a complete non-contradictory branch of Π ∪ E. An UNSAT
/// answer carries the closed tableau when proof recording is on.
pub fn solve(program: &Program, e: &ExtensionSet, config: &EngineConfig) -> Result<Solution> {
    let start = Instant::now();
    let full = program.extended(e)?;
    let mut engine = Engine::new(&full, config.clone());
    let result = engine.search();
    let mut stats = std::mem::take(&mut engine.st.stats);
    stats.elapsed = start.elapsed();
    let outcome = match result {
        Search::Sat => {
            let semantics = if engine.idx.tight || (config.rules.h_dag || config.rules.h_ddag) {
                Semantics::Stable
            } else {
                Semantics::Supported
            };
            Outcome::Sat { model: engine.model(program), semantics }
        }
        Search::Unsat => {
            let proof = config.record_proof.then(|| TableauProof { records: engine.proof_records(), extension: e.clone() });
            stats.proof_length = proof.as_ref().map(super::proof_length);
            Outcome::Unsat { proof }
        }
        Search::Timeout => Outcome::Unknown,
    };
    Ok(Solution { outcome, stats })
}

/// All stable models of `program`, found by solving repeatedly with a
/// constraint blocking each model found so far. `None` when there are more
/// than `limit` models or the time limit hits.
pub fn enumerate_models(program: &Program, config: &EngineConfig, limit: usize) -> Result<Option<Vec<Interpretation>>> {
    let cfg = config.clone().with_proof(false);
    if !(cfg.rules.h_dag || cfg.rules.h_ddag || semantics::is_tight(program)) {
        return Err(Error::Precondition("enumeration needs the unfounded-set rules on non-tight programs".into()));
    }
    let mut rules = program.rules().to_vec();
    let mut models = Vec::new();
    loop {
        let p = program.with_rules(rules.clone());
        match solve(&p, &ExtensionSet::new(), &cfg)?.outcome {
            Outcome::Unsat { .. } => return Ok(Some(models)),
            Outcome::Unknown => return Ok(None),
            Outcome::Sat { model, .. } => {
                if models.len() == limit {
                    return Ok(None);
                }
                let block = program
                    .atoms()
                    .iter()
                    .map(|&a| if model.0.contains(&a) { crate::program::DefaultLiteral::pos(a) } else { crate::program::DefaultLiteral::neg(a) });
                rules.push(crate::program::Rule::new(Atom::BOT, crate::program::Body::new(block)));
                models.push(model);
            }
        }
    }
}

/// Closes `branch` under the enabled deduction rules. The branch's own
/// entries are taken as given.
pub fn propagate(program: &Program, e: &ExtensionSet, branch: &Branch, config: &EngineConfig) -> Result<Branch> {
    let full = program.extended(e)?;
    let mut engine = Engine::new(&full, config.clone().with_proof(true));
    let mut closed = branch.contradictory;
    for r in branch.records.iter().skip(1) {
        if closed {
            break;
        }
        let obj = engine
            .idx
            .object_id(&full, &r.entry.object)
            .ok_or_else(|| Error::Input(format!("entry {} is not over Π ∪ E", r.entry.text(&full))))?;
        let st = &mut engine.st;
        match st.val[obj as usize] {
            UNASSIGNED => {
                let id = st.records.len() as u32;
                st.records.push(Rec {
                    parent: st.tip,
                    obj,
                    sign: r.entry.sign,
                    rule: r.rule,
                    premises: r.premises.iter().map(|&p| p as u32).collect(),
                    witness: r.witness.iter().map(|a| engine.idx.atom_obj[a.index()]).collect(),
                });
                st.tip = id;
                st.val[obj as usize] = code(r.entry.sign);
                st.rec[obj as usize] = id;
                st.trail.push(obj);
            }
            v if v == code(r.entry.sign) => {}
            _ => closed = true,
        }
    }
    if closed {
        return Ok(branch.clone());
    }
    let contradictory = engine.propagate().is_err();
    Ok(Branch { records: engine.proof_records(), contradictory })
}

/// The two children of a cut on `object`.
pub fn cut(
    program: &Program,
    e: &ExtensionSet,
    branch: &Branch,
    object: Object,
    scope: CutScope,
) -> Result<(Branch, Branch)> {
    let full = program.extended(e)?;
    let in_scope = match &object {
        Object::Atom(a) => full.contains_atom(*a),
        Object::Body(b) => scope == CutScope::AtomsAndBodies && full.body_id(b).is_some(),
    };
    if !in_scope {
        return Err(Error::Cut(format!("{} is outside the cut scope", object.text(&full))));
    }
    if branch.value(&object).is_some() {
        return Err(Error::Cut(format!("{} is already assigned", object.text(&full))));
    }
    let mut t = branch.clone();
    t.push(Entry::new(true, object.clone()), RuleId::Cut);
    let mut f = branch.clone();
    f.push(Entry::new(false, object), RuleId::Cut);
    Ok((t, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{pi0, pi1};

    fn atom_entry(p: &Program, sign: bool, name: &str) -> Entry {
        Entry::atom(sign, p.atom(name).unwrap())
    }

    #[test]
    fn pi0_is_unsat_with_a_decision() {
        let p = pi0();
        let cfg = EngineConfig::full();
        let sol = solve(&p, &ExtensionSet::new(), &cfg).unwrap();
        assert!(matches!(sol.outcome, Outcome::Unsat { proof: Some(_) }));
        assert!(sol.stats.decisions >= 1);
    }

    #[test]
    fn pi0_with_lookahead_needs_no_decision() {
        let cfg = EngineConfig::full().with_lookahead(true);
        let sol = solve(&pi0(), &ExtensionSet::new(), &cfg).unwrap();
        assert!(matches!(sol.outcome, Outcome::Unsat { .. }));
        assert_eq!(sol.stats.decisions, 0);
    }

    #[test]
    fn pi1_supported_versus_full() {
        let p = pi1();
        let sol = solve(&p, &ExtensionSet::new(), &EngineConfig::supported()).unwrap();
        match sol.outcome {
            Outcome::Sat { model, semantics } => {
                assert_eq!(p.names_of(&model), vec!["a", "b"]);
                assert_eq!(semantics, Semantics::Supported);
            }
            other => panic!("expected a supported model, got {other:?}"),
        }
        let sol = solve(&p, &ExtensionSet::new(), &EngineConfig::full()).unwrap();
        assert!(matches!(sol.outcome, Outcome::Unsat { .. }));
        assert_eq!(sol.stats.decisions, 0);
    }

    #[test]
    fn pi1_propagation_at_the_root() {
        let p = pi1();
        let full = propagate(&p, &ExtensionSet::new(), &Branch::root(), &EngineConfig::full()).unwrap();
        assert!(full.contradictory);
        assert!(full.contains(&atom_entry(&p, true, "a")));
        assert!(full.records.iter().any(|r| r.rule == RuleId::HDag));
        let sup = propagate(&p, &ExtensionSet::new(), &Branch::root(), &EngineConfig::supported()).unwrap();
        assert!(!sup.contradictory);
        assert!(sup.contains(&atom_entry(&p, true, "a")));
        assert!(sup.contains(&atom_entry(&p, true, "b")));
    }

    #[test]
    fn pi0_cut_on_a_then_propagate() {
        let p = pi0();
        let e = ExtensionSet::new();
        let a = Object::Atom(p.atom("a").unwrap());
        let (t, f) = cut(&p, &e, &Branch::root(), a.clone(), CutScope::Atoms).unwrap();
        assert_eq!(t.value(&a), Some(true));
        assert_eq!(f.value(&a), Some(false));
        let t = propagate(&p, &e, &t, &EngineConfig::full()).unwrap();
        assert!(t.contradictory);
        let ba = p.bodies().iter().find(|b| b.len() == 2).unwrap().clone();
        assert!(t.contains(&Entry::body(false, ba)));
        assert!(cut(&p, &e, &t, a, CutScope::Atoms).is_err());
    }

    #[test]
    fn choice_program_has_stable_models() {
        let p = Program::builder().rule(Some("a"), &["not b"]).rule(Some("b"), &["not a"]).build();
        let sol = solve(&p, &ExtensionSet::new(), &EngineConfig::full()).unwrap();
        match sol.outcome {
            Outcome::Sat { model, semantics } => {
                assert!(crate::semantics::is_stable(&p, &model).unwrap());
                assert_eq!(semantics, Semantics::Stable);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_program_is_sat_with_empty_model() {
        let p = Program::empty();
        let sol = solve(&p, &ExtensionSet::new(), &EngineConfig::full()).unwrap();
        assert!(matches!(sol.outcome, Outcome::Sat { ref model, .. } if model.0.is_empty()));
    }

    #[test]
    fn body_cut_outside_atom_scope_is_rejected() {
        let p = pi0();
        let b = Object::Body(p.bodies()[0].clone());
        assert!(cut(&p, &ExtensionSet::new(), &Branch::root(), b, CutScope::Atoms).is_err());
    }
}
