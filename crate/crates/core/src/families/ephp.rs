//! The extended pigeonhole family: an extended resolution refutation of the
//! clausal pigeonhole principle that reduces `n + 1` pigeons in `n` holes
//! one level at a time, and the program and tableau proof built from it.

use std::collections::{HashMap, HashSet};

use super::{e, gen_ext_layers, gen_php, p};
use crate::cnf::{Clause, ClauseSet, Lit};
use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Program};
use crate::proofkit::{chain_proof, close_triple_clause, falsify_clause, ChainPlan, ExtensionTriple, ResolutionProof, Step};
use crate::tableau::{Entry, ExtRule, ExtensionSet, ProofBuilder, RuleId, TableauProof};

/// An extended resolution refutation of [`php_clauses`], with a name for
/// every variable (index `v - 1`), including the extension variables.
#[derive(Clone, Debug)]
pub struct PhpEres {
    pub n: usize,
    pub clauses: ClauseSet,
    pub proof: ResolutionProof,
    pub var_names: Vec<String>,
}

impl PhpEres {
    pub fn name(&self, var: u32) -> &str {
        &self.var_names[var as usize - 1]
    }

    fn lit_text(&self, l: Lit) -> String {
        if l.is_negative() {
            format!("not {}", self.name(l.var()))
        } else {
            self.name(l.var()).to_string()
        }
    }
}

fn pvar(n: usize, i: usize, j: usize) -> u32 {
    ((i - 1) * n + j) as u32
}

/// `{p_i1, ..., p_in}` per pigeon, then `{¬p_ik, ¬p_jk}` per hole and pair.
pub fn php_clauses(n: usize) -> Result<ClauseSet> {
    if n < 1 {
        return Err(Error::Input("family size must be at least 1".into()));
    }
    let mut clauses = Vec::new();
    for i in 1..=n + 1 {
        clauses.push(Clause::new((1..=n).map(|j| Lit::pos(pvar(n, i, j)))));
    }
    for k in 1..=n {
        for i in 1..=n + 1 {
            for j in i + 1..=n + 1 {
                clauses.push(Clause::new([Lit::neg(pvar(n, i, k)), Lit::neg(pvar(n, j, k))]));
            }
        }
    }
    let names = (1..=n + 1).flat_map(|i| (1..=n).map(move |j| p(i, j))).collect();
    Ok(ClauseSet::new(((n + 1) * n) as u32, clauses).with_names(names))
}

#[derive(Default)]
struct Steps {
    steps: Vec<Step>,
    initial: HashMap<Clause, usize>,
}

impl Steps {
    fn init(&mut self, c: Clause) -> usize {
        if let Some(&i) = self.initial.get(&c) {
            return i;
        }
        self.steps.push(Step::initial(c.clone()));
        self.initial.insert(c, self.steps.len() - 1);
        self.steps.len() - 1
    }

    fn res(&mut self, a: usize, b: usize, var: u32) -> usize {
        let (ca, cb) = (&self.steps[a].clause, &self.steps[b].clause);
        let c = if ca.contains(Lit::pos(var)) { ca.resolve(cb, var) } else { cb.resolve(ca, var) };
        self.steps.push(Step::resolved(c, a, b, Some(var)));
        self.steps.len() - 1
    }
}

/// Level `L` has pigeons `1..=L` and holes `1..L`; its variables are
/// `e^L_ij ≡ q_ij ∨ (q_iL ∧ q_(L+1)j)` over level `L + 1`, written with
/// three triples `y ≡ q_iL ∧ q_(L+1)j`, `z ≡ ¬q_ij ∧ ¬y`, `e ≡ ¬z ∧ ¬z`.
/// Pigeon clauses of level `L` take `2L` steps each, hole clauses 8.
pub fn php_eres_proof(n: usize) -> Result<PhpEres> {
    let clauses = php_clauses(n)?;
    let mut names: Vec<String> = clauses.names().to_vec();
    let mut q: HashMap<(usize, usize, usize), u32> = HashMap::new();
    for i in 1..=n + 1 {
        for j in 1..=n {
            q.insert((n + 1, i, j), pvar(n, i, j));
        }
    }
    let mut triples = Vec::new();
    let mut s = Steps::default();
    // Clauses of the current level: pigeon i, and hole (i, j, k) with i < j.
    let mut pigeon: HashMap<usize, usize> = HashMap::new();
    let mut hole: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut top = true;
    let get_pigeon = |s: &mut Steps, pigeon: &HashMap<usize, usize>, top: bool, lv: usize, i: usize, qv: &HashMap<_, u32>| {
        if top {
            s.init(Clause::new((1..lv).map(|j| Lit::pos(qv[&(lv, i, j)]))))
        } else {
            pigeon[&i]
        }
    };
    let get_hole = |s: &mut Steps, hole: &HashMap<(usize, usize, usize), usize>, top: bool, lv: usize, a: usize, b: usize, k: usize, qv: &HashMap<_, u32>| {
        if top {
            s.init(Clause::new([Lit::neg(qv[&(lv, a, k)]), Lit::neg(qv[&(lv, b, k)])]))
        } else {
            hole[&(a, b, k)]
        }
    };
    for l in (2..=n).rev() {
        let up = l + 1;
        let qv = |q: &HashMap<(usize, usize, usize), u32>, i: usize, j: usize| q[&(up, i, j)];
        // Triples and the derived definition clauses per (i, j).
        let mut d1 = HashMap::new();
        let mut d2b = HashMap::new();
        let mut d4 = HashMap::new();
        let mut d4b = HashMap::new();
        for i in 1..=l {
            for j in 1..l {
                let (qij, a, b) = (qv(&q, i, j), qv(&q, i, l), qv(&q, up, j));
                let y = names.len() as u32 + 1;
                names.push(format!("y{l}_{i}_{j}"));
                let z = y + 1;
                names.push(format!("z{l}_{i}_{j}"));
                let ev = z + 1;
                names.push(e(n, l, i, j));
                q.insert((l, i, j), ev);
                let ty = ExtensionTriple::new(y, Lit::pos(a), Lit::pos(b));
                let tz = ExtensionTriple::new(z, Lit::neg(qij), Lit::neg(y));
                let te = ExtensionTriple::new(ev, Lit::neg(z), Lit::neg(z));
                triples.extend([ty, tz, te]);
                let [y_def, y_a, y_b] = ty.clauses();
                let [z_def, z_q, z_y] = tz.clauses();
                let [e_z, not_e, _] = te.clauses();
                let (ez, zq, zy) = (s.init(e_z), s.init(z_q), s.init(z_y));
                d1.insert((i, j), s.res(ez, zq, z));
                let d2 = s.res(ez, zy, z);
                let yd = s.init(y_def);
                d2b.insert((i, j), s.res(yd, d2, y));
                let (zd, ne) = (s.init(z_def), s.init(not_e));
                let d3 = s.res(zd, ne, z);
                let (ya, yb) = (s.init(y_a), s.init(y_b));
                d4.insert((i, j), s.res(d3, ya, y));
                d4b.insert((i, j), s.res(d3, yb, y));
            }
        }
        let mut next_pigeon = HashMap::new();
        for i in 1..=l {
            let mut cur = get_pigeon(&mut s, &pigeon, top, up, i, &q);
            for j in 1..l {
                cur = s.res(cur, d1[&(i, j)], qv(&q, i, j));
            }
            let last = get_pigeon(&mut s, &pigeon, top, up, up, &q);
            let h = get_hole(&mut s, &hole, top, up, i, up, l, &q);
            let mut other = s.res(last, h, qv(&q, up, l));
            for j in 1..l {
                other = s.res(other, d2b[&(i, j)], qv(&q, up, j));
            }
            next_pigeon.insert(i, s.res(cur, other, qv(&q, i, l)));
        }
        let mut next_hole = HashMap::new();
        for k in 1..l {
            for i in 1..=l {
                for j in i + 1..=l {
                    let h_j_up = get_hole(&mut s, &hole, top, up, j, up, k, &q);
                    let a1 = s.res(d4b[&(i, k)], h_j_up, qv(&q, up, k));
                    let h_ij = get_hole(&mut s, &hole, top, up, i, j, k, &q);
                    let a = s.res(a1, h_ij, qv(&q, i, k));
                    let h_i_up = get_hole(&mut s, &hole, top, up, i, up, k, &q);
                    let b1 = s.res(d4b[&(j, k)], h_i_up, qv(&q, up, k));
                    let bb = s.res(b1, a, qv(&q, j, k));
                    let c = s.res(d4[&(i, k)], bb, qv(&q, i, k));
                    let h_ij_l = get_hole(&mut s, &hole, top, up, i, j, l, &q);
                    let d1_ = s.res(d4[&(j, k)], h_ij_l, qv(&q, j, l));
                    let d = s.res(d1_, a, qv(&q, j, k));
                    next_hole.insert((i, j, k), s.res(c, d, qv(&q, i, l)));
                }
            }
        }
        pigeon = next_pigeon;
        hole = next_hole;
        top = false;
    }
    // Two pigeons, one hole.
    let p1 = get_pigeon(&mut s, &pigeon, top, 2, 1, &q);
    let p2 = get_pigeon(&mut s, &pigeon, top, 2, 2, &q);
    let h = get_hole(&mut s, &hole, top, 2, 1, 2, 1, &q);
    let r = s.res(p1, h, q[&(2, 1, 1)]);
    s.res(p2, r, q[&(2, 2, 1)]);
    Ok(PhpEres { n, clauses, proof: ResolutionProof { triples, steps: s.steps }, var_names: names })
}

struct EphpParts {
    php: Program,
    eres: PhpEres,
    ext: Vec<ExtRule>,
    catom: HashMap<Clause, String>,
    chain: Vec<String>,
}

fn ephp_parts(n: usize) -> Result<EphpParts> {
    let php = gen_php(n)?;
    let eres = php_eres_proof(n)?;
    let mut ext = Vec::new();
    // The definitions of y and z per layer, ahead of that layer's rules.
    let layers = gen_ext_layers(n);
    let mut li = 0;
    for l in (2..=n).rev() {
        for i in 1..=l {
            for j in 1..l {
                let (y, z) = (format!("y{l}_{i}_{j}"), format!("z{l}_{i}_{j}"));
                ext.push(ExtRule::new(y.clone(), &[&e(n, l + 1, i, l), &e(n, l + 1, l + 1, j)]));
                ext.push(ExtRule::new(z, &[&format!("not {}", e(n, l + 1, i, j)), &format!("not {y}")]));
            }
        }
        let count = 2 * l * (l - 1);
        ext.extend(layers[li..li + count].iter().cloned());
        li += count;
    }
    let steps = &eres.proof.steps;
    let m = steps.len();
    let mut catom: HashMap<Clause, String> = HashMap::new();
    for st in &steps[..m - 1] {
        if catom.contains_key(&st.clause) {
            continue;
        }
        let name = format!("c{}", catom.len() + 1);
        for &l in st.clause.lits() {
            ext.push(ExtRule::new(name.clone(), &[&eres.lit_text(l)]));
        }
        catom.insert(st.clause.clone(), name);
    }
    let mut chain: Vec<String> = Vec::new();
    for (i, st) in steps[..m - 1].iter().enumerate() {
        let name = format!("s{}", i + 1);
        let c = &catom[&st.clause];
        match chain.last() {
            None => ext.push(ExtRule::new(name.clone(), &[c])),
            Some(prev) => ext.push(ExtRule::new(name.clone(), &[c, prev])),
        }
        chain.push(name);
    }
    Ok(EphpParts { php, eres, ext, catom, chain })
}

/// Pigeonhole program plus the extension layers, the `y`/`z` definitions,
/// a clause atom `c ← l` per literal of every clause of the refutation, and
/// the chain `s_i ← c_i, s_(i-1)`.
pub fn gen_ephp(n: usize) -> Result<Program> {
    let parts = ephp_parts(n)?;
    parts.php.extended(&ExtensionSet::from_rules(parts.ext))
}

fn ded(b: &mut ProofBuilder, entry: Entry, rule: RuleId, prem: &[Entry]) -> Result<bool> {
    b.deduce(entry, rule, prem, &[])?;
    Ok(b.is_closed())
}

/// Extended tableau proof for `gen_php(n)` whose extension is everything
/// [`gen_ephp`] adds. The chain atoms are cut in order; input clauses close
/// through the pigeonhole constraints.
pub fn gen_ephp_proof(n: usize) -> Result<TableauProof> {
    let parts = ephp_parts(n)?;
    let eres = &parts.eres;
    let var_atom: HashMap<u32, String> =
        (1..=eres.var_names.len() as u32).map(|v| (v, eres.name(v).to_string())).collect();
    let input: HashSet<Clause> = eres.clauses.clauses().iter().cloned().collect();
    let by_var: HashMap<u32, ExtensionTriple> = eres.proof.triples.iter().map(|t| (t.var, *t)).collect();
    let plan = ChainPlan { proof: &eres.proof, input, catom: parts.catom, chain: parts.chain, var_atom };
    let ext = ExtensionSet::from_rules(parts.ext);
    chain_proof(&parts.php, ext, &plan, &mut |b, plan, i, c| {
        let clause = &plan.proof.steps[i].clause;
        if plan.input.contains(clause) {
            if falsify_clause(b, plan, clause, c)? {
                return Ok(());
            }
            // The constraint whose body is the complement of the clause.
            let lits = clause.lits().iter().map(|&l| plan.lit(b, !l)).collect::<Result<Vec<_>>>()?;
            let body = Body::new(lits.iter().copied());
            let prem: Vec<Entry> = lits.iter().map(|&l| Entry::t(l)).collect();
            if ded(b, Entry::body(true, body.clone()), RuleId::B, &prem)? {
                return Ok(());
            }
            ded(b, Entry::atom(true, Atom::BOT), RuleId::D, &[Entry::body(true, body)])?;
            return Ok(());
        }
        let t = plan
            .proof
            .triples
            .iter()
            .find(|t| t.clauses().contains(clause))
            .ok_or_else(|| Error::Internal("initial clause outside input and triples".into()))?;
        if !plan.var_atom[&t.var].starts_with('e') {
            return close_triple_clause(b, t, clause, &|b: &ProofBuilder, l| plan.lit(b, l));
        }
        let tz = by_var[&t.l1.var()];
        let ty = by_var[&tz.l2.var()];
        let atom = |b: &ProofBuilder, v: u32| -> Result<Atom> { Ok(plan.lit(b, Lit::pos(v))?.atom) };
        let (ea, za, ya) = (atom(b, t.var)?, atom(b, tz.var)?, atom(b, ty.var)?);
        let qa = atom(b, tz.l1.var())?;
        let zbody = Body::new([DefaultLiteral::neg(qa), DefaultLiteral::neg(ya)]);
        let qbody = Body::new([DefaultLiteral::pos(qa)]);
        let ybody = Body::new([plan.lit(b, ty.l1)?, plan.lit(b, ty.l2)?]);
        if clause.contains(Lit::pos(t.var)) {
            // F e, F z: z's body is false, so with F q the atom y must hold,
            // while y's body is one of e's and false.
            let steps = [
                (Entry::body(false, zbody.clone()), RuleId::E, vec![Entry::atom(false, za)]),
                (Entry::body(false, qbody.clone()), RuleId::E, vec![Entry::atom(false, ea)]),
                (Entry::atom(false, qa), RuleId::C, vec![Entry::body(false, qbody)]),
                (Entry::atom(true, ya), RuleId::C, vec![Entry::body(false, zbody), Entry::atom(false, qa)]),
                (Entry::body(false, ybody.clone()), RuleId::E, vec![Entry::atom(false, ea)]),
                (Entry::body(true, ybody), RuleId::ISec, vec![Entry::atom(true, ya)]),
            ];
            for (entry, rule, prem) in steps {
                if ded(b, entry, rule, &prem)? {
                    break;
                }
            }
        } else {
            // T e, T z: z's body gives F q and F y, so both bodies of e fail.
            let steps = [
                (Entry::body(true, zbody.clone()), RuleId::ISec, vec![Entry::atom(true, za)]),
                (Entry::atom(false, qa), RuleId::G, vec![Entry::body(true, zbody.clone())]),
                (Entry::atom(false, ya), RuleId::G, vec![Entry::body(true, zbody)]),
                (Entry::body(false, qbody.clone()), RuleId::F, vec![Entry::atom(false, qa)]),
                (Entry::body(false, ybody.clone()), RuleId::E, vec![Entry::atom(false, ya)]),
                (Entry::atom(false, ea), RuleId::HSec, vec![Entry::body(false, qbody), Entry::body(false, ybody)]),
            ];
            for (entry, rule, prem) in steps {
                if ded(b, entry, rule, &prem)? {
                    break;
                }
            }
        }
        Ok(())
    })
}
