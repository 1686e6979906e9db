//! Fixtures shared by unit tests.

use crate::program::Program;
use crate::tableau::{Entry, ExtensionSet, Object, ProofBuilder, RuleId, TableauProof};

pub fn pi0() -> Program {
    Program::builder().rule(Some("a"), &["b", "not a"]).rule(Some("b"), &["c"]).rule(Some("c"), &["not b"]).build()
}

pub fn pi1() -> Program {
    Program::builder().rule(None, &["not a"]).rule(Some("a"), &["b"]).rule(Some("b"), &["a"]).build()
}

/// The two-branch proof for `pi0`: cut on `a`, then the entries as drawn.
pub fn pi0_hand_proof() -> TableauProof {
    let p = pi0();
    let mut b = ProofBuilder::new(&p, ExtensionSet::new()).unwrap();
    let a = b.atom("a").unwrap();
    let bb = b.atom("b").unwrap();
    let c = b.atom("c").unwrap();
    let ba = b.body(&["b", "not a"]).unwrap();
    let nb = b.body(&["not b"]).unwrap();
    let bc = b.body(&["c"]).unwrap();
    let m = b.mark();
    b.cut(true, Object::Atom(a)).unwrap();
    b.deduce(Entry::body(true, ba.clone()), RuleId::ISec, &[Entry::atom(true, a)], &[]).unwrap();
    b.deduce(Entry::atom(false, a), RuleId::G, &[Entry::body(true, ba.clone())], &[]).unwrap();
    assert!(b.is_closed());
    b.reset(m);
    b.cut(false, Object::Atom(a)).unwrap();
    b.deduce(Entry::body(false, ba.clone()), RuleId::E, &[Entry::atom(false, a)], &[]).unwrap();
    b.deduce(Entry::atom(false, bb), RuleId::C, &[Entry::body(false, ba), Entry::atom(false, a)], &[]).unwrap();
    b.deduce(Entry::body(true, nb.clone()), RuleId::B, &[Entry::atom(false, bb)], &[]).unwrap();
    b.deduce(Entry::atom(true, c), RuleId::D, &[Entry::body(true, nb)], &[]).unwrap();
    b.deduce(Entry::body(true, bc.clone()), RuleId::B, &[Entry::atom(true, c)], &[]).unwrap();
    b.deduce(Entry::atom(true, bb), RuleId::D, &[Entry::body(true, bc)], &[]).unwrap();
    assert!(b.is_closed());
    b.finish()
}
