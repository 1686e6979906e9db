//! Text formats: programs, DIMACS, resolution proofs, tableau proofs and
//! name maps. Every serializer round-trips through its parser.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use log::warn;

use crate::bridge::{NameKind, NameMap};
use crate::cnf::{Clause, ClauseSet, Lit};
use crate::error::{Error, Result};
use crate::program::{Atom, Body, DefaultLiteral, Program, Rule, Symbols};
use crate::proofkit::{ExtensionTriple, ResolutionProof, Step};
use crate::tableau::{Entry, ExtRule, ExtensionSet, Object, ProofRecord, RuleId, TableauProof};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    If,
    Comma,
    Dot,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { src: text.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) {
        if self.src[self.pos] == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.bump(),
                b'%' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    /// Next token with its start position, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let (line, col) = (self.line, self.col);
        let c = self.src[self.pos];
        let tok = match c {
            b',' => {
                self.bump();
                Tok::Comma
            }
            b'.' => {
                self.bump();
                Tok::Dot
            }
            b':' => {
                self.bump();
                if self.pos < self.src.len() && self.src[self.pos] == b'-' {
                    self.bump();
                    Tok::If
                } else {
                    return Err(Error::Syntax { line, col, msg: "expected `:-`".into() });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || matches!(self.src[self.pos], b'_' | b'\''))
                {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            _ => return Err(self.err(format!("unexpected character `{}`", c as char))),
        };
        Ok(Some((tok, line, col)))
    }
}

/// A rule as names: `None` head is ⊥, body literals are `(atom, negative)`.
type RawRule = (Option<String>, Vec<(String, bool)>);

fn parse_rules(text: &str) -> Result<Vec<RawRule>> {
    let mut lx = Lexer::new(text);
    let mut rules = Vec::new();
    let syntax = |line, col, msg: &str| Error::Syntax { line, col, msg: msg.to_string() };
    while let Some((tok, line, col)) = lx.next()? {
        let head = match tok {
            Tok::Ident(h) if h == "not" => return Err(syntax(line, col, "`not` cannot start a rule head")),
            Tok::Ident(h) => {
                match lx.next()? {
                    Some((Tok::Dot, ..)) => {
                        rules.push((Some(h), Vec::new()));
                        continue;
                    }
                    Some((Tok::If, ..)) => {}
                    Some((_, l, c)) => return Err(syntax(l, c, "expected `:-` or `.`")),
                    None => return Err(lx.err("unexpected end of input after rule head")),
                }
                Some(h)
            }
            Tok::If => None,
            _ => return Err(syntax(line, col, "expected a rule")),
        };
        let mut body = Vec::new();
        loop {
            match lx.next()? {
                Some((Tok::Ident(w), ..)) => {
                    if w == "not" {
                        match lx.next()? {
                            Some((Tok::Ident(a), l2, c2)) => {
                                if a == "not" {
                                    return Err(syntax(l2, c2, "expected an atom after `not`"));
                                }
                                body.push((a, true));
                            }
                            Some((_, l2, c2)) => return Err(syntax(l2, c2, "expected an atom after `not`")),
                            None => return Err(lx.err("unexpected end of input")),
                        }
                    } else {
                        body.push((w, false));
                    }
                }
                Some((Tok::Dot, l, c)) => {
                    if head.is_some() || !body.is_empty() {
                        return Err(syntax(l, c, "expected a literal"));
                    }
                    break;
                }
                Some((_, l, c)) => return Err(syntax(l, c, "expected a literal")),
                None => return Err(lx.err("unexpected end of input in rule body")),
            }
            match lx.next()? {
                Some((Tok::Comma, ..)) => continue,
                Some((Tok::Dot, ..)) => break,
                Some((_, l, c)) => return Err(syntax(l, c, "expected `,` or `.`")),
                None => return Err(lx.err("missing `.` at end of rule")),
            }
        }
        rules.push((head, body));
    }
    Ok(rules)
}

/// Parses rules `head :- l1, ..., ln.`, facts `head.` and constraints
/// `:- l1, ..., ln.`; `%` starts a comment.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut sym = Symbols::new();
    let mut rules = Vec::new();
    let mut seen = HashSet::new();
    for (head, body) in parse_rules(text)? {
        let h = head.map(|h| sym.intern(&h)).unwrap_or(Atom::BOT);
        let lits: Vec<DefaultLiteral> =
            body.iter().map(|(a, neg)| DefaultLiteral { atom: sym.intern(a), negative: *neg }).collect();
        let r = Rule::new(h, Body::new(lits));
        if !seen.insert(r.clone()) {
            warn!("duplicate rule ignored");
            continue;
        }
        rules.push(r);
    }
    Program::new(Arc::new(sym), rules)
}

/// One rule per line, in program order.
pub fn serialize_program(program: &Program) -> String {
    let mut out = String::new();
    for r in program.rules() {
        out.push_str(&program.rule_text(r));
        out.push('\n');
    }
    out
}

/// As [`serialize_program`] with a leading `%` comment line.
pub fn serialize_program_with_header(program: &Program, header: &str) -> String {
    format!("% {header}\n{}", serialize_program(program))
}

pub fn parse_dimacs(text: &str) -> Result<ClauseSet> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                return Err(Error::Format { line: ln, msg: "malformed `p cnf V C` header".into() });
            }
            let v = f[2].parse().map_err(|_| Error::Format { line: ln, msg: "bad variable count".into() })?;
            let c = f[3].parse().map_err(|_| Error::Format { line: ln, msg: "bad clause count".into() })?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or(Error::Format { line: ln, msg: "clause before the header".into() })?;
        for tok in t.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| Error::Format { line: ln, msg: format!("bad literal `{tok}`") })?;
            if x == 0 {
                clauses.push(Clause::new(cur.drain(..)));
            } else {
                let l = Lit::from_dimacs(x).expect("non-zero");
                if l.var() > nv {
                    return Err(Error::Format { line: ln, msg: format!("variable {} exceeds the header", l.var()) });
                }
                cur.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or(Error::Format { line: last_line.max(1), msg: "missing `p cnf` header".into() })?;
    if !cur.is_empty() {
        return Err(Error::Format { line: last_line, msg: "last clause is not terminated by 0".into() });
    }
    if clauses.len() != nc {
        return Err(Error::Format {
            line: last_line.max(1),
            msg: format!("header announces {nc} clauses, found {}", clauses.len()),
        });
    }
    Ok(ClauseSet::new(nv, clauses))
}

fn lits_text(c: &Clause) -> String {
    let mut s = String::new();
    for l in c.lits() {
        write!(s, "{} ", l.dimacs()).unwrap();
    }
    s.push('0');
    s
}

pub fn serialize_dimacs(cs: &ClauseSet) -> String {
    let mut out = format!("p cnf {} {}\n", cs.num_vars(), cs.len());
    for c in cs.clauses() {
        out.push_str(&lits_text(c));
        out.push('\n');
    }
    out
}

/// `e <var> <l1> <l2>` per triple, then `<id> <lits> 0 [<p1> <p2>]` per
/// step with 1-based ids. Pivots are not written; the checker infers them.
pub fn serialize_res_proof(proof: &ResolutionProof) -> String {
    let mut out = String::new();
    for t in &proof.triples {
        writeln!(out, "e {} {} {}", t.var, t.l1.dimacs(), t.l2.dimacs()).unwrap();
    }
    for (i, s) in proof.steps.iter().enumerate() {
        write!(out, "{} {}", i + 1, lits_text(&s.clause)).unwrap();
        if let crate::proofkit::Provenance::Resolved { left, right, .. } = s.provenance {
            write!(out, " {} {}", left + 1, right + 1).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_res_proof(text: &str) -> Result<ResolutionProof> {
    let mut proof = ResolutionProof::default();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        let bad = |msg: &str| Error::Format { line: ln, msg: msg.to_string() };
        let f: Vec<&str> = t.split_whitespace().collect();
        if f[0] == "e" {
            if !proof.steps.is_empty() {
                return Err(bad("extension triples must precede the steps"));
            }
            if f.len() != 4 {
                return Err(bad("expected `e <var> <l1> <l2>`"));
            }
            let var: u32 = f[1].parse().map_err(|_| bad("bad triple variable"))?;
            let lit = |s: &str| s.parse::<i32>().ok().and_then(Lit::from_dimacs).ok_or_else(|| bad("bad triple literal"));
            proof.triples.push(ExtensionTriple::new(var, lit(f[2])?, lit(f[3])?));
            continue;
        }
        let id: usize = f[0].parse().map_err(|_| bad("bad step id"))?;
        if id != proof.steps.len() + 1 {
            return Err(bad(&format!("expected step id {}", proof.steps.len() + 1)));
        }
        let mut lits = Vec::new();
        let mut k = 1;
        loop {
            let x: i32 = f.get(k).ok_or_else(|| bad("clause is not terminated by 0"))?.parse().map_err(|_| bad("bad literal"))?;
            k += 1;
            if x == 0 {
                break;
            }
            lits.push(Lit::from_dimacs(x).expect("non-zero"));
        }
        let clause = Clause::new(lits);
        let step = match &f[k..] {
            [] => Step::initial(clause),
            [a, b] => {
                let parent = |s: &str| -> Result<usize> {
                    let p: usize = s.parse().map_err(|_| bad("bad parent id"))?;
                    if p == 0 || p >= id {
                        return Err(bad("parents must be earlier steps"));
                    }
                    Ok(p - 1)
                };
                Step::resolved(clause, parent(a)?, parent(b)?, None)
            }
            _ => return Err(bad("expected zero or two parent ids")),
        };
        proof.steps.push(step);
    }
    Ok(proof)
}

fn ids_text<T: ToString>(v: &[T]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `ext <rule>` lines for E, then one line per record:
/// `<id> <parent|-> <T|F> <rule> <premises|-> <witness|-> <object>`.
pub fn serialize_tableau_proof(program: &Program, proof: &TableauProof) -> Result<String> {
    let full = program.extended(&proof.extension)?;
    let mut out = String::new();
    for r in proof.extension.rules() {
        writeln!(out, "ext {}", r.text()).unwrap();
    }
    for (i, r) in proof.records.iter().enumerate() {
        let parent = r.parent.map_or("-".to_string(), |p| p.to_string());
        let witness: Vec<&str> = r.witness.iter().map(|&a| full.name(a)).collect();
        writeln!(
            out,
            "{i} {parent} {} {} {} {} {}",
            if r.entry.sign { 'T' } else { 'F' },
            r.rule.as_str(),
            ids_text(&r.premises),
            ids_text(&witness),
            r.entry.object.text(&full)
        )
        .unwrap();
    }
    Ok(out)
}

fn parse_object(full: &Program, s: &str) -> Option<Object> {
    if s == "#bot" {
        return Some(Object::Atom(Atom::BOT));
    }
    if let Some(inner) = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
        let mut lits = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let l = match part.strip_prefix("not ") {
                Some(a) => DefaultLiteral::neg(full.atom(a.trim())?),
                None => DefaultLiteral::pos(full.atom(part)?),
            };
            lits.push(l);
        }
        return Some(Object::Body(Body::new(lits)));
    }
    full.atom(s).map(Object::Atom)
}

pub fn parse_tableau_proof(program: &Program, text: &str) -> Result<TableauProof> {
    let mut ext = Vec::new();
    let mut body_lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if let Some(rule) = t.strip_prefix("ext ") {
            if !body_lines.is_empty() {
                return Err(Error::Format { line: i + 1, msg: "extension rules must precede the records".into() });
            }
            let parsed = parse_rules(rule).map_err(|e| Error::Format { line: i + 1, msg: e.to_string() })?;
            let [(Some(head), body)] = parsed.as_slice() else {
                return Err(Error::Format { line: i + 1, msg: "expected one extension rule with a head".into() });
            };
            ext.push(ExtRule { head: head.clone(), body: body.clone() });
        } else {
            body_lines.push((i + 1, t));
        }
    }
    let extension = ExtensionSet::from_rules(ext);
    let full = program.extended(&extension)?;
    let mut records = Vec::new();
    for (ln, t) in body_lines {
        let bad = |msg: &str| Error::Format { line: ln, msg: msg.to_string() };
        let mut f = t.splitn(7, ' ');
        let mut field = || f.next().ok_or_else(|| bad("expected 7 fields"));
        let id: usize = field()?.parse().map_err(|_| bad("bad record id"))?;
        if id != records.len() {
            return Err(bad(&format!("expected record id {}", records.len())));
        }
        let parent = match field()? {
            "-" => None,
            p => Some(p.parse::<usize>().map_err(|_| bad("bad parent id"))?),
        };
        let sign = match field()? {
            "T" => true,
            "F" => false,
            _ => return Err(bad("sign must be T or F")),
        };
        let rule = RuleId::parse(field()?).ok_or_else(|| bad("unknown rule"))?;
        let premises = match field()? {
            "-" => Vec::new(),
            p => p.split(',').map(|x| x.parse::<usize>().map_err(|_| bad("bad premise id"))).collect::<Result<_>>()?,
        };
        let witness = match field()? {
            "-" => Vec::new(),
            w => w.split(',').map(|a| full.atom(a).ok_or_else(|| bad(&format!("unknown atom `{a}`")))).collect::<Result<_>>()?,
        };
        let obj_text = field()?.trim();
        let object = parse_object(&full, obj_text).ok_or_else(|| bad(&format!("unknown object `{obj_text}`")))?;
        records.push(ProofRecord { parent, entry: Entry::new(sign, object), rule, premises, witness });
    }
    if records.is_empty() {
        return Err(Error::Format { line: 1, msg: "proof has no records".into() });
    }
    Ok(TableauProof { records, extension })
}

/// `<kind> <var> <name>` per line; names may contain spaces.
pub fn serialize_namemap(names: &NameMap) -> String {
    let mut out = String::new();
    for e in names.entries() {
        writeln!(out, "{} {} {}", e.kind.as_str(), e.var, e.name).unwrap();
    }
    out
}

pub fn parse_namemap(text: &str) -> Result<NameMap> {
    let mut names = NameMap::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Format { line: i + 1, msg: msg.to_string() };
        let mut f = t.splitn(3, ' ');
        let kind = f.next().and_then(NameKind::parse).ok_or_else(|| bad("unknown kind"))?;
        let var: u32 = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad variable"))?;
        let name = f.next().ok_or_else(|| bad("missing name"))?;
        names.insert(kind, name, var).map_err(|e| bad(&e.to_string()))?;
    }
    Ok(names)
}
