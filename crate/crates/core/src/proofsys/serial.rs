//! Certificate file grammar: nested parenthesized records, one step per
//! line.
//!
//! ```text
//! (zeroproof
//!   (step (eq 1 3) (unit))
//!   (step (eq 1 2) (trans 1 2)))
//! (kproof contradiction
//!   (step (eq 2 1) (uassign (2 1)) (zeroproof ...))
//!   (step (bot) (uassign) (kproof equality ...)))
//! ```
//!
//! Variables are the formula's numeric indices.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::Variable;

use super::{Equality, KProof, KStep, Proof, ProofMode, ZeroJust, ZeroProof, ZeroStep};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("proof syntax: {0}")]
pub struct ProofParseError(String);

fn err<T>(msg: impl Into<String>) -> Result<T, ProofParseError> {
    Err(ProofParseError(msg.into()))
}

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let body = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    for ch in body.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn parse_sexp(tokens: &[String], at: &mut usize) -> Result<Sexp, ProofParseError> {
    match tokens.get(*at) {
        None => err("unexpected end of input"),
        Some(t) if t == "(" => {
            *at += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*at) {
                    None => return err("unbalanced parenthesis"),
                    Some(t) if t == ")" => {
                        *at += 1;
                        return Ok(Sexp::List(items));
                    }
                    _ => items.push(parse_sexp(tokens, at)?),
                }
            }
        }
        Some(t) if t == ")" => err("unexpected closing parenthesis"),
        Some(t) => {
            *at += 1;
            Ok(Sexp::Atom(t.clone()))
        }
    }
}

fn as_list(s: &Sexp) -> Result<&[Sexp], ProofParseError> {
    match s {
        Sexp::List(items) => Ok(items),
        Sexp::Atom(a) => err(format!("expected a list, found `{a}`")),
    }
}

fn head<'a>(items: &'a [Sexp], what: &str) -> Result<(&'a str, &'a [Sexp]), ProofParseError> {
    match items.split_first() {
        Some((Sexp::Atom(h), rest)) => Ok((h.as_str(), rest)),
        _ => err(format!("expected {what}")),
    }
}

fn atom_num(s: &Sexp, what: &str) -> Result<u32, ProofParseError> {
    match s {
        Sexp::Atom(a) => a
            .parse::<u32>()
            .map_err(|_| ProofParseError(format!("expected {what}, found `{a}`"))),
        Sexp::List(_) => err(format!("expected {what}, found a list")),
    }
}

fn parse_equality(s: &Sexp) -> Result<Equality, ProofParseError> {
    let items = as_list(s)?;
    let (h, rest) = head(items, "(eq A B)")?;
    if h != "eq" || rest.len() != 2 {
        return err("expected (eq A B)");
    }
    let a = atom_num(&rest[0], "a variable index")?;
    let b = atom_num(&rest[1], "a variable index")?;
    if a == 0 || b == 0 {
        return err("variable indices are 1-based");
    }
    match Equality::new(Variable::new(a), Variable::new(b)) {
        Some(e) => Ok(e),
        None => err("degenerate equality with equal endpoints"),
    }
}

fn parse_proof_sexp(s: &Sexp) -> Result<Proof, ProofParseError> {
    let items = as_list(s)?;
    let (h, rest) = head(items, "(zeroproof ...) or (kproof ...)")?;
    match h {
        "zeroproof" => {
            let mut steps = Vec::new();
            for step in rest {
                let items = as_list(step)?;
                let (sh, srest) = head(items, "(step ...)")?;
                if sh != "step" || srest.len() != 2 {
                    return err("expected (step (eq A B) <just>)");
                }
                let equality = parse_equality(&srest[0])?;
                let jitems = as_list(&srest[1])?;
                let (jh, jrest) = head(jitems, "a justification")?;
                let just = match (jh, jrest.len()) {
                    ("hyp", 0) => ZeroJust::Hypothesis,
                    ("unit", 0) => ZeroJust::UnitConstraint,
                    ("trans", 2) => ZeroJust::Transitivity(
                        atom_num(&jrest[0], "a step index")? as usize,
                        atom_num(&jrest[1], "a step index")? as usize,
                    ),
                    ("impl", 1) => {
                        ZeroJust::Implication(atom_num(&jrest[0], "a step index")? as usize)
                    }
                    _ => return err(format!("unknown justification `{jh}`")),
                };
                steps.push(ZeroStep { equality, just });
            }
            Ok(Proof::Zero(ZeroProof { steps }))
        }
        "kproof" => {
            let (mode, rest) = head(rest, "a proof mode")?;
            let mode = match mode {
                "equality" => ProofMode::Equality,
                "contradiction" => ProofMode::Contradiction,
                other => return err(format!("unknown proof mode `{other}`")),
            };
            let mut steps = Vec::new();
            for step in rest {
                let items = as_list(step)?;
                let (sh, srest) = head(items, "(step ...)")?;
                if sh != "step" || srest.len() != 3 {
                    return err("expected (step (eq A B)|(bot) (uassign ...) <subproof>)");
                }
                let conclusion = {
                    let citems = as_list(&srest[0])?;
                    let (ch, crest) = head(citems, "(eq A B) or (bot)")?;
                    match (ch, crest.len()) {
                        ("bot", 0) => None,
                        ("eq", 2) => Some(parse_equality(&srest[0])?),
                        _ => return err("expected (eq A B) or (bot)"),
                    }
                };
                let aitems = as_list(&srest[1])?;
                let (ah, arest) = head(aitems, "(uassign ...)")?;
                if ah != "uassign" {
                    return err("expected (uassign (U Z)*)");
                }
                let mut forall_assignments = Vec::new();
                for pair in arest {
                    let pitems = as_list(pair)?;
                    if pitems.len() != 2 {
                        return err("expected (U Z) inside uassign");
                    }
                    let u = atom_num(&pitems[0], "a variable index")?;
                    let z = atom_num(&pitems[1], "a variable index")?;
                    if u == 0 || z == 0 {
                        return err("variable indices are 1-based");
                    }
                    forall_assignments.push((Variable::new(u), Variable::new(z)));
                }
                let subproof = parse_proof_sexp(&srest[2])?;
                steps.push(KStep {
                    conclusion,
                    forall_assignments,
                    subproof,
                });
            }
            Ok(Proof::K(KProof { mode, steps }))
        }
        other => err(format!("unknown proof head `{other}`")),
    }
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let tokens = tokenize(text);
    let mut at = 0;
    let sexp = parse_sexp(&tokens, &mut at)?;
    if at != tokens.len() {
        return err("trailing tokens after the proof");
    }
    parse_proof_sexp(&sexp)
}

fn write_indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn print_inner(p: &Proof, out: &mut String, depth: usize) {
    match p {
        Proof::Zero(z) => {
            write!(out, "(zeroproof").unwrap();
            for s in &z.steps {
                out.push('\n');
                write_indent(out, depth + 1);
                let just = match s.just {
                    ZeroJust::Hypothesis => "(hyp)".to_string(),
                    ZeroJust::UnitConstraint => "(unit)".to_string(),
                    ZeroJust::Transitivity(i, j) => format!("(trans {i} {j})"),
                    ZeroJust::Implication(j) => format!("(impl {j})"),
                };
                write!(
                    out,
                    "(step (eq {} {}) {just})",
                    s.equality.a(),
                    s.equality.b()
                )
                .unwrap();
            }
            out.push(')');
        }
        Proof::K(kp) => {
            let mode = match kp.mode {
                ProofMode::Equality => "equality",
                ProofMode::Contradiction => "contradiction",
            };
            write!(out, "(kproof {mode}").unwrap();
            for s in &kp.steps {
                out.push('\n');
                write_indent(out, depth + 1);
                match s.conclusion {
                    Some(e) => write!(out, "(step (eq {} {}) (uassign", e.a(), e.b()).unwrap(),
                    None => write!(out, "(step (bot) (uassign").unwrap(),
                }
                for (u, z) in &s.forall_assignments {
                    write!(out, " ({u} {z})").unwrap();
                }
                out.push_str(") ");
                print_inner(&s.subproof, out, depth + 1);
                out.push(')');
            }
            out.push(')');
        }
    }
}

pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    print_inner(p, &mut out, 0);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_zero() {
        let text = "(zeroproof\n  (step (eq 1 3) (unit))\n  (step (eq 2 3) (unit))\n  (step (eq 1 2) (trans 1 2)))\n";
        let p = parse_proof(text).unwrap();
        let printed = print_proof(&p);
        assert_eq!(parse_proof(&printed).unwrap(), p);
    }

    #[test]
    fn round_trip_nested() {
        let text = "(kproof contradiction (step (eq 2 1) (uassign (2 1)) (zeroproof (step (eq 2 1) (hyp)))))";
        let p = parse_proof(text).unwrap();
        let printed = print_proof(&p);
        assert_eq!(parse_proof(&printed).unwrap(), p);
        match &p {
            Proof::K(kp) => {
                assert_eq!(kp.mode, ProofMode::Contradiction);
                assert_eq!(kp.steps.len(), 1);
                assert_eq!(kp.steps[0].forall_assignments.len(), 1);
            }
            _ => panic!("expected a leveled proof"),
        }
    }

    #[test]
    fn round_trip_bottom_terminal() {
        let text = "(kproof contradiction\n  (step (eq 1 2) (uassign (3 1)) (zeroproof (step (eq 1 2) (hyp))))\n  (step (bot) (uassign) (kproof contradiction (step (bot) (uassign) (zeroproof)))))";
        let p = parse_proof(text).unwrap();
        let printed = print_proof(&p);
        assert_eq!(parse_proof(&printed).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_proof("(zeroproof (step (eq 1 1) (hyp)))").is_err());
        assert!(parse_proof("(kproof sideways)").is_err());
        assert!(parse_proof("(zeroproof (step (eq 1 2) (guess)))").is_err());
        assert!(parse_proof("(zeroproof").is_err());
        assert!(parse_proof("(zeroproof (step (eq 1 2) (hyp))) extra").is_err());
    }
}
