//! Line-based parser for the QECNF text format and the relation format.
//!
//! ```text
//! qecnf <nvars>
//! name <v> <string>
//! forall v1 v2 ...
//! exists v1 v2 ...
//! c <a>=<b> <a>!=<b> ...
//! # comment
//! ```
//!
//! Relation files start with `rel <arity>` instead; variables `1..arity`
//! stay free and either clause lines (with optional prefix lines binding
//! auxiliary variables `arity+1..`) or partition lines `p c1 .. cm` follow.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Clause, FormulaError, Polarity, QEFormula, Quantifier, SimplifiedClause, Variable};
use crate::partition::Partition;
use crate::relation::Relation;

#[derive(Debug, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Non-fatal simplification notices emitted while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug)]
pub struct Parsed {
    pub formula: QEFormula,
    pub warnings: Vec<ParseWarning>,
}

/// A relation file either lists its kernels outright or defines them by a
/// formula with free variables `1..arity`.
#[derive(Debug)]
pub enum RelationSource {
    Explicit(Relation),
    Defined(QEFormula),
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>, // (1-based column, token)
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = Vec::new();
        let mut col = 0usize;
        for part in raw.split_whitespace() {
            // Column of this token within the raw line.
            let at = raw[col..].find(part).unwrap() + col;
            tokens.push((at + 1, part));
            col = at + part.len();
        }
        out.push(Line {
            number: i + 1,
            tokens,
        });
    }
    out
}

fn parse_u32(line: usize, col: usize, tok: &str, what: &str) -> Result<u32, ParseError> {
    tok.parse::<u32>()
        .map_err(|_| ParseError::new(line, col, format!("expected {what}, found `{tok}`")))
}

fn parse_var(line: usize, col: usize, tok: &str, nvars: u32) -> Result<Variable, ParseError> {
    let idx = parse_u32(line, col, tok, "a variable index")?;
    if idx == 0 || idx > nvars {
        return Err(ParseError::new(
            line,
            col,
            format!("variable {idx} out of range 1..={nvars}"),
        ));
    }
    Ok(Variable::new(idx))
}

fn parse_literal(
    line: usize,
    col: usize,
    tok: &str,
    nvars: u32,
) -> Result<(Variable, Variable, Polarity), ParseError> {
    let (lhs, rhs, pol) = if let Some(p) = tok.find("!=") {
        (&tok[..p], &tok[p + 2..], Polarity::Neq)
    } else if let Some(p) = tok.find('=') {
        (&tok[..p], &tok[p + 1..], Polarity::Eq)
    } else {
        return Err(ParseError::new(
            line,
            col,
            format!("expected a literal `a=b` or `a!=b`, found `{tok}`"),
        ));
    };
    let a = parse_var(line, col, lhs, nvars)?;
    let b = parse_var(line, col, rhs, nvars)?;
    Ok((a, b, pol))
}

struct Body {
    prefix: Vec<(Quantifier, Variable)>,
    matrix: Vec<Clause>,
    names: BTreeMap<u32, String>,
    warnings: Vec<ParseWarning>,
}

fn parse_body(lines: &[Line<'_>], nvars: u32, allow_free: bool) -> Result<Body, ParseError> {
    let mut prefix: Vec<(Quantifier, Variable)> = Vec::new();
    let mut matrix: Vec<Clause> = Vec::new();
    let mut names: BTreeMap<u32, String> = BTreeMap::new();
    let mut warnings = Vec::new();

    for line in lines {
        let (col0, head) = line.tokens[0];
        match head {
            "forall" | "exists" => {
                let q = if head == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                if line.tokens.len() == 1 {
                    return Err(ParseError::new(line.number, col0, "empty quantifier block"));
                }
                for &(col, tok) in &line.tokens[1..] {
                    let v = parse_var(line.number, col, tok, nvars)?;
                    prefix.push((q, v));
                }
            }
            "c" => {
                let mut raw = Vec::new();
                if line.tokens.len() == 1 {
                    return Err(ParseError::new(line.number, col0, "empty clause"));
                }
                for &(col, tok) in &line.tokens[1..] {
                    raw.push(parse_literal(line.number, col, tok, nvars)?);
                }
                match Clause::from_raw(raw) {
                    SimplifiedClause::Clause(c) => matrix.push(c),
                    SimplifiedClause::Tautology => warnings.push(ParseWarning {
                        line: line.number,
                        message: "tautological clause dropped".into(),
                    }),
                    SimplifiedClause::Unsatisfiable => {
                        return Err(ParseError::new(
                            line.number,
                            col0,
                            "clause simplifies to false (only x!=x literals)",
                        ))
                    }
                }
            }
            "name" => {
                if line.tokens.len() < 3 {
                    return Err(ParseError::new(
                        line.number,
                        col0,
                        "expected `name <var> <string>`",
                    ));
                }
                let (col, tok) = line.tokens[1];
                let v = parse_var(line.number, col, tok, nvars)?;
                let name = line.tokens[2..]
                    .iter()
                    .map(|&(_, t)| t)
                    .collect::<Vec<_>>()
                    .join(" ");
                names.insert(v.index(), name);
            }
            other => {
                return Err(ParseError::new(
                    line.number,
                    col0,
                    format!("unexpected directive `{other}`"),
                ))
            }
        }
    }

    // Every matrix variable must be bound unless free variables are allowed.
    if !allow_free {
        let mut bound = vec![false; nvars as usize];
        for &(_, v) in &prefix {
            bound[v.slot()] = true;
        }
        for c in &matrix {
            for v in c.variables() {
                if !bound[v.slot()] {
                    return Err(ParseError::new(
                        0,
                        0,
                        format!("variable {} appears in the matrix but not in the prefix", v),
                    ));
                }
            }
        }
    }

    Ok(Body {
        prefix,
        matrix,
        names,
        warnings,
    })
}

fn build_formula(
    header_line: usize,
    nvars: u32,
    body: Body,
) -> Result<Parsed, ParseError> {
    let formula = QEFormula::new(nvars, body.prefix, body.matrix, body.names).map_err(
        |e: FormulaError| ParseError::new(header_line, 1, e.to_string()),
    )?;
    Ok(Parsed {
        formula,
        warnings: body.warnings,
    })
}

/// Parses the sentence format (`qecnf` header).
pub fn parse_qecnf(text: &str) -> Result<Parsed, ParseError> {
    let lines = tokenize(text);
    let Some(first) = lines.first() else {
        return Err(ParseError::new(1, 1, "missing `qecnf <nvars>` header"));
    };
    let (col0, head) = first.tokens[0];
    if head != "qecnf" || first.tokens.len() != 2 {
        return Err(ParseError::new(
            first.number,
            col0,
            "expected header `qecnf <nvars>`",
        ));
    }
    let (ncol, ntok) = first.tokens[1];
    let nvars = parse_u32(first.number, ncol, ntok, "a variable count")?;
    let body = parse_body(&lines[1..], nvars, false)?;
    build_formula(first.number, nvars, body)
}

/// Parses the relation format (`rel` header).
pub fn parse_relation_source(text: &str) -> Result<RelationSource, ParseError> {
    let lines = tokenize(text);
    let Some(first) = lines.first() else {
        return Err(ParseError::new(1, 1, "missing `rel <arity>` header"));
    };
    let (col0, head) = first.tokens[0];
    if head != "rel" || first.tokens.len() != 2 {
        return Err(ParseError::new(
            first.number,
            col0,
            "expected header `rel <arity>`",
        ));
    }
    let (acol, atok) = first.tokens[1];
    let arity = parse_u32(first.number, acol, atok, "an arity")?;
    if arity == 0 {
        return Err(ParseError::new(first.number, acol, "arity must be positive"));
    }

    let has_partitions = lines[1..].iter().any(|l| l.tokens[0].1 == "p");
    let has_clauses = lines[1..]
        .iter()
        .any(|l| matches!(l.tokens[0].1, "c" | "forall" | "exists"));
    if has_partitions && has_clauses {
        return Err(ParseError::new(
            first.number,
            col0,
            "relation file mixes partition lines and clause lines",
        ));
    }

    if has_partitions || !has_clauses {
        let mut kernels = std::collections::BTreeSet::new();
        for line in &lines[1..] {
            let (col, head) = line.tokens[0];
            if head != "p" {
                return Err(ParseError::new(
                    line.number,
                    col,
                    format!("unexpected directive `{head}` in partition-mode relation"),
                ));
            }
            if line.tokens.len() != arity as usize + 1 {
                return Err(ParseError::new(
                    line.number,
                    col,
                    format!("partition line must list {arity} classes"),
                ));
            }
            let mut classes = Vec::with_capacity(arity as usize);
            for &(ccol, tok) in &line.tokens[1..] {
                classes.push(parse_u32(line.number, ccol, tok, "a class index")?);
            }
            let p = Partition::from_rgs(classes)
                .map_err(|e| ParseError::new(line.number, col, e.to_string()))?;
            kernels.insert(p);
        }
        return Ok(RelationSource::Explicit(Relation::new(arity, kernels)));
    }

    // Clause mode: auxiliary bound variables may extend past the arity.
    let mut max_var = arity;
    for line in &lines[1..] {
        for &(_, tok) in &line.tokens[1..] {
            for piece in tok.split(['=', '!']) {
                if let Ok(v) = piece.parse::<u32>() {
                    max_var = max_var.max(v);
                }
            }
        }
    }
    let body = parse_body(&lines[1..], max_var, true)?;
    // Free variables must be exactly 1..arity.
    for &(_, v) in &body.prefix {
        if v.index() <= arity {
            return Err(ParseError::new(
                first.number,
                col0,
                format!("variable {} is free by arity but appears in the prefix", v),
            ));
        }
    }
    let parsed = build_formula(first.number, max_var, body)?;
    if parsed.formula.num_free() != arity {
        return Err(ParseError::new(
            first.number,
            col0,
            format!(
                "auxiliary variables {}..{} must all be quantified",
                arity + 1,
                max_var
            ),
        ));
    }
    Ok(RelationSource::Defined(parsed.formula))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_sentence() {
        let p = parse_qecnf("qecnf 2\nforall 1\nexists 2\nc 1=2\n").unwrap();
        let f = p.formula;
        assert_eq!(f.num_vars(), 2);
        assert_eq!(
            f.prefix(),
            &[
                (Quantifier::Forall, Variable::new(1)),
                (Quantifier::Exists, Variable::new(2))
            ]
        );
        assert_eq!(f.matrix().len(), 1);
        assert_eq!(f.matrix()[0].to_string(), "1=2");
    }

    #[test]
    fn tautology_dropped_with_warning() {
        let p = parse_qecnf("qecnf 1\nexists 1\nc 1=1\n").unwrap();
        assert!(p.formula.matrix().is_empty());
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn unsat_clause_is_an_error() {
        assert!(parse_qecnf("qecnf 1\nexists 1\nc 1!=1\n").is_err());
    }

    #[test]
    fn neq_gadget_sentence_parses_to_single_clause() {
        // forall x y z . (x != y or y = z)
        let p = parse_qecnf("qecnf 3\nforall 1 2 3\nc 1!=2 2=3\n").unwrap();
        assert_eq!(p.formula.matrix().len(), 1);
        assert_eq!(p.formula.matrix()[0].to_string(), "1!=2 2=3");
    }

    #[test]
    fn unbound_matrix_variable_rejected() {
        let err = parse_qecnf("qecnf 2\nforall 1\nexists 2\nc 1=3\n").unwrap_err();
        assert!(err.message.contains("out of range"));
        let err = parse_qecnf("qecnf 3\nforall 1\nexists 2\nc 1=3\n").unwrap_err();
        assert!(err.message.contains("not in the prefix"));
    }

    #[test]
    fn duplicate_prefix_variable_rejected() {
        let err = parse_qecnf("qecnf 2\nforall 1 1\nexists 2\n").unwrap_err();
        assert!(err.message.contains("duplicate prefix variable"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_qecnf("qecnf 2\nforall 1\nexists 2\nc 1?2\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert_eq!(err.col, 3);
    }

    #[test]
    fn names_round_trip_through_parse() {
        let p = parse_qecnf("qecnf 2\nname 1 t\nname 2 f\nforall 1 2\n").unwrap();
        assert_eq!(p.formula.name_of(Variable::new(1)), Some("t"));
        assert_eq!(p.formula.name_of(Variable::new(2)), Some("f"));
    }

    #[test]
    fn relation_partition_mode() {
        let src = parse_relation_source("rel 2\np 0 1\n").unwrap();
        match src {
            RelationSource::Explicit(r) => {
                assert_eq!(r.arity(), 2);
                assert_eq!(r.kernels().len(), 1);
            }
            _ => panic!("expected explicit relation"),
        }
    }

    #[test]
    fn relation_clause_mode_with_bound_auxiliary() {
        // Disequality gadget: free x=1, y=2; forall z=3; clause (x!=y or y=z).
        let src = parse_relation_source("rel 2\nforall 3\nc 1!=2 2=3\n").unwrap();
        match src {
            RelationSource::Defined(f) => {
                assert_eq!(f.num_free(), 2);
                assert_eq!(f.num_vars(), 3);
            }
            _ => panic!("expected defined relation"),
        }
    }

    #[test]
    fn relation_rejects_mixed_modes_and_quantified_free() {
        assert!(parse_relation_source("rel 2\np 0 0\nc 1=2\n").is_err());
        assert!(parse_relation_source("rel 2\nforall 2\nc 1=2\n").is_err());
    }
}
