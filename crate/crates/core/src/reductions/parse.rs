//! Input parsers for the reduction generators: a QDIMACS subset for
//! quantified 3-CNF, DIMACS CNF for monotone 3-SAT, and line formats for
//! not-all-equal and Boolean-CSP instances.

use thiserror::Error;

use crate::formula::Quantifier;

use super::{BoolConstraint, BoolCsp, MonotoneCnf, PropLit, PropVar, Qbf, QnaeInstance, ReduceError};

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> InputError {
    InputError {
        line,
        message: message.into(),
    }
}

impl From<ReduceError> for InputError {
    fn from(e: ReduceError) -> Self {
        err(0, e.to_string())
    }
}

struct Lines<'a> {
    rows: Vec<(usize, Vec<&'a str>)>,
}

fn split<'a>(text: &'a str, comment: &str) -> Lines<'a> {
    let rows = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.trim();
            if t.is_empty() || t.starts_with(comment) {
                None
            } else {
                Some((i + 1, t.split_whitespace().collect()))
            }
        })
        .collect();
    Lines { rows }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, InputError> {
    tok.parse()
        .map_err(|_| err(line, format!("expected {what}, found `{tok}`")))
}

/// QDIMACS subset: `p cnf <nvars> <nclauses>`, strictly alternating
/// single-variable `e`/`a` blocks starting existential, then 0-terminated
/// clauses of exactly three literals.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, InputError> {
    let lines = split(text, "c");
    let mut it = lines.rows.iter();
    let Some((hline, head)) = it.next() else {
        return Err(err(1, "missing `p cnf` header"));
    };
    if head.len() != 4 || head[0] != "p" || head[1] != "cnf" {
        return Err(err(*hline, "expected `p cnf <nvars> <nclauses>`"));
    }
    let nvars: u32 = parse_num(*hline, head[2], "a variable count")?;

    // Quantifier block lines, strictly alternating e, a, e, a, ...
    let mut x_of = vec![0u32; nvars as usize + 1]; // qdimacs id -> round
    let mut y_of = vec![0u32; nvars as usize + 1];
    let mut rounds = 0u32;
    let mut expect_e = true;
    let mut clause_rows = Vec::new();
    for (line, toks) in it {
        match toks[0] {
            "e" | "a" => {
                if !clause_rows.is_empty() {
                    return Err(err(*line, "quantifier line after clauses"));
                }
                let body: Vec<&str> = toks[1..].to_vec();
                if body.last() != Some(&"0") || body.len() != 2 {
                    return Err(err(
                        *line,
                        "each block must quantify exactly one variable: `e <v> 0` / `a <v> 0`",
                    ));
                }
                let v: u32 = parse_num(*line, body[0], "a variable")?;
                if v == 0 || v > nvars {
                    return Err(err(*line, format!("variable {v} out of range")));
                }
                if x_of[v as usize] != 0 || y_of[v as usize] != 0 {
                    return Err(err(*line, format!("variable {v} quantified twice")));
                }
                let is_e = toks[0] == "e";
                if is_e != expect_e {
                    return Err(err(
                        *line,
                        "blocks must alternate starting existential: e, a, e, a, ...",
                    ));
                }
                if is_e {
                    rounds += 1;
                    x_of[v as usize] = rounds;
                } else {
                    y_of[v as usize] = rounds;
                }
                expect_e = !expect_e;
            }
            _ => clause_rows.push((*line, toks.clone())),
        }
    }
    if rounds == 0 || !expect_e {
        return Err(err(
            *hline,
            "prefix must pair every existential with a universal round",
        ));
    }

    // Clause tokens across lines, 0-terminated.
    let mut clauses = Vec::new();
    let mut current: Vec<PropLit> = Vec::new();
    for (line, toks) in &clause_rows {
        for tok in toks {
            let lit: i64 = parse_num(*line, tok, "a literal")?;
            if lit == 0 {
                if current.len() != 3 {
                    return Err(err(
                        *line,
                        format!("clause must have exactly 3 literals, found {}", current.len()),
                    ));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
                continue;
            }
            let v = lit.unsigned_abs() as u32;
            if v > nvars {
                return Err(err(*line, format!("variable {v} out of range")));
            }
            let var = if x_of[v as usize] != 0 {
                PropVar::X(x_of[v as usize])
            } else if y_of[v as usize] != 0 {
                PropVar::Y(y_of[v as usize])
            } else {
                return Err(err(*line, format!("variable {v} is not quantified")));
            };
            current.push(PropLit {
                var,
                negated: lit < 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(err(0, "unterminated clause (missing 0)"));
    }
    Ok(Qbf::new(rounds, clauses)?)
}

/// DIMACS CNF whose clauses each carry three literals of uniform polarity.
pub fn parse_mon3sat_dimacs(text: &str) -> Result<MonotoneCnf, InputError> {
    let lines = split(text, "c");
    let mut it = lines.rows.iter();
    let Some((hline, head)) = it.next() else {
        return Err(err(1, "missing `p cnf` header"));
    };
    if head.len() != 4 || head[0] != "p" || head[1] != "cnf" {
        return Err(err(*hline, "expected `p cnf <nvars> <nclauses>`"));
    }
    let nvars: u32 = parse_num(*hline, head[2], "a variable count")?;
    let mut negative = Vec::new();
    let mut positive = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (line, toks) in it {
        for tok in toks {
            let lit: i64 = parse_num(*line, tok, "a literal")?;
            if lit != 0 {
                current.push(lit);
                continue;
            }
            if current.len() != 3 {
                return Err(err(
                    *line,
                    format!("clause must have exactly 3 literals, found {}", current.len()),
                ));
            }
            let all_pos = current.iter().all(|&l| l > 0);
            let all_neg = current.iter().all(|&l| l < 0);
            if !all_pos && !all_neg {
                return Err(err(*line, "clause mixes positive and negative literals"));
            }
            let triple = [
                current[0].unsigned_abs() as u32,
                current[1].unsigned_abs() as u32,
                current[2].unsigned_abs() as u32,
            ];
            if all_pos {
                positive.push(triple);
            } else {
                negative.push(triple);
            }
            current.clear();
        }
    }
    if !current.is_empty() {
        return Err(err(0, "unterminated clause (missing 0)"));
    }
    Ok(MonotoneCnf::new(nvars, negative, positive)?)
}

/// Not-all-equal instances: `a`/`e` prefix lines then `nae a b c` lines.
pub fn parse_qnae(text: &str) -> Result<QnaeInstance, InputError> {
    let lines = split(text, "#");
    let mut prefix = Vec::new();
    let mut constraints = Vec::new();
    for (line, toks) in &lines.rows {
        match toks[0] {
            "a" | "e" => {
                let q = if toks[0] == "a" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                for tok in &toks[1..] {
                    prefix.push((q, parse_num(*line, tok, "a variable")?));
                }
            }
            "nae" => {
                if toks.len() != 4 {
                    return Err(err(*line, "expected `nae <a> <b> <c>`"));
                }
                constraints.push([
                    parse_num(*line, toks[1], "a variable")?,
                    parse_num(*line, toks[2], "a variable")?,
                    parse_num(*line, toks[3], "a variable")?,
                ]);
            }
            other => return Err(err(*line, format!("unexpected directive `{other}`"))),
        }
    }
    Ok(QnaeInstance::new(prefix, constraints)?)
}

/// Boolean CSP instances: `bcsp <nvars>` then `neq x y` / `disj x y z`.
pub fn parse_bcsp(text: &str) -> Result<BoolCsp, InputError> {
    let lines = split(text, "#");
    let mut it = lines.rows.iter();
    let Some((hline, head)) = it.next() else {
        return Err(err(1, "missing `bcsp <nvars>` header"));
    };
    if head.len() != 2 || head[0] != "bcsp" {
        return Err(err(*hline, "expected header `bcsp <nvars>`"));
    }
    let nvars: u32 = parse_num(*hline, head[1], "a variable count")?;
    let mut constraints = Vec::new();
    for (line, toks) in it {
        match toks[0] {
            "neq" if toks.len() == 3 => constraints.push(BoolConstraint::Neq(
                parse_num(*line, toks[1], "a variable")?,
                parse_num(*line, toks[2], "a variable")?,
            )),
            "disj" if toks.len() == 4 => constraints.push(BoolConstraint::Disj(
                parse_num(*line, toks[1], "a variable")?,
                parse_num(*line, toks[2], "a variable")?,
                parse_num(*line, toks[3], "a variable")?,
            )),
            other => {
                return Err(err(
                    *line,
                    format!("expected `neq x y` or `disj x y z`, found `{other}`"),
                ))
            }
        }
    }
    Ok(BoolCsp::new(nvars, constraints)?)
}
