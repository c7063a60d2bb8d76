//! Deterministic printers for the QECNF and relation formats. Printing then
//! parsing is the identity on valid formulas.

use std::fmt::Write;

use super::{QEFormula, Quantifier};
use crate::relation::Relation;

/// Renders a formula in the QECNF format: header, name lines, prefix blocks
/// (maximal runs of one quantifier per line), then clause lines.
pub fn print_qecnf(f: &QEFormula) -> String {
    let mut out = String::new();
    writeln!(out, "qecnf {}", f.num_vars()).unwrap();
    for (v, name) in f.names() {
        writeln!(out, "name {v} {name}").unwrap();
    }
    let mut block: Option<(Quantifier, Vec<u32>)> = None;
    let flush = |out: &mut String, block: &mut Option<(Quantifier, Vec<u32>)>| {
        if let Some((q, vars)) = block.take() {
            write!(out, "{}", q.keyword()).unwrap();
            for v in vars {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
    };
    for &(q, v) in f.prefix() {
        match &mut block {
            Some((bq, vars)) if *bq == q => vars.push(v.index()),
            _ => {
                flush(&mut out, &mut block);
                block = Some((q, vec![v.index()]));
            }
        }
    }
    flush(&mut out, &mut block);
    for c in f.matrix() {
        writeln!(out, "c {c}").unwrap();
    }
    out
}

/// Renders an explicit relation: `rel <arity>` plus one partition line per
/// kernel in lexicographic order.
pub fn print_relation(r: &Relation) -> String {
    let mut out = String::new();
    writeln!(out, "rel {}", r.arity()).unwrap();
    for k in r.kernels() {
        writeln!(out, "p {k}").unwrap();
    }
    out
}
