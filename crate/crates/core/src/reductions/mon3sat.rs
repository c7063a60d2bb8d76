//! Reduction from the complement of monotone 3-SAT to Π₂ instances over the
//! Horn language `{x=y -> u=v, x=y}`: the output is true iff the monotone
//! instance is unsatisfiable.

use crate::formula::{Polarity, QEFormula, Quantifier, Variable};

use super::{FormulaBuilder, GadgetReport, ReduceError};

/// Monotone 3-CNF: every clause is purely negative or purely positive,
/// stored as variable triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCnf {
    num_vars: u32,
    negative: Vec<[u32; 3]>,
    positive: Vec<[u32; 3]>,
}

impl MonotoneCnf {
    pub fn new(
        num_vars: u32,
        negative: Vec<[u32; 3]>,
        positive: Vec<[u32; 3]>,
    ) -> Result<Self, ReduceError> {
        for c in negative.iter().chain(positive.iter()) {
            for &v in c {
                if v == 0 || v > num_vars {
                    return Err(ReduceError::UnquantifiedVariable(v));
                }
            }
        }
        Ok(MonotoneCnf {
            num_vars,
            negative,
            positive,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn negative(&self) -> &[[u32; 3]] {
        &self.negative
    }

    pub fn positive(&self) -> &[[u32; 3]] {
        &self.positive
    }
}

/// Builds the Π₂ instance. The prefix is `forall b0 b1 v1..vn exists
/// N1..Nl N'2..N'l P1..Pm P'2..P'm`; the matrix chains every clause
/// collector through primed variables and closes with the unit
/// `N'_l = P'_m`, so a satisfying assignment forces both chains onto
/// different markers and kills the unit.
///
/// Instances with fewer than two clauses of a polarity are padded first:
/// by duplicating an existing clause, or, when a polarity is empty, by a
/// trivially satisfiable clause over a fresh variable (flagged in the
/// report).
pub fn mon3sat_to_pi2(phi: &MonotoneCnf) -> Result<(QEFormula, GadgetReport), ReduceError> {
    let mut num_vars = phi.num_vars;
    let mut negative = phi.negative.clone();
    let mut positive = phi.positive.clone();
    let mut notes = Vec::new();
    if negative.is_empty() {
        num_vars += 1;
        negative.push([num_vars; 3]);
        notes.push(format!(
            "degenerate: no negative clauses; padded with a satisfiable clause over fresh variable {num_vars}"
        ));
    }
    if positive.is_empty() {
        num_vars += 1;
        positive.push([num_vars; 3]);
        notes.push(format!(
            "degenerate: no positive clauses; padded with a satisfiable clause over fresh variable {num_vars}"
        ));
    }
    if negative.len() < 2 {
        negative.push(negative[0]);
        notes.push("padded: duplicated a negative clause to reach two".into());
    }
    if positive.len() < 2 {
        positive.push(positive[0]);
        notes.push("padded: duplicated a positive clause to reach two".into());
    }
    let l = negative.len();
    let m = positive.len();

    let mut b = FormulaBuilder::new();
    let b0 = b.var(Quantifier::Forall, "b0", "false marker");
    let b1 = b.var(Quantifier::Forall, "b1", "true marker");
    let vs: Vec<Variable> = (1..=num_vars)
        .map(|i| b.var(Quantifier::Forall, format!("v{i}"), format!("instance variable {i}")))
        .collect();
    let ns: Vec<Variable> = (1..=l)
        .map(|h| b.var(Quantifier::Exists, format!("N{h}"), format!("negative clause {h} collector")))
        .collect();
    let nps: Vec<Variable> = (2..=l)
        .map(|h| b.var(Quantifier::Exists, format!("N'{h}"), format!("negative chain link {h}")))
        .collect();
    let ps: Vec<Variable> = (1..=m)
        .map(|h| b.var(Quantifier::Exists, format!("P{h}"), format!("positive clause {h} collector")))
        .collect();
    let pps: Vec<Variable> = (2..=m)
        .map(|h| b.var(Quantifier::Exists, format!("P'{h}"), format!("positive chain link {h}")))
        .collect();
    for note in notes {
        b.note(note);
    }

    let var = |i: u32| vs[(i - 1) as usize];
    // (1) negative collectors: v = b0 -> b0 = N_h per occurring variable.
    for (h, c) in negative.iter().enumerate() {
        for &v in c {
            b.clause(&[(var(v), b0, Polarity::Neq), (b0, ns[h], Polarity::Eq)]);
        }
    }
    // (2) positive collectors: v = b1 -> b1 = P_h.
    for (h, c) in positive.iter().enumerate() {
        for &v in c {
            b.clause(&[(var(v), b1, Polarity::Neq), (b1, ps[h], Polarity::Eq)]);
        }
    }
    // (3) negative chain.
    b.clause(&[(ns[0], ns[1], Polarity::Neq), (ns[1], nps[0], Polarity::Eq)]);
    for h in 3..=l {
        b.clause(&[
            (nps[h - 3], ns[h - 1], Polarity::Neq),
            (ns[h - 1], nps[h - 2], Polarity::Eq),
        ]);
    }
    // (4) positive chain.
    b.clause(&[(ps[0], ps[1], Polarity::Neq), (ps[1], pps[0], Polarity::Eq)]);
    for h in 3..=m {
        b.clause(&[
            (pps[h - 3], ps[h - 1], Polarity::Neq),
            (ps[h - 1], pps[h - 2], Polarity::Eq),
        ]);
    }
    // (5) the closing unit clause.
    b.clause(&[(nps[l - 2], pps[m - 2], Polarity::Eq)]);

    b.finish()
}
