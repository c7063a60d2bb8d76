//! Reduction from Boolean CSP over `{x != y, x=y or y=z}` to Π₂ instances
//! over `{x=y or u=v}`-style positive clauses: two outermost universal
//! markers stand in for the constants 0 and 1, every variable is pinned to
//! one of them by a domain clause, and disequality expands to four
//! two-literal clauses. When the markers coincide the matrix is trivially
//! satisfiable, so truth equals Boolean satisfiability.

use crate::formula::{Polarity, QEFormula, Quantifier, Variable};

use super::{FormulaBuilder, GadgetReport, ReduceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolConstraint {
    /// `x != y`
    Neq(u32, u32),
    /// `x = y or y = z`
    Disj(u32, u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolCsp {
    num_vars: u32,
    constraints: Vec<BoolConstraint>,
}

impl BoolCsp {
    pub fn new(num_vars: u32, constraints: Vec<BoolConstraint>) -> Result<Self, ReduceError> {
        for c in &constraints {
            let vars: Vec<u32> = match *c {
                BoolConstraint::Neq(x, y) => vec![x, y],
                BoolConstraint::Disj(x, y, z) => vec![x, y, z],
            };
            for v in vars {
                if v == 0 || v > num_vars {
                    return Err(ReduceError::UnquantifiedVariable(v));
                }
            }
        }
        Ok(BoolCsp {
            num_vars,
            constraints,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn constraints(&self) -> &[BoolConstraint] {
        &self.constraints
    }
}

pub fn boolcsp_to_pi2_disj(inst: &BoolCsp) -> Result<(QEFormula, GadgetReport), ReduceError> {
    let mut b = FormulaBuilder::new();
    let b0 = b.var(Quantifier::Forall, "b0", "marker for 0");
    let b1 = b.var(Quantifier::Forall, "b1", "marker for 1");
    let vs: Vec<Variable> = (1..=inst.num_vars)
        .map(|i| b.var(Quantifier::Exists, format!("v{i}"), format!("instance variable {i}")))
        .collect();
    let var = |i: u32| vs[(i - 1) as usize];
    // Domain clause per variable.
    for &v in &vs {
        b.clause(&[(v, b0, Polarity::Eq), (v, b1, Polarity::Eq)]);
    }
    for c in &inst.constraints {
        match *c {
            BoolConstraint::Neq(x, y) => {
                let (x, y) = (var(x), var(y));
                b.clause(&[(x, b0, Polarity::Eq), (x, b1, Polarity::Eq)]);
                b.clause(&[(x, b0, Polarity::Eq), (y, b0, Polarity::Eq)]);
                b.clause(&[(y, b1, Polarity::Eq), (x, b1, Polarity::Eq)]);
                b.clause(&[(y, b1, Polarity::Eq), (y, b0, Polarity::Eq)]);
            }
            BoolConstraint::Disj(x, y, z) => {
                b.clause(&[(var(x), var(y), Polarity::Eq), (var(y), var(z), Polarity::Eq)]);
            }
        }
    }
    b.finish()
}
