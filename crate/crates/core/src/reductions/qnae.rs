//! Reduction from quantified not-all-equal 3-SAT to QCSP over
//! `{!=, x=y or u=v}`: every instance variable becomes a pair `(v, v')`
//! with `v = v'` encoding true, quantified like the original; each
//! constraint contributes one not-all-equal gadget with its auxiliaries
//! existential and innermost.

use crate::formula::{QEFormula, Quantifier, Variable};
use crate::transform::AlternationProfile;

use super::orchain::nae_gadget_pairs;
use super::{FormulaBuilder, GadgetReport, ReduceError};

/// Quantified not-all-equal instance: an alternating prefix over
/// propositional variables `1..=n` and constraints on variable triples
/// (repetition allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QnaeInstance {
    prefix: Vec<(Quantifier, u32)>,
    constraints: Vec<[u32; 3]>,
}

impl QnaeInstance {
    pub fn new(
        prefix: Vec<(Quantifier, u32)>,
        constraints: Vec<[u32; 3]>,
    ) -> Result<Self, ReduceError> {
        let n = prefix.len() as u32;
        let mut seen = vec![false; n as usize];
        for &(_, v) in &prefix {
            if v == 0 || v > n || seen[(v - 1) as usize] {
                return Err(ReduceError::UnquantifiedVariable(v));
            }
            seen[(v - 1) as usize] = true;
        }
        for c in &constraints {
            for &v in c {
                if v == 0 || v > n {
                    return Err(ReduceError::UnquantifiedVariable(v));
                }
            }
        }
        Ok(QnaeInstance {
            prefix,
            constraints,
        })
    }

    pub fn prefix(&self) -> &[(Quantifier, u32)] {
        &self.prefix
    }

    pub fn constraints(&self) -> &[[u32; 3]] {
        &self.constraints
    }

    pub fn profile(&self) -> AlternationProfile {
        let mut blocks = Vec::new();
        for &(q, _) in &self.prefix {
            if blocks.last() != Some(&q) {
                blocks.push(q);
            }
        }
        AlternationProfile { blocks }
    }
}

/// Builds the QCSP instance for a target alternation bound `k`.
pub fn qnae_to_qcsp(
    inst: &QnaeInstance,
    k: u32,
) -> Result<(QEFormula, GadgetReport), ReduceError> {
    let needed = inst.profile().pi_rank();
    if needed > k as usize {
        return Err(ReduceError::ProfileMismatch {
            needed,
            target: k as usize,
        });
    }
    let mut b = FormulaBuilder::new();
    // Doubled prefix, in instance order; pair indices are (2v-1, 2v).
    let mut left = vec![Variable::new(1); inst.prefix.len()];
    let mut right = vec![Variable::new(1); inst.prefix.len()];
    for &(q, v) in &inst.prefix {
        let l = b.var(q, format!("v{v}"), format!("instance variable {v}, pair left"));
        let r = b.var(q, format!("v{v}'"), format!("instance variable {v}, pair right"));
        left[(v - 1) as usize] = l;
        right[(v - 1) as usize] = r;
    }
    for (ci, &[x, y, z]) in inst.constraints.iter().enumerate() {
        let pairs = [
            (left[(x - 1) as usize], right[(x - 1) as usize]),
            (left[(y - 1) as usize], right[(y - 1) as usize]),
            (left[(z - 1) as usize], right[(z - 1) as usize]),
        ];
        let piece = nae_gadget_pairs(pairs, b.alloc(), &format!("nae{}", ci + 1));
        b.absorb(piece);
    }
    b.finish()
}
