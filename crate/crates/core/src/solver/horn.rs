//! Equality-closure saturation for Horn-shaped matrices.
//!
//! A clause is Horn-shaped when it has at most one positive literal. Over
//! equality atoms, satisfiability of a Horn conjunction with some variables
//! pre-assigned reduces to computing the closure of forced equalities:
//! fire every implication whose negated atoms are all merged, transitively,
//! then check that the closure neither merges two pre-assigned classes nor
//! falsifies an all-negative clause. Distinct closure classes can always be
//! sent to distinct fresh values, which satisfies everything else.

use crate::formula::{Clause, Polarity, Variable};
use crate::partition::Partition;

use super::SolverError;

/// Plain union-find with path halving.
#[derive(Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true if the roots were distinct.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb) as usize] = ra.min(rb);
        true
    }

    pub fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Why a Horn matrix is unsatisfiable under the fixed kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HornWitness {
    /// The closure merged two variables held distinct by the fixed kernel.
    ForcedEquality(Variable, Variable),
    /// An all-negative clause whose atoms are all merged by the closure.
    ViolatedClause(Clause),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HornOutcome {
    /// The closure kernel over all variables; unassigned closure classes
    /// stand for fresh pairwise-distinct values.
    Consistent(Partition),
    Inconsistent(HornWitness),
}

/// Saturates a Horn-shaped clause set under a fixed kernel on the leading
/// variables `1..=fixed.len()`.
pub fn horn_saturate(
    clauses: &[Clause],
    num_vars: u32,
    fixed: Option<&Partition>,
) -> Result<HornOutcome, SolverError> {
    for c in clauses {
        let positives = c
            .literals()
            .iter()
            .filter(|l| l.polarity == Polarity::Eq)
            .count();
        if positives > 1 {
            return Err(SolverError::NonHornClause {
                clause: c.to_string(),
            });
        }
        for v in c.variables() {
            if v.index() > num_vars {
                return Err(SolverError::VariableOutOfRange {
                    var: v.index(),
                    num_vars,
                });
            }
        }
    }
    let fixed_len = fixed.map_or(0, |p| p.len());
    assert!(fixed_len <= num_vars as usize, "fixed kernel too wide");

    let mut uf = UnionFind::new(num_vars as usize);
    // Representative variable (slot) of each fixed class.
    let mut class_rep: Vec<u32> = Vec::new();
    if let Some(p) = fixed {
        for s in 0..p.len() {
            let c = p.class_of(s) as usize;
            if c == class_rep.len() {
                class_rep.push(s as u32);
            } else {
                uf.union(s as u32, class_rep[c]);
            }
        }
    }

    // Fire implications to a fixed point.
    let mut fired = vec![false; clauses.len()];
    loop {
        let mut changed = false;
        for (ci, c) in clauses.iter().enumerate() {
            if fired[ci] {
                continue;
            }
            let positive = c.literals().iter().find(|l| l.polarity == Polarity::Eq);
            let Some(pos_lit) = positive else { continue };
            let premise_holds = c
                .literals()
                .iter()
                .filter(|l| l.polarity == Polarity::Neq)
                .all(|l| uf.same(l.atom.a().slot() as u32, l.atom.b().slot() as u32));
            if premise_holds {
                fired[ci] = true;
                uf.union(pos_lit.atom.a().slot() as u32, pos_lit.atom.b().slot() as u32);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Two fixed classes merged?
    for i in 0..class_rep.len() {
        for j in i + 1..class_rep.len() {
            if uf.same(class_rep[i], class_rep[j]) {
                return Ok(HornOutcome::Inconsistent(HornWitness::ForcedEquality(
                    Variable::new(class_rep[i] + 1),
                    Variable::new(class_rep[j] + 1),
                )));
            }
        }
    }
    // All-negative clause fully merged?
    for c in clauses {
        if c.literals().iter().all(|l| l.polarity == Polarity::Neq) {
            let all_merged = c
                .literals()
                .iter()
                .all(|l| uf.same(l.atom.a().slot() as u32, l.atom.b().slot() as u32));
            if all_merged {
                return Ok(HornOutcome::Inconsistent(HornWitness::ViolatedClause(
                    c.clone(),
                )));
            }
        }
    }

    // Closure kernel: label classes by first occurrence in index order.
    let roots: Vec<u64> = (0..num_vars).map(|s| uf.find(s) as u64).collect();
    let kernel = Partition::kernel_of(&roots);
    Ok(HornOutcome::Consistent(kernel))
}
