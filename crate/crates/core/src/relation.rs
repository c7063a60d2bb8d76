//! Equality relations: an arity plus the set of satisfying kernels.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::QEFormula;
use crate::partition::{enumerate_partitions_capped, Partition, PartitionError};
use crate::solver::{self, SolverConfig, SolverError};

/// Default bound on the arity accepted by [`relation_from_formula`].
pub const DEFAULT_ARITY_CAP: u32 = 8;

#[derive(Debug, Error)]
pub enum RelationError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("formula has no free variables; relations need arity >= 1")]
    NoFreeVariables,
    #[error("kernel arity {got} does not match relation arity {want}")]
    ArityMismatch { got: usize, want: u32 },
}

/// A relation over an infinite domain whose membership depends only on the
/// equality kernel of the argument tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    arity: u32,
    kernels: BTreeSet<Partition>,
}

impl Relation {
    pub fn new(arity: u32, kernels: BTreeSet<Partition>) -> Self {
        for k in &kernels {
            assert_eq!(k.len(), arity as usize, "kernel arity mismatch");
        }
        Relation { arity, kernels }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn kernels(&self) -> &BTreeSet<Partition> {
        &self.kernels
    }

    pub fn contains(&self, kernel: &Partition) -> bool {
        self.kernels.contains(kernel)
    }

    /// The full relation of the given arity (every kernel satisfies it).
    pub fn full(arity: u32, cap: u32) -> Result<Self, PartitionError> {
        let kernels = enumerate_partitions_capped(arity, cap)?.collect();
        Ok(Relation { arity, kernels })
    }
}

/// Computes the relation defined by a formula with free variables `1..m`:
/// a kernel belongs iff the sentence obtained by fixing the free variables
/// to a representative assignment of that kernel is true.
pub fn relation_from_formula(f: &QEFormula, cfg: &SolverConfig) -> Result<Relation, RelationError> {
    relation_from_formula_capped(f, cfg, DEFAULT_ARITY_CAP)
}

pub fn relation_from_formula_capped(
    f: &QEFormula,
    cfg: &SolverConfig,
    cap: u32,
) -> Result<Relation, RelationError> {
    let m = f.num_free();
    if m == 0 {
        return Err(RelationError::NoFreeVariables);
    }
    let mut kernels = BTreeSet::new();
    for p in enumerate_partitions_capped(m, cap)? {
        if solver::decide_fixed_free(f, &p, cfg)?.truth {
            kernels.insert(p);
        }
    }
    Ok(Relation { arity: m, kernels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_relation_source;
    use crate::formula::RelationSource;

    fn defined(text: &str) -> QEFormula {
        match parse_relation_source(text).unwrap() {
            RelationSource::Defined(f) => f,
            _ => panic!("expected clause-mode relation"),
        }
    }

    fn rgs(classes: &[u32]) -> Partition {
        Partition::from_rgs(classes.to_vec()).unwrap()
    }

    #[test]
    fn unit_equality_relation() {
        let f = defined("rel 2\nc 1=2\n");
        let r = relation_from_formula(&f, &SolverConfig::default()).unwrap();
        assert_eq!(r.kernels().len(), 1);
        assert!(r.contains(&rgs(&[0, 0])));
    }

    #[test]
    fn disequality_gadget_relation() {
        // forall z . (x != y or y = z) defines x != y.
        let f = defined("rel 2\nforall 3\nc 1!=2 2=3\n");
        let r = relation_from_formula(&f, &SolverConfig::default()).unwrap();
        let expected: BTreeSet<_> = [rgs(&[0, 1])].into_iter().collect();
        assert_eq!(r.kernels(), &expected);
    }

    #[test]
    fn binary_disjunction_relation_matches_brute_force() {
        // (1=2 or 3=4) over arity 4: brute-force evaluation over all 15
        // kernels is the oracle here.
        let f = defined("rel 4\nc 1=2 3=4\n");
        let r = relation_from_formula(&f, &SolverConfig::default()).unwrap();
        let mut expected = BTreeSet::new();
        for p in crate::partition::enumerate_partitions(4).unwrap() {
            if p.same_class(0, 1) || p.same_class(2, 3) {
                expected.insert(p);
            }
        }
        assert_eq!(r.kernels(), &expected);
        assert_eq!(r.kernels().len(), 8);
    }
}
