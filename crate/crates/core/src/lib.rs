//! Decision oracle, reduction generators, layered proof calculus and
//! syntactic-fragment classifier for quantified constraint satisfaction
//! over equality languages.
//!
//! Everything in this crate manipulates prenex sentences whose matrix is a
//! CNF over equality/disequality atoms. Satisfaction of such a matrix
//! depends only on the equality kernel of an assignment, so the whole
//! crate works with canonical set partitions instead of raw domain values.

pub mod classify;
pub mod formula;
pub mod partition;
pub mod proofsys;
pub mod reductions;
pub mod relation;
pub mod solver;
pub mod transform;

pub use formula::{Atom, Clause, Literal, Polarity, QEFormula, Quantifier, Variable};
pub use partition::Partition;
pub use relation::Relation;
pub use solver::{SolverConfig, Verdict};
