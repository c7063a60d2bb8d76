//! Layered proof calculus for formulas over the implication language
//! `{x=y -> u=v, x=y}`: certificates refuting (or deriving equalities over)
//! sentences and relations defined by odd-level alternating formulas,
//! verified level by level down to flat derivations, plus a
//! saturation-based proof search and a size audit.
//!
//! A level-0 proof is a sequence of equalities, each a hypothesis, a
//! transitivity combination of two earlier steps, a unit constraint, or
//! the conclusion of an implication whose premise is an earlier step. A
//! level-k proof derives equalities over the outer variables: each step
//! carries a set of universal assignments `u = z` (z earlier in the
//! variable order, each u assigned at most once) and a level-(k-1)
//! subproof from the hypotheses extended with those assignments and the
//! earlier conclusions. Contradiction certificates end either in a
//! level-(k-1) contradiction or in a derived equality on a universal
//! variable the step left unassigned.

mod layer;
mod search;
mod serial;
mod size;
mod verify;

use std::fmt;

use thiserror::Error;

use crate::formula::Variable;

pub use layer::layer_formula;
pub use search::{
    decide_sigma, saturate_search, verify_refutation, SearchCaps, SearchResult, SearchVerdict,
    SigmaDecision,
};
pub use serial::{parse_proof, print_proof, ProofParseError};
pub use size::{size_audit, SizeAudit};
pub use verify::{verify_k_contradiction, verify_k_proof, verify_zero_proof, ProofReject};

/// Unordered pair of distinct variables; commutativity of equality is
/// respected by canonical storage.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equality {
    a: Variable,
    b: Variable,
}

impl Equality {
    pub fn new(a: Variable, b: Variable) -> Option<Self> {
        match a.index().cmp(&b.index()) {
            std::cmp::Ordering::Less => Some(Equality { a, b }),
            std::cmp::Ordering::Greater => Some(Equality { a: b, b: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn a(self) -> Variable {
        self.a
    }

    pub fn b(self) -> Variable {
        self.b
    }

    pub fn touches(self, v: Variable) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(self, v: Variable) -> Option<Variable> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }

    /// Chains two equalities sharing a variable into a third.
    pub fn combine(self, other: Equality) -> Option<Equality> {
        let shared = [self.a, self.b]
            .into_iter()
            .find(|&v| other.touches(v))?;
        Equality::new(self.other(shared)?, other.other(shared)?)
    }
}

impl fmt::Debug for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.a, self.b)
    }
}

impl fmt::Display for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.a, self.b)
    }
}

/// Constraint over the implication language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaConstraint {
    Unit(Equality),
    /// premise -> conclusion
    Implication(Equality, Equality),
}

/// Flat existential core: `exists z1..zm . C1 and ... and Cs`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaCore {
    pub exists: Vec<Variable>,
    pub constraints: Vec<GammaConstraint>,
}

/// One alternation layer: an existential block followed by a universal one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub exists: Vec<Variable>,
    pub forall: Vec<Variable>,
}

/// Odd-level alternating view of a formula over the implication language:
/// free variables, `k` layers, and the flat core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredFormula {
    pub free: Vec<Variable>,
    pub layers: Vec<Layer>,
    pub core: SigmaCore,
}

impl LayeredFormula {
    /// The proof level `k`.
    pub fn level(&self) -> usize {
        self.layers.len()
    }

    /// Variables a step conclusion may mention at this level: the free
    /// variables plus the outermost existential block.
    pub fn x_vars(&self) -> Vec<Variable> {
        let mut out = self.free.clone();
        match self.layers.first() {
            Some(layer) => out.extend(layer.exists.iter().copied()),
            None => out.extend(self.core.exists.iter().copied()),
        }
        out
    }

    /// The inner formula one level down: the outermost existential and
    /// universal blocks become free.
    pub fn peel(&self) -> LayeredFormula {
        let layer = self.layers.first().expect("peel needs a layer");
        let mut free = self.free.clone();
        free.extend(layer.exists.iter().copied());
        free.extend(layer.forall.iter().copied());
        LayeredFormula {
            free,
            layers: self.layers[1..].to_vec(),
            core: self.core.clone(),
        }
    }
}

/// Justification of one flat derivation step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroJust {
    /// Member of the hypothesis set.
    Hypothesis,
    /// Chained from two earlier steps (1-based indices).
    Transitivity(usize, usize),
    /// A unit constraint of the core.
    UnitConstraint,
    /// Conclusion of a core implication whose premise is the earlier step.
    Implication(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroStep {
    pub equality: Equality,
    pub just: ZeroJust,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroProof {
    pub steps: Vec<ZeroStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofMode {
    Equality,
    Contradiction,
}

/// One step of a level-k proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KStep {
    /// `None` marks the bottom terminal of a contradiction proof.
    pub conclusion: Option<Equality>,
    /// Universal assignments `u = z`, left variable first.
    pub forall_assignments: Vec<(Variable, Variable)>,
    pub subproof: Proof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KProof {
    pub mode: ProofMode,
    pub steps: Vec<KStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Zero(ZeroProof),
    K(KProof),
}

impl Proof {
    /// Total number of steps, nested subproofs included.
    pub fn total_steps(&self) -> u64 {
        match self {
            Proof::Zero(p) => p.steps.len() as u64,
            Proof::K(p) => p
                .steps
                .iter()
                .map(|s| 1 + s.subproof.total_steps())
                .sum(),
        }
    }

    /// Nesting depth: 0 for flat proofs.
    pub fn level(&self) -> u32 {
        match self {
            Proof::Zero(_) => 0,
            Proof::K(p) => {
                1 + p
                    .steps
                    .iter()
                    .map(|s| s.subproof.level())
                    .max()
                    .unwrap_or(0)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("clause `{0}` is not expressible over the implication language")]
    NonGammaClause(String),
    #[error("formula has free variables but a sentence is required")]
    NotASentence,
    #[error("layer holds {got} variables, cap is {cap}")]
    LayerCapExceeded { got: usize, cap: usize },
    #[error("universal block holds {got} variables, cap is {cap}")]
    UniversalCapExceeded { got: usize, cap: usize },
    #[error("search node budget of {0} exhausted")]
    SearchBudgetExhausted(u64),
    #[error("hypothesis {0} mentions a variable outside the free variables")]
    HypothesisOutOfScope(Equality),
}
