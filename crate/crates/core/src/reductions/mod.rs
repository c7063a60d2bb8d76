//! Generators for the polynomial-time reductions: quantified 3-SAT into
//! implication-relation QCSP, monotone 3-SAT into Π₂ Horn instances,
//! quantified not-all-equal 3-SAT into disjunction languages, and Boolean
//! CSP into Π₂ positive instances. Every generator emits a formula plus a
//! provenance report mapping generated variables to gadget roles.

pub mod bcsp;
pub mod boolean;
pub mod mon3sat;
pub mod orchain;
pub mod parse;
pub mod qnae;
pub mod qsat;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, FormulaError, Polarity, QEFormula, Quantifier, SimplifiedClause, Variable};

pub use bcsp::{boolcsp_to_pi2_disj, BoolConstraint, BoolCsp};
pub use mon3sat::{mon3sat_to_pi2, MonotoneCnf};
pub use orchain::{nae_gadget, or_chain, GadgetPiece, Pred};
pub use qnae::{qnae_to_qcsp, QnaeInstance};
pub use qsat::{build_chain_gadget, build_clause_paths, qbf_to_qcsp, qbf_to_qcsp_existential_tf, Labels};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("clause must have exactly 3 literals, found {0}")]
    MalformedClauseArity(usize),
    #[error("clause mixes positive and negative literals")]
    MixedPolarity,
    #[error("empty predicate list")]
    EmptyPredicateList,
    #[error("gadget variables must be distinct")]
    NonDistinctVariables,
    #[error("instance needs Pi_{needed} but the target is Pi_{target}")]
    ProfileMismatch { needed: usize, target: usize },
    #[error("variable {0} is not quantified by the instance prefix")]
    UnquantifiedVariable(u32),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Propositional variable of a quantified 3-CNF with strictly alternating
/// exists/forall rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropVar {
    /// The i-th existential variable (1-based round).
    X(u32),
    /// The i-th universal variable.
    Y(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropLit {
    pub var: PropVar,
    pub negated: bool,
}

/// Quantified 3-CNF `exists x1 forall y1 ... exists xn forall yn . phi`,
/// clauses of exactly three literals with repetition allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf {
    rounds: u32,
    clauses: Vec<[PropLit; 3]>,
}

impl Qbf {
    pub fn new(rounds: u32, clauses: Vec<[PropLit; 3]>) -> Result<Self, ReduceError> {
        assert!(rounds >= 1, "a quantified 3-CNF needs at least one round");
        for c in &clauses {
            for l in c {
                let i = match l.var {
                    PropVar::X(i) | PropVar::Y(i) => i,
                };
                if i == 0 || i > rounds {
                    return Err(ReduceError::UnquantifiedVariable(i));
                }
            }
        }
        Ok(Qbf { rounds, clauses })
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn clauses(&self) -> &[[PropLit; 3]] {
        &self.clauses
    }
}

/// Provenance of generated variables: role strings double as stable names,
/// so outputs diff cleanly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GadgetReport {
    roles: BTreeMap<u32, String>,
    notes: Vec<String>,
}

impl GadgetReport {
    pub fn role_of(&self, v: Variable) -> Option<&str> {
        self.roles.get(&v.index()).map(|s| s.as_str())
    }

    pub fn roles(&self) -> &BTreeMap<u32, String> {
        &self.roles
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// One `role` line per generated variable, then `note` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (v, role) in &self.roles {
            writeln!(out, "role {v} {role}").unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note {n}").unwrap();
        }
        out
    }
}

/// Fresh-variable allocator shared by the gadget builders.
#[derive(Debug)]
pub struct VarAlloc {
    next: u32,
}

impl VarAlloc {
    pub fn starting_after(last: u32) -> Self {
        VarAlloc { next: last }
    }

    pub fn fresh(&mut self) -> Variable {
        self.next += 1;
        Variable::new(self.next)
    }

    pub fn last(&self) -> u32 {
        self.next
    }
}

/// Accumulates prefix, matrix, names and roles while a reduction runs.
pub(crate) struct FormulaBuilder {
    alloc: VarAlloc,
    prefix: Vec<(Quantifier, Variable)>,
    clauses: Vec<Clause>,
    names: BTreeMap<u32, String>,
    report: GadgetReport,
}

impl FormulaBuilder {
    pub fn new() -> Self {
        FormulaBuilder {
            alloc: VarAlloc::starting_after(0),
            prefix: Vec::new(),
            clauses: Vec::new(),
            names: BTreeMap::new(),
            report: GadgetReport::default(),
        }
    }

    pub fn var(&mut self, q: Quantifier, name: impl Into<String>, role: impl Into<String>) -> Variable {
        let v = self.alloc.fresh();
        self.prefix.push((q, v));
        let name = name.into();
        self.names.insert(v.index(), name);
        self.report.roles.insert(v.index(), role.into());
        v
    }

    /// Appends a piece produced by a standalone gadget builder: its clauses
    /// plus innermost-existential quantifiers for its fresh variables.
    pub fn absorb(&mut self, piece: GadgetPiece) {
        for (v, role) in piece.fresh {
            self.prefix.push((Quantifier::Exists, v));
            self.names.insert(v.index(), role.clone());
            self.report.roles.insert(v.index(), role);
        }
        self.clauses.extend(piece.clauses);
    }

    pub fn alloc(&mut self) -> &mut VarAlloc {
        &mut self.alloc
    }

    pub fn clause(&mut self, lits: &[(Variable, Variable, Polarity)]) {
        match Clause::from_raw(lits.iter().copied()) {
            SimplifiedClause::Clause(c) => self.clauses.push(c),
            other => unreachable!("generator built a degenerate clause: {other:?}"),
        }
    }

    /// Labeled edge `from --label--> to`, the single constraint
    /// `(from != label or label = to)`.
    pub fn edge(&mut self, from: Variable, label: Variable, to: Variable) {
        self.clause(&[
            (from, label, Polarity::Neq),
            (label, to, Polarity::Eq),
        ]);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn finish(self) -> Result<(QEFormula, GadgetReport), ReduceError> {
        let f = QEFormula::new(self.alloc.last(), self.prefix, self.clauses, self.names)?;
        Ok((f, self.report))
    }
}
