//! Formula data model: prenex quantified sentences whose matrix is a CNF
//! over equality/disequality atoms, plus kernel-based evaluation.

mod parse;
mod print;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::partition::Partition;

pub use parse::{parse_qecnf, parse_relation_source, ParseError, ParseWarning, Parsed, RelationSource};
pub use print::{print_qecnf, print_relation};

/// 1-based variable index, dense within a formula.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u32);

impl Variable {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices are 1-based");
        Variable(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// 0-based slot, handy for dense tables.
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered pair of distinct variables, stored with the smaller index first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    a: Variable,
    b: Variable,
}

impl Atom {
    /// Returns `None` for the degenerate pair `x,x`; such atoms are
    /// simplified away before clause construction.
    pub fn new(a: Variable, b: Variable) -> Option<Self> {
        match a.index().cmp(&b.index()) {
            std::cmp::Ordering::Less => Some(Atom { a, b }),
            std::cmp::Ordering::Greater => Some(Atom { a: b, b: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn a(self) -> Variable {
        self.a
    }

    pub fn b(self) -> Variable {
        self.b
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    /// `a = b`
    Eq,
    /// `a != b`
    Neq,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub atom: Atom,
    pub polarity: Polarity,
}

impl Literal {
    pub fn eq(a: Variable, b: Variable) -> Option<Self> {
        Atom::new(a, b).map(|atom| Literal {
            atom,
            polarity: Polarity::Eq,
        })
    }

    pub fn neq(a: Variable, b: Variable) -> Option<Self> {
        Atom::new(a, b).map(|atom| Literal {
            atom,
            polarity: Polarity::Neq,
        })
    }

    pub fn holds(self, kernel: &Partition) -> bool {
        let same = kernel.same_class(self.atom.a.slot(), self.atom.b.slot());
        match self.polarity {
            Polarity::Eq => same,
            Polarity::Neq => !same,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.polarity {
            Polarity::Eq => "=",
            Polarity::Neq => "!=",
        };
        write!(f, "{}{}{}", self.atom.a, op, self.atom.b)
    }
}

/// Outcome of building a clause from raw literals, after simplification of
/// `x=x` (true) and `x!=x` (false) literals.
#[derive(Debug, PartialEq, Eq)]
pub enum SimplifiedClause {
    Clause(Clause),
    /// The clause contained a true literal or both polarities of one atom.
    Tautology,
    /// Every literal simplified to false.
    Unsatisfiable,
}

/// Nonempty, duplicate-free set of literals, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Canonicalizes raw `(a, b, polarity)` triples into a clause.
    pub fn from_raw(raw: impl IntoIterator<Item = (Variable, Variable, Polarity)>) -> SimplifiedClause {
        let mut literals: Vec<Literal> = Vec::new();
        let mut any = false;
        for (a, b, polarity) in raw {
            any = true;
            match Atom::new(a, b) {
                Some(atom) => literals.push(Literal { atom, polarity }),
                // x=x is true (whole clause satisfied), x!=x is false (drop literal).
                None => {
                    if polarity == Polarity::Eq {
                        return SimplifiedClause::Tautology;
                    }
                }
            }
        }
        if !any || literals.is_empty() {
            return SimplifiedClause::Unsatisfiable;
        }
        literals.sort_unstable();
        literals.dedup();
        for w in literals.windows(2) {
            if w[0].atom == w[1].atom {
                return SimplifiedClause::Tautology;
            }
        }
        SimplifiedClause::Clause(Clause { literals })
    }

    /// Builds a clause from already-distinct literals; panics on the
    /// degenerate cases, so only use with literals known to be sound.
    pub fn from_literals(literals: Vec<Literal>) -> Self {
        match Clause::from_raw(
            literals
                .into_iter()
                .map(|l| (l.atom.a, l.atom.b, l.polarity)),
        ) {
            SimplifiedClause::Clause(c) => c,
            other => panic!("degenerate clause: {other:?}"),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn holds(&self, kernel: &Partition) -> bool {
        self.literals.iter().any(|l| l.holds(kernel))
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.literals
            .iter()
            .flat_map(|l| [l.atom.a, l.atom.b].into_iter())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.literals {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("duplicate prefix variable {0}")]
    DuplicatePrefixVariable(u32),
    #[error("variable {0} out of range 1..={1}")]
    VariableOutOfRange(u32, u32),
    #[error("free variables must form a leading range 1..m, found gap at {0}")]
    FreeVariableGap(u32),
    #[error("kernel covers {kernel} variables, formula has {vars}")]
    KernelMismatch { kernel: usize, vars: u32 },
}

/// Prenex quantified CNF over equality atoms.
///
/// Variables not bound by the prefix are free; they are only allowed as a
/// leading range `1..m`, which is how relations of arity `m` are defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QEFormula {
    num_vars: u32,
    prefix: Vec<(Quantifier, Variable)>,
    matrix: Vec<Clause>,
    names: BTreeMap<u32, String>,
}

impl QEFormula {
    pub fn new(
        num_vars: u32,
        prefix: Vec<(Quantifier, Variable)>,
        matrix: Vec<Clause>,
        names: BTreeMap<u32, String>,
    ) -> Result<Self, FormulaError> {
        let mut bound = vec![false; num_vars as usize];
        for &(_, v) in &prefix {
            if v.index() > num_vars {
                return Err(FormulaError::VariableOutOfRange(v.index(), num_vars));
            }
            if bound[v.slot()] {
                return Err(FormulaError::DuplicatePrefixVariable(v.index()));
            }
            bound[v.slot()] = true;
        }
        for c in &matrix {
            for v in c.variables() {
                if v.index() > num_vars {
                    return Err(FormulaError::VariableOutOfRange(v.index(), num_vars));
                }
            }
        }
        // Free variables (relation mode) must be exactly 1..m.
        let mut seen_bound = false;
        for (i, &b) in bound.iter().enumerate() {
            if b {
                seen_bound = true;
            } else if seen_bound {
                return Err(FormulaError::FreeVariableGap(i as u32 + 1));
            }
        }
        let mut matrix = matrix;
        matrix.sort_unstable();
        matrix.dedup();
        Ok(QEFormula {
            num_vars,
            prefix,
            matrix,
            names,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn prefix(&self) -> &[(Quantifier, Variable)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    pub fn names(&self) -> &BTreeMap<u32, String> {
        &self.names
    }

    pub fn name_of(&self, v: Variable) -> Option<&str> {
        self.names.get(&v.index()).map(|s| s.as_str())
    }

    /// Number of leading free variables (0 for sentences).
    pub fn num_free(&self) -> u32 {
        self.num_vars - self.prefix.len() as u32
    }

    pub fn is_sentence(&self) -> bool {
        self.num_free() == 0
    }

    /// Free variables in index order.
    pub fn free_vars(&self) -> impl Iterator<Item = Variable> + '_ {
        (1..=self.num_free()).map(Variable::new)
    }

    /// Evaluates the matrix against a kernel covering all variables.
    pub fn eval(&self, kernel: &Partition) -> Result<bool, FormulaError> {
        if self.num_vars > 0 && kernel.len() != self.num_vars as usize {
            return Err(FormulaError::KernelMismatch {
                kernel: kernel.len(),
                vars: self.num_vars,
            });
        }
        Ok(self.matrix.iter().all(|c| c.holds(kernel)))
    }
}

/// True iff every clause has a literal satisfied by the kernel.
pub fn eval_matrix(matrix: &[Clause], kernel: &Partition) -> Result<bool, FormulaError> {
    for c in matrix {
        for v in c.variables() {
            if v.slot() >= kernel.len() {
                return Err(FormulaError::VariableOutOfRange(
                    v.index(),
                    kernel.len() as u32,
                ));
            }
        }
    }
    Ok(matrix.iter().all(|c| c.holds(kernel)))
}
