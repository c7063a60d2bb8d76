//! Syntactic-fragment membership for equality relations and the complexity
//! verdicts they induce.
//!
//! A relation is negative / positive / Horn when it has a CNF definition
//! whose clauses are, respectively: unit equalities or all-negative;
//! all-positive; carrying at most one positive literal. Membership is
//! decided by closure: collect every clause of the shape satisfied by all
//! kernels of the relation, then check whether that conjunction defines
//! exactly the relation. The closure is the strongest shape-formula implied
//! by the relation, so the test is sound and complete.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{Atom, Clause, Literal, Polarity, Variable};
use crate::partition::{enumerate_partitions_capped, Partition, PartitionError};
use crate::relation::Relation;

/// Default arity cap: Bell(6) = 203 kernels and roughly 278k Horn clauses
/// keep runs in seconds.
pub const DEFAULT_CLASSIFY_CAP: u32 = 6;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("negative flag without horn flag is impossible; report a bug")]
    InconsistentFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Negative,
    Positive,
    Horn,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Negative, Shape::Positive, Shape::Horn];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Negative => "negative",
            Shape::Positive => "positive",
            Shape::Horn => "horn",
        }
    }
}

/// All atoms over `1..=arity`, in index order.
fn atoms(arity: u32) -> Vec<Atom> {
    let mut out = Vec::new();
    for a in 1..=arity {
        for b in a + 1..=arity {
            out.push(Atom::new(Variable::new(a), Variable::new(b)).unwrap());
        }
    }
    out
}

/// Enumerates every clause of the given shape over atoms on `1..=arity` and
/// keeps those satisfied by all kernels of the relation.
pub fn implied_clauses(r: &Relation, shape: Shape, cap: u32) -> Result<Vec<Clause>, ClassifyError> {
    if r.arity() > cap {
        return Err(PartitionError::CapExceeded {
            arity: r.arity(),
            cap,
        }
        .into());
    }
    let atoms = atoms(r.arity());
    let mut out = Vec::new();
    let mut consider = |clause: Clause| {
        if r.kernels().iter().all(|k| clause.holds(k)) {
            out.push(clause);
        }
    };
    match shape {
        Shape::Positive => {
            // Nonempty all-positive clauses.
            for mask in 1u64..(1 << atoms.len()) {
                consider(clause_from_mask(&atoms, mask, Polarity::Eq));
            }
        }
        Shape::Negative => {
            // Unit equalities plus nonempty all-negative clauses.
            for a in &atoms {
                consider(Clause::from_literals(vec![Literal {
                    atom: *a,
                    polarity: Polarity::Eq,
                }]));
            }
            for mask in 1u64..(1 << atoms.len()) {
                consider(clause_from_mask(&atoms, mask, Polarity::Neq));
            }
        }
        Shape::Horn => {
            // All-negative clauses, plus one positive literal over any
            // negative set avoiding its atom.
            for mask in 1u64..(1 << atoms.len()) {
                consider(clause_from_mask(&atoms, mask, Polarity::Neq));
            }
            for (i, pos) in atoms.iter().enumerate() {
                for mask in 0u64..(1 << atoms.len()) {
                    if mask & (1 << i) != 0 {
                        continue; // both polarities of one atom is a tautology
                    }
                    let mut lits = vec![Literal {
                        atom: *pos,
                        polarity: Polarity::Eq,
                    }];
                    for (j, a) in atoms.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            lits.push(Literal {
                                atom: *a,
                                polarity: Polarity::Neq,
                            });
                        }
                    }
                    consider(Clause::from_literals(lits));
                }
            }
        }
    }
    Ok(out)
}

fn clause_from_mask(atoms: &[Atom], mask: u64, polarity: Polarity) -> Clause {
    let lits = atoms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, a)| Literal {
            atom: *a,
            polarity,
        })
        .collect();
    Clause::from_literals(lits)
}

/// The relation defined by a clause conjunction: all partitions satisfying
/// every clause.
pub fn closure_relation(clauses: &[Clause], arity: u32, cap: u32) -> Result<Relation, ClassifyError> {
    let kernels: BTreeSet<Partition> = enumerate_partitions_capped(arity, cap)?
        .filter(|p| clauses.iter().all(|c| c.holds(p)))
        .collect();
    Ok(Relation::new(arity, kernels))
}

/// Per-shape membership of one relation, with a defining CNF when the flag
/// is true and a separating kernel when it is false.
#[derive(Clone, Debug)]
pub struct FragmentReport {
    pub is_negative: bool,
    pub is_positive: bool,
    pub is_horn: bool,
    /// Witnessing CNF per shape that holds.
    pub witnesses: Vec<(Shape, Vec<Clause>)>,
    /// A kernel of the closure that the relation misses, per failing shape.
    pub separating: Vec<(Shape, Partition)>,
}

impl FragmentReport {
    pub fn holds(&self, shape: Shape) -> bool {
        match shape {
            Shape::Negative => self.is_negative,
            Shape::Positive => self.is_positive,
            Shape::Horn => self.is_horn,
        }
    }
}

pub fn fragment_report(r: &Relation, cap: u32) -> Result<FragmentReport, ClassifyError> {
    let mut report = FragmentReport {
        is_negative: false,
        is_positive: false,
        is_horn: false,
        witnesses: Vec::new(),
        separating: Vec::new(),
    };
    for shape in Shape::ALL {
        let implied = implied_clauses(r, shape, cap)?;
        let closure = closure_relation(&implied, r.arity(), cap)?;
        debug_assert!(
            closure.kernels().is_superset(r.kernels()),
            "closure must contain the relation"
        );
        if &closure == r {
            match shape {
                Shape::Negative => report.is_negative = true,
                Shape::Positive => report.is_positive = true,
                Shape::Horn => report.is_horn = true,
            }
            report.witnesses.push((shape, minimal_witness(implied, r)));
        } else {
            let sep = closure
                .kernels()
                .difference(r.kernels())
                .next()
                .expect("strict superset has a separating kernel")
                .clone();
            report.separating.push((shape, sep));
        }
    }
    Ok(report)
}

/// Drops implied clauses that are subsumed by shorter ones while keeping
/// the conjunction equivalent to the relation; the full implied set is a
/// valid witness but an unreadable one.
fn minimal_witness(mut implied: Vec<Clause>, r: &Relation) -> Vec<Clause> {
    implied.sort_by_key(|c| c.literals().len());
    let mut kept: Vec<Clause> = Vec::new();
    for c in implied {
        if !kept
            .iter()
            .any(|k| k.literals().iter().all(|l| c.literals().contains(l)))
        {
            kept.push(c);
        }
    }
    // Greedy pass: drop clauses whose removal keeps the closure exact.
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        let still_exact = enumerate_partitions_capped(r.arity(), r.arity())
            .map(|it| {
                it.filter(|p| trial.iter().all(|c| c.holds(p)))
                    .collect::<BTreeSet<_>>()
                    == *r.kernels()
            })
            .unwrap_or(false);
        if still_exact {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictMode {
    /// Unbounded alternation.
    Full,
    /// Bounded alternation with k >= 2 leading-universal blocks.
    PiK(u32),
}

/// Complexity verdict for a language, drawn from a fixed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageVerdict {
    pub mode: VerdictMode,
    pub class: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LanguageFlags {
    pub negative: bool,
    pub positive: bool,
    pub horn: bool,
}

/// The verdict table. Negative languages are Horn by shape inclusion, so
/// `negative && !horn` cannot arise from `fragment_report`.
pub fn verdict_for_flags(
    flags: LanguageFlags,
    mode: VerdictMode,
) -> Result<LanguageVerdict, ClassifyError> {
    if flags.negative && !flags.horn {
        return Err(ClassifyError::InconsistentFlags);
    }
    let class = match mode {
        VerdictMode::Full => {
            if flags.negative {
                "Logspace".to_string()
            } else if flags.positive {
                "NP-complete".to_string()
            } else {
                "PSpace-complete".to_string()
            }
        }
        VerdictMode::PiK(k) => {
            if flags.negative {
                "Logspace".to_string()
            } else if flags.positive {
                "NP-complete".to_string()
            } else if flags.horn {
                "Co-NP-complete".to_string()
            } else {
                format!("Pi_{}^P-hard (lower bound)", k.saturating_sub(2))
            }
        }
    };
    Ok(LanguageVerdict { mode, class })
}

/// Classifies a language: every relation must carry a flag for the language
/// to carry it.
pub fn classify_language(
    relations: &[Relation],
    mode: VerdictMode,
    cap: u32,
) -> Result<(LanguageFlags, LanguageVerdict), ClassifyError> {
    let mut flags = LanguageFlags {
        negative: true,
        positive: true,
        horn: true,
    };
    for r in relations {
        let rep = fragment_report(r, cap)?;
        flags.negative &= rep.is_negative;
        flags.positive &= rep.is_positive;
        flags.horn &= rep.is_horn;
    }
    let verdict = verdict_for_flags(flags, mode)?;
    Ok((flags, verdict))
}
