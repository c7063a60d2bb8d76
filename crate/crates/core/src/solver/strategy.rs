//! Explicit winning strategies for true sentences.
//!
//! A strategy maps, for each existential variable, the canonical kernel of
//! the variables played before it to a class choice. Replaying a strategy
//! against every canonical universal play must satisfy the matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::{QEFormula, Quantifier};
use crate::partition::Partition;

use super::{decide, SolverConfig, SolverError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassChoice {
    /// Join the equivalence class with this index.
    Join(u32),
    /// Open a fresh class.
    Fresh,
}

/// Winning strategy for the existential player, keyed by
/// `(variable index, kernel of the earlier prefix variables)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Strategy {
    entries: BTreeMap<(u32, Vec<u32>), ClassChoice>,
}

impl Strategy {
    pub fn get(&self, var: u32, kernel: &[u32]) -> Option<ClassChoice> {
        self.entries.get(&(var, kernel.to_vec())).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &ClassChoice)> {
        self.entries.iter()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((var, kernel), choice) in &self.entries {
            write!(f, "strategy {var} [")?;
            for (i, c) in kernel.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c}")?;
            }
            match choice {
                ClassChoice::Join(c) => writeln!(f, "] join {c}")?,
                ClassChoice::Fresh => writeln!(f, "] fresh")?,
            }
        }
        Ok(())
    }
}

/// Extracts a strategy for a true sentence by walking the winning subtree:
/// existing classes in ascending index first, then fresh.
pub fn extract_strategy(f: &QEFormula, cfg: &SolverConfig) -> Result<Strategy, SolverError> {
    if !f.is_sentence() {
        return Err(SolverError::FreeVariables {
            count: f.num_free(),
        });
    }
    if !decide(f, cfg)?.truth {
        return Err(SolverError::NotTrue);
    }
    let mut s = Strategy::default();
    let mut assign = Vec::with_capacity(f.prefix().len());
    walk(f, &mut assign, 0, &mut s);
    Ok(s)
}

fn num_classes(assign: &[u32]) -> u32 {
    assign.iter().copied().max().map_or(0, |m| m + 1)
}

/// Truth of the remaining game from a class-choice position. Plain
/// recursion; strategy extraction is a desk-scale operation.
fn eval_from(f: &QEFormula, assign: &mut Vec<u32>, pos: usize) -> bool {
    if pos == f.prefix().len() {
        return matrix_holds(f, assign);
    }
    let (q, _) = f.prefix()[pos];
    let choices = num_classes(assign) + 1;
    for c in 0..choices {
        assign.push(c);
        let sub = eval_from(f, assign, pos + 1);
        assign.pop();
        match q {
            Quantifier::Exists if sub => return true,
            Quantifier::Forall if !sub => return false,
            _ => {}
        }
    }
    q == Quantifier::Forall
}

fn matrix_holds(f: &QEFormula, assign: &[u32]) -> bool {
    if f.num_vars() == 0 {
        return f.matrix().is_empty();
    }
    // Map the prefix-order classes back to variable order.
    let mut by_var = vec![0u64; f.num_vars() as usize];
    for (i, &(_, v)) in f.prefix().iter().enumerate() {
        by_var[v.slot()] = assign[i] as u64;
    }
    let kernel = Partition::kernel_of(&by_var);
    f.eval(&kernel).expect("kernel covers all variables")
}

fn walk(f: &QEFormula, assign: &mut Vec<u32>, pos: usize, s: &mut Strategy) {
    if pos == f.prefix().len() {
        debug_assert!(matrix_holds(f, assign));
        return;
    }
    let (q, v) = f.prefix()[pos];
    let choices = num_classes(assign) + 1;
    match q {
        Quantifier::Exists => {
            for c in 0..choices {
                assign.push(c);
                let wins = eval_from(f, assign, pos + 1);
                if wins {
                    let choice = if c + 1 == choices {
                        ClassChoice::Fresh
                    } else {
                        ClassChoice::Join(c)
                    };
                    s.entries
                        .insert((v.index(), assign[..pos].to_vec()), choice);
                    walk(f, assign, pos + 1, s);
                    assign.pop();
                    return;
                }
                assign.pop();
            }
            unreachable!("true node has a winning existential choice");
        }
        Quantifier::Forall => {
            for c in 0..choices {
                assign.push(c);
                walk(f, assign, pos + 1, s);
                assign.pop();
            }
        }
    }
}

/// Replays a strategy against every canonical universal play. `Ok(true)`
/// means total and matrix-satisfying throughout.
pub fn replay_strategy(f: &QEFormula, s: &Strategy) -> Result<bool, SolverError> {
    if !f.is_sentence() {
        return Err(SolverError::FreeVariables {
            count: f.num_free(),
        });
    }
    let mut assign = Vec::with_capacity(f.prefix().len());
    replay(f, s, &mut assign, 0)
}

fn replay(
    f: &QEFormula,
    s: &Strategy,
    assign: &mut Vec<u32>,
    pos: usize,
) -> Result<bool, SolverError> {
    if pos == f.prefix().len() {
        return Ok(matrix_holds(f, assign));
    }
    let (q, v) = f.prefix()[pos];
    let classes = num_classes(assign);
    match q {
        Quantifier::Forall => {
            for c in 0..=classes {
                assign.push(c);
                let ok = replay(f, s, assign, pos + 1)?;
                assign.pop();
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Quantifier::Exists => {
            let choice =
                s.get(v.index(), &assign[..pos])
                    .ok_or(SolverError::MissingStrategyEntry { var: v.index() })?;
            let c = match choice {
                ClassChoice::Join(c) if c < classes => c,
                ClassChoice::Join(_) => return Ok(false), // dangling class index
                ClassChoice::Fresh => classes,
            };
            assign.push(c);
            let ok = replay(f, s, assign, pos + 1)?;
            assign.pop();
            Ok(ok)
        }
    }
}
