//! Reference game evaluation over raw values from `{1..n}`.

use crate::formula::{Polarity, QEFormula, Quantifier};
use crate::partition::Partition;

use super::{SearchStats, SolverConfig, SolverError, Verdict};

struct Naive<'f> {
    f: &'f QEFormula,
    domain: u32,
    nodes: u64,
}

pub(super) fn solve(
    f: &QEFormula,
    fixed: Option<&Partition>,
    cfg: &SolverConfig,
) -> Result<Verdict, SolverError> {
    let n = f.num_vars();
    if n > cfg.naive_cap {
        return Err(SolverError::CapExceeded {
            vars: n,
            cap: cfg.naive_cap,
        });
    }
    // Values indexed by variable slot; 0 marks "unassigned".
    let mut values = vec![0u32; n as usize];
    if let Some(p) = fixed {
        for (s, value) in values.iter_mut().enumerate().take(p.len()) {
            *value = p.class_of(s) + 1;
        }
    }
    let mut naive = Naive {
        f,
        domain: n.max(1),
        nodes: 0,
    };
    let truth = naive.eval(&mut values, 0);
    Ok(Verdict {
        truth,
        stats: SearchStats {
            nodes: naive.nodes,
            memo_hits: 0,
        },
    })
}

impl Naive<'_> {
    fn eval(&mut self, values: &mut Vec<u32>, pos: usize) -> bool {
        self.nodes += 1;
        if pos == self.f.prefix().len() {
            return self.matrix_holds(values);
        }
        let (q, v) = self.f.prefix()[pos];
        for d in 1..=self.domain {
            values[v.slot()] = d;
            let sub = self.eval(values, pos + 1);
            values[v.slot()] = 0;
            match q {
                Quantifier::Exists if sub => return true,
                Quantifier::Forall if !sub => return false,
                _ => {}
            }
        }
        q == Quantifier::Forall
    }

    fn matrix_holds(&self, values: &[u32]) -> bool {
        self.f.matrix().iter().all(|c| {
            c.literals().iter().any(|l| {
                let equal = values[l.atom.a().slot()] == values[l.atom.b().slot()];
                (l.polarity == Polarity::Eq) == equal
            })
        })
    }
}
