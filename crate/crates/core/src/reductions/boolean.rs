//! Boolean brute-force oracles. These stay independent of the solver and
//! the generators so reduction outputs can be cross-checked against them.

use super::{BoolConstraint, BoolCsp, MonotoneCnf, PropLit, PropVar, Qbf, QnaeInstance};
use crate::formula::Quantifier;

fn lit_holds(l: PropLit, xs: &[bool], ys: &[bool]) -> bool {
    let v = match l.var {
        PropVar::X(i) => xs[(i - 1) as usize],
        PropVar::Y(i) => ys[(i - 1) as usize],
    };
    v != l.negated
}

/// Game value of a quantified 3-CNF over `{0,1}`.
pub fn qbf_truth(phi: &Qbf) -> bool {
    let n = phi.rounds() as usize;
    let mut xs = vec![false; n];
    let mut ys = vec![false; n];
    fn go(phi: &Qbf, round: usize, xs: &mut Vec<bool>, ys: &mut Vec<bool>) -> bool {
        if round == phi.rounds() as usize {
            return phi
                .clauses()
                .iter()
                .all(|c| c.iter().any(|&l| lit_holds(l, xs, ys)));
        }
        // exists x_{round+1} ...
        (0..2).any(|x| {
            xs[round] = x == 1;
            // forall y_{round+1} ...
            (0..2).all(|y| {
                ys[round] = y == 1;
                go(phi, round + 1, xs, ys)
            })
        })
    }
    go(phi, 0, &mut xs, &mut ys)
}

/// Satisfiability of a monotone 3-CNF over `{0,1}`.
pub fn mon3sat_satisfiable(phi: &MonotoneCnf) -> bool {
    let n = phi.num_vars() as usize;
    (0u64..(1 << n)).any(|mask| {
        let val = |v: u32| mask & (1 << (v - 1)) != 0;
        phi.negative().iter().all(|c| c.iter().any(|&v| !val(v)))
            && phi.positive().iter().all(|c| c.iter().any(|&v| val(v)))
    })
}

/// Game value of a quantified not-all-equal instance over `{0,1}`.
pub fn qnae_truth(inst: &QnaeInstance) -> bool {
    fn go(inst: &QnaeInstance, pos: usize, vals: &mut Vec<bool>) -> bool {
        if pos == inst.prefix().len() {
            return inst.constraints().iter().all(|&[a, b, c]| {
                let (a, b, c) = (
                    vals[(a - 1) as usize],
                    vals[(b - 1) as usize],
                    vals[(c - 1) as usize],
                );
                !(a == b && b == c)
            });
        }
        let (q, v) = inst.prefix()[pos];
        let slot = (v - 1) as usize;
        let mut eval = |val: bool| {
            vals[slot] = val;
            go(inst, pos + 1, vals)
        };
        match q {
            Quantifier::Exists => eval(false) || eval(true),
            Quantifier::Forall => eval(false) && eval(true),
        }
    }
    let mut vals = vec![false; inst.prefix().len()];
    go(inst, 0, &mut vals)
}

/// Satisfiability of a conjunction of `x != y` and `x=y or y=z` constraints
/// over `{0,1}`.
pub fn bcsp_satisfiable(inst: &BoolCsp) -> bool {
    let n = inst.num_vars() as usize;
    (0u64..(1 << n)).any(|mask| {
        let val = |v: u32| mask & (1 << (v - 1)) != 0;
        inst.constraints().iter().all(|c| match *c {
            BoolConstraint::Neq(x, y) => val(x) != val(y),
            BoolConstraint::Disj(x, y, z) => val(x) == val(y) || val(y) == val(z),
        })
    })
}
