//! Symbol accounting for certificates against the polynomial bound
//! `10^(k+1) * l^(2k+3)`.
//!
//! The declared encoding charges `ceil(2*log2(l)) + 3` symbols per
//! equality (and per universal assignment entry) and 3 symbols of framing
//! per step; `l` is the variable count of the formula and `k` the proof
//! level.

use super::Proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeAudit {
    pub symbols: u128,
    pub bound: u128,
    pub within: bool,
}

/// Smallest `c` with `2^c >= l^2`, i.e. `ceil(2*log2(l))`.
fn log_cost(l: u32) -> u128 {
    let target = (l as u128) * (l as u128);
    let mut c = 0u32;
    while (1u128 << c) < target {
        c += 1;
    }
    c as u128
}

fn unit(l: u32) -> u128 {
    log_cost(l) + 3
}

fn symbols(p: &Proof, l: u32) -> u128 {
    match p {
        Proof::Zero(z) => z.steps.len() as u128 * (unit(l) + 3),
        Proof::K(kp) => kp
            .steps
            .iter()
            .map(|s| {
                let conclusion = if s.conclusion.is_some() { unit(l) } else { 0 };
                3 + conclusion
                    + s.forall_assignments.len() as u128 * unit(l)
                    + symbols(&s.subproof, l)
            })
            .sum(),
    }
}

/// Audits a certificate of the given level over a formula with `l`
/// distinct variables.
pub fn size_audit(p: &Proof, l: u32, k: u32) -> SizeAudit {
    let l = l.max(1);
    let sym = symbols(p, l);
    let bound = 10u128.pow(k + 1) * (l as u128).pow(2 * k + 3);
    SizeAudit {
        symbols: sym,
        bound,
        within: sym < bound,
    }
}
