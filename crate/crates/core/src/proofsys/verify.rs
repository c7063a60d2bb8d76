//! Certificate verification. Every function walks its proof exactly once;
//! a step counter enforces the linear bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Variable;

use super::{
    Equality, GammaConstraint, KProof, LayeredFormula, Proof, ProofMode, SigmaCore, ZeroJust,
    ZeroProof,
};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("step {path}: {reason}")]
pub struct ProofReject {
    /// Dot-separated step indices from the outermost proof inwards.
    pub path: String,
    pub reason: String,
}

fn reject<T>(path: &[usize], reason: impl Into<String>) -> Result<T, ProofReject> {
    let path = if path.is_empty() {
        "-".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    };
    Err(ProofReject {
        path,
        reason: reason.into(),
    })
}

type VarSet = BTreeSet<u32>;

fn var_set(vars: impl IntoIterator<Item = Variable>) -> VarSet {
    vars.into_iter().map(|v| v.index()).collect()
}

fn on_set(e: &Equality, set: &VarSet) -> bool {
    set.contains(&e.a().index()) && set.contains(&e.b().index())
}

/// Verifies a flat derivation against an existential core.
///
/// `free` is the variable set the final equality must lie on; `target`,
/// when given, must equal the final equality.
pub fn verify_zero_proof(
    core: &SigmaCore,
    free: &[Variable],
    hypotheses: &BTreeSet<Equality>,
    proof: &ZeroProof,
    target: Option<&Equality>,
) -> Result<(), ProofReject> {
    let mut visits = 0u64;
    let out = verify_zero_inner(core, free, hypotheses, proof, target, &mut [], &mut visits);
    assert!(
        visits <= proof.steps.len() as u64,
        "verifier revisited steps"
    );
    out
}

fn verify_zero_inner(
    core: &SigmaCore,
    free: &[Variable],
    hypotheses: &BTreeSet<Equality>,
    proof: &ZeroProof,
    target: Option<&Equality>,
    path: &mut [usize],
    visits: &mut u64,
) -> Result<(), ProofReject> {
    let free_set = var_set(free.iter().copied());
    let mut visible = free_set.clone();
    visible.extend(core.exists.iter().map(|v| v.index()));
    let mut seen: BTreeSet<Equality> = BTreeSet::new();

    for (pos, step) in proof.steps.iter().enumerate() {
        *visits += 1;
        let i = pos + 1;
        let mut at = path.to_vec();
        at.push(i);
        let e = step.equality;
        if !on_set(&e, &visible) {
            return reject(&at, format!("equality {e} leaves the visible variables"));
        }
        if !seen.insert(e) {
            return reject(&at, format!("equality {e} repeats an earlier step"));
        }
        match step.just {
            ZeroJust::Hypothesis => {
                if !hypotheses.contains(&e) {
                    return reject(&at, format!("{e} is not a hypothesis"));
                }
            }
            ZeroJust::Transitivity(i1, i2) => {
                if i1 >= i || i2 >= i || i1 == 0 || i2 == 0 {
                    return reject(&at, "transitivity cites a non-earlier step");
                }
                let e1 = proof.steps[i1 - 1].equality;
                let e2 = proof.steps[i2 - 1].equality;
                if e1.combine(e2) != Some(e) {
                    return reject(&at, format!("{e} does not chain from {e1} and {e2}"));
                }
            }
            ZeroJust::UnitConstraint => {
                let found = core
                    .constraints
                    .iter()
                    .any(|c| matches!(c, GammaConstraint::Unit(u) if *u == e));
                if !found {
                    return reject(&at, format!("{e} is not a unit constraint"));
                }
            }
            ZeroJust::Implication(j) => {
                if j >= i || j == 0 {
                    return reject(&at, "implication cites a non-earlier premise");
                }
                let premise = proof.steps[j - 1].equality;
                let found = core.constraints.iter().any(|c| {
                    matches!(c, GammaConstraint::Implication(p, q) if *p == premise && *q == e)
                });
                if !found {
                    return reject(
                        &at,
                        format!("no constraint ({premise} -> {e}) in the core"),
                    );
                }
            }
        }
    }

    let Some(last) = proof.steps.last() else {
        return reject(path, "empty derivation");
    };
    if let Some(t) = target {
        if last.equality != *t {
            return reject(path, format!("final equality {} is not {t}", last.equality));
        }
    }
    if !on_set(&last.equality, &free_set) {
        return reject(
            path,
            format!("final equality {} leaves the free variables", last.equality),
        );
    }
    Ok(())
}

/// Verifies a level-k derivation of an equality on the free variables.
pub fn verify_k_proof(
    lf: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    proof: &KProof,
    target: Option<&Equality>,
) -> Result<(), ProofReject> {
    if proof.mode != ProofMode::Equality {
        return reject(&[], "expected an equality-mode proof");
    }
    let mut visits = 0u64;
    let total = Proof::K(proof.clone()).total_steps();
    let out = verify_k_inner(lf, hypotheses, proof, target, &mut Vec::new(), &mut visits);
    assert!(visits <= total, "verifier revisited steps");
    out
}

/// Verifies a level-k contradiction: no tuple satisfies the hypotheses.
pub fn verify_k_contradiction(
    lf: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    proof: &KProof,
) -> Result<(), ProofReject> {
    if proof.mode != ProofMode::Contradiction {
        return reject(&[], "expected a contradiction-mode proof");
    }
    if lf.level() == 0 {
        return reject(&[], "there is no flat proof of a contradiction");
    }
    let mut visits = 0u64;
    let total = Proof::K(proof.clone()).total_steps();
    let out = verify_k_inner(lf, hypotheses, proof, None, &mut Vec::new(), &mut visits);
    assert!(visits <= total, "verifier revisited steps");
    out
}

/// Shared walk for both modes; `target` only applies to equality mode.
fn verify_k_inner(
    lf: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    proof: &KProof,
    target: Option<&Equality>,
    path: &mut Vec<usize>,
    visits: &mut u64,
) -> Result<(), ProofReject> {
    let k = lf.level();
    if k == 0 {
        return reject(path, "level-0 formulas take flat derivations");
    }
    let layer = &lf.layers[0];
    let free_set = var_set(lf.free.iter().copied());
    let x_set = var_set(lf.x_vars());
    let u_order: Vec<u32> = layer.forall.iter().map(|v| v.index()).collect();
    let peeled = lf.peel();

    if proof.steps.is_empty() {
        return reject(path, "empty proof");
    }
    let last = proof.steps.len() - 1;
    let mut derived: Vec<Equality> = Vec::new();
    let mut seen: BTreeSet<Equality> = BTreeSet::new();

    for (pos, step) in proof.steps.iter().enumerate() {
        *visits += 1;
        let i = pos + 1;
        path.push(i);
        let at = path.clone();

        // Universal assignments: each u at most once on the left, each
        // right-hand side an x-variable or an earlier universal.
        let mut assigned: BTreeSet<u32> = BTreeSet::new();
        for &(u, z) in &step.forall_assignments {
            let Some(u_pos) = u_order.iter().position(|&w| w == u.index()) else {
                return reject(&at, format!("{u} is not in this universal block"));
            };
            if !assigned.insert(u.index()) {
                return reject(&at, format!("{u} assigned twice"));
            }
            let z_ok = x_set.contains(&z.index())
                || u_order[..u_pos].contains(&z.index());
            if !z_ok {
                return reject(&at, format!("assignment {u}={z} does not point backwards"));
            }
        }

        let is_terminal = pos == last && proof.mode == ProofMode::Contradiction;
        let aug = || {
            let mut aug = hypotheses.clone();
            aug.extend(derived.iter().copied());
            for &(u, z) in &step.forall_assignments {
                aug.insert(Equality::new(u, z).expect("u and z are distinct"));
            }
            aug
        };

        match (&step.conclusion, is_terminal) {
            (Some(e), false) => {
                // Ordinary step: conclusion on the x-variables, subproof
                // derives it one level down.
                if !on_set(e, &x_set) {
                    return reject(
                        &at,
                        format!("conclusion {e} leaves the outer existential scope"),
                    );
                }
                if !seen.insert(*e) {
                    return reject(&at, format!("conclusion {e} repeats an earlier step"));
                }
                verify_sub(&peeled, &aug(), &step.subproof, Some(e), path, visits)?;
                derived.push(*e);
            }
            (Some(e), true) => {
                // Terminal option 2: an equality pinning an unassigned
                // universal variable of this layer.
                let a_u = u_order.iter().position(|&w| w == e.a().index());
                let b_u = u_order.iter().position(|&w| w == e.b().index());
                let (u, z) = match (a_u, b_u) {
                    (Some(pa), Some(pb)) if pa > pb => (e.a(), e.b()),
                    (Some(_), Some(_)) => (e.b(), e.a()),
                    (Some(_), None) => (e.a(), e.b()),
                    (None, Some(_)) => (e.b(), e.a()),
                    (None, None) => {
                        return reject(
                            &at,
                            format!("terminal equality {e} touches no universal variable"),
                        )
                    }
                };
                let u_pos = u_order.iter().position(|&w| w == u.index()).unwrap();
                let z_ok = x_set.contains(&z.index()) || u_order[..u_pos].contains(&z.index());
                if !z_ok {
                    return reject(&at, format!("terminal equality {e} does not point backwards"));
                }
                if assigned.contains(&u.index()) {
                    return reject(
                        &at,
                        format!("terminal variable {u} is assigned in this step"),
                    );
                }
                verify_sub(&peeled, &aug(), &step.subproof, Some(e), path, visits)?;
            }
            (None, true) => {
                // Terminal option 1: a contradiction one level down.
                match &step.subproof {
                    Proof::K(sub) if sub.mode == ProofMode::Contradiction => {
                        verify_k_inner(&peeled, &aug(), sub, None, path, visits)?;
                    }
                    _ => {
                        return reject(
                            &at,
                            "bottom terminal needs a contradiction subproof one level down",
                        )
                    }
                }
            }
            (None, false) => {
                return reject(&at, "bottom marker outside the terminal position");
            }
        }
        path.pop();
    }

    if proof.mode == ProofMode::Equality {
        let final_eq = proof.steps[last]
            .conclusion
            .expect("equality steps carry conclusions");
        if let Some(t) = target {
            if final_eq != *t {
                return reject(path, format!("final equality {final_eq} is not {t}"));
            }
        }
        if !on_set(&final_eq, &free_set) {
            return reject(
                path,
                format!("final equality {final_eq} leaves the free variables"),
            );
        }
    }
    Ok(())
}

fn verify_sub(
    peeled: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    sub: &Proof,
    target: Option<&Equality>,
    path: &mut Vec<usize>,
    visits: &mut u64,
) -> Result<(), ProofReject> {
    match (peeled.level(), sub) {
        (0, Proof::Zero(z)) => verify_zero_inner(
            &peeled.core,
            &peeled.free,
            hypotheses,
            z,
            target,
            path,
            visits,
        ),
        (_, Proof::K(kp)) if peeled.level() > 0 => {
            if kp.mode != ProofMode::Equality {
                return reject(path, "subproof of a step must be in equality mode");
            }
            verify_k_inner(peeled, hypotheses, kp, target, path, visits)
        }
        _ => reject(path, "subproof level does not match the formula"),
    }
}
