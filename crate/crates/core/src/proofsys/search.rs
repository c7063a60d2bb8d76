//! Saturation-based proof search.
//!
//! The search decides whether the relation of a layered formula holds on
//! the tuple described by a hypothesis kernel, and produces a verifiable
//! certificate whenever it does not.
//!
//! Flat case: close the hypotheses and core constraints under the four
//! derivation rules; a derived free-pair equality that the reference
//! values violate refutes the tuple, otherwise the closure classes give a
//! satisfying assignment (unassigned classes take fresh values).
//!
//! Layered case, iterated to a fixed point: form equivalence classes of
//! the hypotheses and conclusions so far, assign free classes their
//! reference values and the rest fresh ones, and enumerate every
//! kernel-distinct evaluation of the universal block. Each evaluation
//! contributes assignments `u = z` only for values seen earlier, pointing
//! at the first variable carrying the value; the subproof derives the
//! remaining equalities by transitivity. A refutation one level down
//! either yields a new conclusion over the outer variables (and the loop
//! restarts), or closes a contradiction certificate outright.

use std::collections::BTreeSet;

use crate::formula::{QEFormula, Variable};
use crate::partition::Partition;

use super::{
    layer_formula, verify::ProofReject, Equality, GammaConstraint, KProof, KStep, LayeredFormula,
    Proof, ProofError, ProofMode, ZeroJust, ZeroProof, ZeroStep,
};

#[derive(Clone, Debug)]
pub struct SearchCaps {
    /// Bound on exists+forall variables per layer.
    pub max_layer_vars: usize,
    /// Bound on the universal block of one layer (the enumeration is
    /// exponential in it).
    pub max_universals: usize,
    /// Overall node budget for the recursive enumeration.
    pub max_nodes: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_layer_vars: 10,
            max_universals: 6,
            max_nodes: 10_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SearchVerdict {
    /// The tuple (or sentence) is refuted; `violated` carries the derived
    /// equality the reference kernel breaks, or `None` for a plain
    /// contradiction certificate.
    Refuted {
        certificate: Proof,
        violated: Option<Equality>,
    },
    /// Satisfiable: a witness kernel over the free variables and the
    /// outermost existential block.
    Consistent { witness: Partition },
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub verdict: SearchVerdict,
    /// Transitive closure of hypotheses and derived equalities restricted
    /// to the free variables.
    pub implied: BTreeSet<Equality>,
}

/// Decides the hypothesis kernel against the layered formula. Hypotheses
/// are equalities on the free variables; distinct closure classes stand
/// for distinct values.
pub fn saturate_search(
    lf: &LayeredFormula,
    hypotheses: &[Equality],
    caps: &SearchCaps,
) -> Result<SearchResult, ProofError> {
    check_caps(lf, caps)?;
    for e in hypotheses {
        if !lf.free.contains(&e.a()) || !lf.free.contains(&e.b()) {
            return Err(ProofError::HypothesisOutOfScope(*e));
        }
    }
    // Reference values: closure classes of the hypotheses, in free order.
    let classes = close_over(&lf.free, hypotheses.iter().copied());
    let ref_values: Vec<u64> = classes.iter().map(|&c| c as u64).collect();
    let mut nodes = 0u64;
    let hyp_set: BTreeSet<Equality> = hypotheses.iter().copied().collect();
    let outcome = search(lf, &hyp_set, &ref_values, caps, &mut nodes)?;

    let implied = match &outcome {
        Level::Consistent { derived_free, .. } => derived_free.clone(),
        Level::Refuted { derived_free, .. } => derived_free.clone(),
    };
    let verdict = match outcome {
        Level::Refuted {
            certificate,
            violated,
            ..
        } => SearchVerdict::Refuted {
            certificate,
            violated,
        },
        Level::Consistent { witness, .. } => SearchVerdict::Consistent { witness },
    };
    Ok(SearchResult { verdict, implied })
}

fn check_caps(lf: &LayeredFormula, caps: &SearchCaps) -> Result<(), ProofError> {
    for layer in &lf.layers {
        let got = layer.exists.len() + layer.forall.len();
        if got > caps.max_layer_vars {
            return Err(ProofError::LayerCapExceeded {
                got,
                cap: caps.max_layer_vars,
            });
        }
        if layer.forall.len() > caps.max_universals {
            return Err(ProofError::UniversalCapExceeded {
                got: layer.forall.len(),
                cap: caps.max_universals,
            });
        }
    }
    if lf.core.exists.len() > caps.max_layer_vars {
        return Err(ProofError::LayerCapExceeded {
            got: lf.core.exists.len(),
            cap: caps.max_layer_vars,
        });
    }
    Ok(())
}

/// Union-find closure of equalities over an ordered variable list;
/// returns canonical class ids in list order.
fn close_over(vars: &[Variable], eqs: impl Iterator<Item = Equality>) -> Vec<u32> {
    let pos = |v: Variable| vars.iter().position(|&w| w == v);
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for e in eqs {
        if let (Some(a), Some(b)) = (pos(e.a()), pos(e.b())) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![u32::MAX; vars.len()];
    let mut next = 0;
    let mut out = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let r = find(&mut parent, i);
        if label[r] == u32::MAX {
            label[r] = next;
            next += 1;
        }
        out.push(label[r]);
    }
    out
}

/// Internal per-level outcome; `derived_free` is the closure restricted to
/// the level's free variables.
enum Level {
    Refuted {
        certificate: Proof,
        /// Violated equality in first-appearance form, `None` for a
        /// contradiction.
        violated: Option<Equality>,
        derived_free: BTreeSet<Equality>,
    },
    Consistent {
        witness: Partition,
        derived_free: BTreeSet<Equality>,
    },
}

fn free_pairs(vars: &[Variable], classes: &[u32]) -> BTreeSet<Equality> {
    let mut out = BTreeSet::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if classes[i] == classes[j] {
                out.insert(Equality::new(vars[i], vars[j]).unwrap());
            }
        }
    }
    out
}

fn search(
    lf: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    ref_values: &[u64],
    caps: &SearchCaps,
    nodes: &mut u64,
) -> Result<Level, ProofError> {
    *nodes += 1;
    if *nodes > caps.max_nodes {
        return Err(ProofError::SearchBudgetExhausted(caps.max_nodes));
    }
    if lf.level() == 0 {
        Ok(search_flat(lf, hypotheses, ref_values))
    } else {
        search_layered(lf, hypotheses, ref_values, caps, nodes)
    }
}

/// Flat saturation under the four derivation rules.
fn search_flat(lf: &LayeredFormula, hypotheses: &BTreeSet<Equality>, ref_values: &[u64]) -> Level {
    let mut visible = lf.free.clone();
    visible.extend(lf.core.exists.iter().copied());
    let mut steps: Vec<ZeroStep> = Vec::new();
    let mut index: std::collections::BTreeMap<Equality, usize> = Default::default();

    let add = |steps: &mut Vec<ZeroStep>,
                   index: &mut std::collections::BTreeMap<Equality, usize>,
                   e: Equality,
                   just: ZeroJust|
     -> bool {
        if index.contains_key(&e) {
            return false;
        }
        steps.push(ZeroStep { equality: e, just });
        index.insert(e, steps.len());
        true
    };

    for &e in hypotheses {
        add(&mut steps, &mut index, e, ZeroJust::Hypothesis);
    }
    for c in &lf.core.constraints {
        if let GammaConstraint::Unit(e) = c {
            add(&mut steps, &mut index, *e, ZeroJust::UnitConstraint);
        }
    }
    loop {
        let mut changed = false;
        // Implications whose premise is already derived.
        for c in &lf.core.constraints {
            if let GammaConstraint::Implication(p, q) = c {
                if let Some(&j) = index.get(p) {
                    changed |= add(&mut steps, &mut index, *q, ZeroJust::Implication(j));
                }
            }
        }
        // Transitivity over all pairs.
        let len = steps.len();
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                if let Some(e) = steps[i].equality.combine(steps[j].equality) {
                    changed |= add(
                        &mut steps,
                        &mut index,
                        e,
                        ZeroJust::Transitivity(i + 1, j + 1),
                    );
                }
            }
        }
        if !changed {
            break;
        }
    }

    let classes = close_over(&visible, index.keys().copied());
    let derived_free = free_pairs(&lf.free, &classes[..lf.free.len()]);

    // A derived free pair the reference values split refutes the tuple.
    let violated: Vec<Equality> = derived_free
        .iter()
        .copied()
        .filter(|e| {
            let pa = lf.free.iter().position(|&v| v == e.a()).unwrap();
            let pb = lf.free.iter().position(|&v| v == e.b()).unwrap();
            ref_values[pa] != ref_values[pb]
        })
        .collect();
    if let Some(&first) = violated.first() {
        // Normalize to first-appearance representatives; the saturation
        // derives that pair as well, since same-value pairs are hypothesis
        // consequences.
        let e = normalize_violation(first, &lf.free, ref_values);
        let at = *index
            .get(&e)
            .expect("normalized violation is in the closure");
        let trimmed = ZeroProof {
            steps: steps[..at].to_vec(),
        };
        debug_assert_eq!(trimmed.steps.last().map(|s| s.equality), Some(e));
        return Level::Refuted {
            certificate: Proof::Zero(trimmed),
            violated: Some(e),
            derived_free,
        };
    }

    // Consistent: classes with a free variable take its reference value,
    // the rest fresh ones.
    let fresh_base = ref_values.iter().copied().max().map_or(0, |m| m + 1);
    let num_classes = classes.iter().copied().max().map_or(0, |m| m + 1);
    let mut class_value = vec![u64::MAX; num_classes as usize];
    for (i, &c) in classes.iter().enumerate().take(lf.free.len()) {
        class_value[c as usize] = ref_values[i];
    }
    let mut next = fresh_base;
    for v in class_value.iter_mut() {
        if *v == u64::MAX {
            *v = next;
            next += 1;
        }
    }
    let values: Vec<u64> = classes.iter().map(|&c| class_value[c as usize]).collect();
    let witness = if values.is_empty() {
        Partition::kernel_of(&[0])
    } else {
        Partition::kernel_of(&values)
    };
    Level::Consistent {
        witness,
        derived_free,
    }
}

/// First variable (in order) carrying each endpoint's value.
fn normalize_violation(e: Equality, vars: &[Variable], values: &[u64]) -> Equality {
    let rep = |v: Variable| {
        let val = values[vars.iter().position(|&w| w == v).unwrap()];
        vars[values.iter().position(|&x| x == val).unwrap()]
    };
    Equality::new(rep(e.a()), rep(e.b())).expect("violated endpoints have distinct values")
}

fn search_layered(
    lf: &LayeredFormula,
    hypotheses: &BTreeSet<Equality>,
    ref_values: &[u64],
    caps: &SearchCaps,
    nodes: &mut u64,
) -> Result<Level, ProofError> {
    let layer = &lf.layers[0];
    let x_vars = lf.x_vars();
    let peeled = lf.peel();
    let mut steps: Vec<KStep> = Vec::new();
    let mut conclusions: Vec<Equality> = Vec::new();

    'passes: loop {
        // Equivalence classes of hypotheses plus conclusions over the
        // x-variables.
        let basis: Vec<Equality> = hypotheses
            .iter()
            .copied()
            .chain(conclusions.iter().copied())
            .collect();
        let classes = close_over(&x_vars, basis.iter().copied());
        let derived_free = free_pairs(&lf.free, &classes[..lf.free.len()]);

        // Violated free pair: close with an equality-mode certificate.
        if let Some(viol) = derived_free.iter().copied().find(|e| {
            let pa = lf.free.iter().position(|&v| v == e.a()).unwrap();
            let pb = lf.free.iter().position(|&v| v == e.b()).unwrap();
            ref_values[pa] != ref_values[pb]
        }) {
            let target = normalize_violation(viol, &lf.free, ref_values);
            if let Some(at) = conclusions.iter().position(|&e| e == target) {
                let trimmed = steps[..=at].to_vec();
                return Ok(Level::Refuted {
                    certificate: Proof::K(KProof {
                        mode: ProofMode::Equality,
                        steps: trimmed,
                    }),
                    violated: Some(target),
                    derived_free,
                });
            }
            // Conclude the normalized pair by chaining hypotheses and
            // earlier conclusions.
            let chain = chain_between(&x_vars, &basis, target);
            let sub = chain_proof(lf.level() - 1, &chain, target);
            steps.push(KStep {
                conclusion: Some(target),
                forall_assignments: Vec::new(),
                subproof: sub,
            });
            return Ok(Level::Refuted {
                certificate: Proof::K(KProof {
                    mode: ProofMode::Equality,
                    steps,
                }),
                violated: Some(target),
                derived_free,
            });
        }

        // Assignment b over the x-variables: free classes keep their
        // reference values, the rest go fresh.
        let num_classes = classes.iter().copied().max().map_or(0, |m| m + 1);
        let mut class_value = vec![u64::MAX; num_classes as usize];
        for (i, &c) in classes.iter().enumerate().take(lf.free.len()) {
            class_value[c as usize] = ref_values[i];
        }
        let mut next_fresh = ref_values.iter().copied().max().map_or(0, |m| m + 1);
        for v in class_value.iter_mut() {
            if *v == u64::MAX {
                *v = next_fresh;
                next_fresh += 1;
            }
        }
        let b_values: Vec<u64> = classes.iter().map(|&c| class_value[c as usize]).collect();

        // Enumerate kernel-distinct universal evaluations.
        let mut c_values: Vec<u64> = Vec::new();
        match enumerate_universals(
            lf,
            &peeled,
            layer.forall.len(),
            &x_vars,
            &b_values,
            next_fresh,
            &mut c_values,
            hypotheses,
            &conclusions,
            caps,
            nodes,
        )? {
            Enumeration::AllConsistent => {
                let witness = if b_values.is_empty() {
                    Partition::kernel_of(&[0])
                } else {
                    Partition::kernel_of(&b_values)
                };
                return Ok(Level::Consistent {
                    witness,
                    derived_free,
                });
            }
            Enumeration::NewConclusion(step) => {
                conclusions.push(step.conclusion.expect("2A steps conclude"));
                steps.push(step);
                continue 'passes;
            }
            Enumeration::Contradiction(terminal) => {
                steps.push(terminal);
                return Ok(Level::Refuted {
                    certificate: Proof::K(KProof {
                        mode: ProofMode::Contradiction,
                        steps,
                    }),
                    violated: None,
                    derived_free,
                });
            }
        }
    }
}

enum Enumeration {
    AllConsistent,
    NewConclusion(KStep),
    Contradiction(KStep),
}

#[allow(clippy::too_many_arguments)]
fn enumerate_universals(
    lf: &LayeredFormula,
    peeled: &LayeredFormula,
    remaining: usize,
    x_vars: &[Variable],
    b_values: &[u64],
    fresh_base: u64,
    c_values: &mut Vec<u64>,
    hypotheses: &BTreeSet<Equality>,
    conclusions: &[Equality],
    caps: &SearchCaps,
    nodes: &mut u64,
) -> Result<Enumeration, ProofError> {
    if remaining == 0 {
        return evaluate_universal_assignment(
            lf,
            peeled,
            x_vars,
            b_values,
            c_values,
            hypotheses,
            conclusions,
            caps,
            nodes,
        );
    }
    *nodes += 1;
    if *nodes > caps.max_nodes {
        return Err(ProofError::SearchBudgetExhausted(caps.max_nodes));
    }
    // Choices: every value seen so far (first-appearance order) or fresh.
    let mut seen: Vec<u64> = Vec::new();
    for &v in b_values.iter().chain(c_values.iter()) {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    let fresh = fresh_base + c_values.len() as u64;
    for choice in seen.into_iter().chain([fresh]) {
        c_values.push(choice);
        let out = enumerate_universals(
            lf,
            peeled,
            remaining - 1,
            x_vars,
            b_values,
            fresh_base,
            c_values,
            hypotheses,
            conclusions,
            caps,
            nodes,
        )?;
        c_values.pop();
        match out {
            Enumeration::AllConsistent => continue,
            refuted => return Ok(refuted),
        }
    }
    Ok(Enumeration::AllConsistent)
}

#[allow(clippy::too_many_arguments)]
fn evaluate_universal_assignment(
    lf: &LayeredFormula,
    peeled: &LayeredFormula,
    x_vars: &[Variable],
    b_values: &[u64],
    c_values: &[u64],
    hypotheses: &BTreeSet<Equality>,
    conclusions: &[Equality],
    caps: &SearchCaps,
    nodes: &mut u64,
) -> Result<Enumeration, ProofError> {
    let layer = &lf.layers[0];
    let u_vars = &layer.forall;

    // First-appearance assignments u = z.
    let mut forall_assignments: Vec<(Variable, Variable)> = Vec::new();
    let all_vars: Vec<Variable> = x_vars.iter().chain(u_vars.iter()).copied().collect();
    let all_values: Vec<u64> = b_values.iter().chain(c_values.iter()).copied().collect();
    for (j, &u) in u_vars.iter().enumerate() {
        let val = c_values[j];
        let first = all_values.iter().position(|&v| v == val).unwrap();
        if first < x_vars.len() + j {
            forall_assignments.push((u, all_vars[first]));
        }
    }

    // Citations one level down: hypotheses, conclusions so far, and the
    // universal assignments.
    let mut sub_hyps: BTreeSet<Equality> = hypotheses.clone();
    sub_hyps.extend(conclusions.iter().copied());
    for &(u, z) in &forall_assignments {
        sub_hyps.insert(Equality::new(u, z).expect("assignment endpoints differ"));
    }

    match search(peeled, &sub_hyps, &all_values, caps, nodes)? {
        Level::Consistent { .. } => Ok(Enumeration::AllConsistent),
        Level::Refuted {
            certificate,
            violated: None,
            ..
        } => Ok(Enumeration::Contradiction(KStep {
            conclusion: None,
            forall_assignments,
            subproof: certificate,
        })),
        Level::Refuted {
            certificate,
            violated: Some(e),
            ..
        } => {
            let in_x = |v: Variable| x_vars.contains(&v);
            if in_x(e.a()) && in_x(e.b()) {
                Ok(Enumeration::NewConclusion(KStep {
                    conclusion: Some(e),
                    forall_assignments,
                    subproof: certificate,
                }))
            } else {
                // The morphed equality pins an unassigned universal of
                // this layer: a terminal contradiction step.
                Ok(Enumeration::Contradiction(KStep {
                    conclusion: Some(e),
                    forall_assignments,
                    subproof: certificate,
                }))
            }
        }
    }
}

/// BFS path between the endpoints of `target` through basis equalities.
fn chain_between(vars: &[Variable], basis: &[Equality], target: Equality) -> Vec<Equality> {
    let pos = |v: Variable| vars.iter().position(|&w| w == v).unwrap();
    let start = pos(target.a());
    let goal = pos(target.b());
    let mut prev: Vec<Option<(usize, Equality)>> = vec![None; vars.len()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    let mut seen = vec![false; vars.len()];
    seen[start] = true;
    while let Some(at) = queue.pop_front() {
        if at == goal {
            break;
        }
        for &e in basis {
            if let Some(other) = e.other(vars[at]) {
                let o = pos(other);
                if !seen[o] {
                    seen[o] = true;
                    prev[o] = Some((at, e));
                    queue.push_back(o);
                }
            }
        }
    }
    let mut chain = Vec::new();
    let mut at = goal;
    while at != start {
        let (p, e) = prev[at].expect("target endpoints are connected");
        chain.push(e);
        at = p;
    }
    chain.reverse();
    chain
}

/// Proof of `target` from a chain of cited equalities, built directly: at
/// level 0 a derivation listing the chain and folding transitivity, above
/// that a single assignment-free step wrapping the next level down.
fn chain_proof(level: usize, chain: &[Equality], target: Equality) -> Proof {
    if level == 0 {
        let mut steps: Vec<ZeroStep> = Vec::new();
        let mut index: std::collections::BTreeMap<Equality, usize> = Default::default();
        let cite = |steps: &mut Vec<ZeroStep>,
                        index: &mut std::collections::BTreeMap<Equality, usize>,
                        e: Equality,
                        just: ZeroJust| {
            *index.entry(e).or_insert_with(|| {
                steps.push(ZeroStep { equality: e, just });
                steps.len()
            })
        };
        let mut cur = chain[0];
        let mut cur_idx = cite(&mut steps, &mut index, cur, ZeroJust::Hypothesis);
        for &e in &chain[1..] {
            let idx = cite(&mut steps, &mut index, e, ZeroJust::Hypothesis);
            let next = cur.combine(e).expect("chain links share a variable");
            cur_idx = cite(
                &mut steps,
                &mut index,
                next,
                ZeroJust::Transitivity(cur_idx, idx),
            );
            cur = next;
        }
        assert_eq!(cur, target, "chain folds to the target");
        let _ = cur_idx;
        Proof::Zero(ZeroProof { steps })
    } else {
        Proof::K(KProof {
            mode: ProofMode::Equality,
            steps: vec![KStep {
                conclusion: Some(target),
                forall_assignments: Vec::new(),
                subproof: chain_proof(level - 1, chain, target),
            }],
        })
    }
}

#[cfg(test)]
pub(crate) fn chain_proof_for_tests(level: usize, chain: &[Equality], target: Equality) -> Proof {
    chain_proof(level, chain, target)
}

/// Decision outcome for a sentence through the proof system.
#[derive(Clone, Debug)]
pub struct SigmaDecision {
    pub truth: bool,
    /// Contradiction certificate when false.
    pub certificate: Option<Proof>,
}

/// Decides a sentence over the implication language: false iff the search
/// finds a contradiction certificate.
pub fn decide_sigma(f: &QEFormula, caps: &SearchCaps) -> Result<SigmaDecision, ProofError> {
    if !f.is_sentence() {
        return Err(ProofError::NotASentence);
    }
    let lf = layer_formula(f)?;
    let result = saturate_search(&lf, &[], caps)?;
    match result.verdict {
        SearchVerdict::Refuted {
            certificate,
            violated,
        } => {
            debug_assert!(violated.is_none(), "sentences cannot violate equalities");
            Ok(SigmaDecision {
                truth: false,
                certificate: Some(certificate),
            })
        }
        SearchVerdict::Consistent { .. } => Ok(SigmaDecision {
            truth: true,
            certificate: None,
        }),
    }
}

/// Convenience for tests and callers that want verification in one go.
pub fn verify_refutation(
    lf: &LayeredFormula,
    hypotheses: &[Equality],
    verdict: &SearchVerdict,
) -> Result<(), ProofReject> {
    let hyp_set: BTreeSet<Equality> = hypotheses.iter().copied().collect();
    match verdict {
        SearchVerdict::Refuted {
            certificate,
            violated,
        } => match (certificate, violated) {
            (Proof::Zero(z), v) => super::verify_zero_proof(
                &lf.core,
                &lf.free,
                &hyp_set,
                z,
                v.as_ref(),
            ),
            (Proof::K(kp), Some(e)) => super::verify_k_proof(lf, &hyp_set, kp, Some(e)),
            (Proof::K(kp), None) => super::verify_k_contradiction(lf, &hyp_set, kp),
        },
        SearchVerdict::Consistent { .. } => Ok(()),
    }
}
