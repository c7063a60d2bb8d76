use std::collections::BTreeMap;

use super::*;
use crate::formula::{parse_qecnf, Clause, Polarity, Quantifier, SimplifiedClause, Variable};

fn parse(text: &str) -> QEFormula {
    parse_qecnf(text).unwrap().formula
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn naive_examples() {
    // forall x exists y (x = y): copy strategy.
    let f = parse("qecnf 2\nforall 1\nexists 2\nc 1=2\n");
    assert!(decide_naive(&f, &cfg()).unwrap().truth);
    // exists y forall x (x = y): two values refute.
    let f = parse("qecnf 2\nexists 2\nforall 1\nc 1=2\n");
    assert!(!decide_naive(&f, &cfg()).unwrap().truth);
    // forall x y z (x != y or y = z): set x = y, z fresh.
    let f = parse("qecnf 3\nforall 1 2 3\nc 1!=2 2=3\n");
    assert!(!decide_naive(&f, &cfg()).unwrap().truth);
}

#[test]
fn decide_matches_on_examples() {
    for (text, expected) in [
        ("qecnf 2\nforall 1\nexists 2\nc 1=2\n", true),
        ("qecnf 2\nexists 2\nforall 1\nc 1=2\n", false),
        ("qecnf 3\nforall 1 2 3\nc 1!=2 2=3\n", false),
        ("qecnf 3\nforall 1 2\nexists 3\nc 1!=2 2=3\n", true),
        ("qecnf 1\nforall 1\n", true),
    ] {
        let f = parse(text);
        assert_eq!(decide(&f, &cfg()).unwrap().truth, expected, "{text}");
        assert_eq!(decide_naive(&f, &cfg()).unwrap().truth, expected, "{text}");
    }
}

#[test]
fn naive_cap_is_enforced() {
    let f = parse("qecnf 9\nforall 1 2 3 4 5 6 7 8 9\n");
    assert!(matches!(
        decide_naive(&f, &cfg()),
        Err(SolverError::CapExceeded { vars: 9, cap: 8 })
    ));
}

#[test]
fn budget_exhaustion_is_explicit() {
    let f = parse("qecnf 6\nforall 1 2 3\nexists 4 5 6\nc 1=4 2=5\nc 3=6 1=2\n");
    let mut c = cfg();
    c.node_budget = 3;
    assert!(matches!(
        decide(&f, &c),
        Err(SolverError::BudgetExhausted { limit: 3 })
    ));
}

#[test]
fn decide_rejects_free_variables() {
    let f = QEFormula::new(1, vec![], vec![], BTreeMap::new()).unwrap();
    assert!(matches!(
        decide(&f, &cfg()),
        Err(SolverError::FreeVariables { count: 1 })
    ));
}

/// Deterministic pool of sentences: every quantifier pattern over n
/// variables crossed with every matrix drawn from small clause subsets.
fn clause_pool(n: u32) -> Vec<Clause> {
    let mut pool = Vec::new();
    let raw: Vec<Vec<(u32, u32, Polarity)>> = vec![
        vec![(1, 2, Polarity::Eq)],
        vec![(2, 3, Polarity::Eq)],
        vec![(3, 4, Polarity::Eq)],
        vec![(1, 4, Polarity::Neq)],
        vec![(1, 2, Polarity::Neq), (2, 3, Polarity::Eq)],
        vec![(2, 3, Polarity::Neq), (3, 4, Polarity::Eq)],
        vec![(1, 2, Polarity::Eq), (3, 4, Polarity::Eq)],
        vec![(1, 3, Polarity::Neq), (2, 4, Polarity::Neq)],
        vec![(1, 3, Polarity::Eq), (2, 4, Polarity::Eq)],
        vec![(1, 2, Polarity::Neq), (3, 4, Polarity::Neq)],
        vec![(1, 2, Polarity::Neq)],
        vec![(1, 3, Polarity::Neq), (2, 3, Polarity::Eq)],
    ];
    for lits in raw {
        if lits.iter().all(|&(a, b, _)| a <= n && b <= n) {
            match Clause::from_raw(
                lits.iter()
                    .map(|&(a, b, p)| (Variable::new(a), Variable::new(b), p)),
            ) {
                SimplifiedClause::Clause(c) => pool.push(c),
                _ => unreachable!(),
            }
        }
    }
    pool
}

pub(crate) fn exhaustive_family(max_vars: u32, max_clauses: usize) -> Vec<QEFormula> {
    let mut family = Vec::new();
    for n in 1..=max_vars {
        let pool = clause_pool(n);
        let mut matrices: Vec<Vec<Clause>> = vec![vec![]];
        // All subsets of the pool up to the size bound.
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for size in 1..=max_clauses {
            let mut next = Vec::new();
            for s in subsets.iter().filter(|s| s.len() == size - 1) {
                let start = s.last().map_or(0, |&x| x + 1);
                for i in start..pool.len() {
                    let mut t = s.clone();
                    t.push(i);
                    next.push(t);
                }
            }
            subsets.extend(next);
        }
        for s in subsets.iter().skip(1) {
            matrices.push(s.iter().map(|&i| pool[i].clone()).collect());
        }
        for pattern in 0..(1u32 << n) {
            let prefix: Vec<(Quantifier, Variable)> = (1..=n)
                .map(|v| {
                    let q = if pattern & (1 << (v - 1)) != 0 {
                        Quantifier::Forall
                    } else {
                        Quantifier::Exists
                    };
                    (q, Variable::new(v))
                })
                .collect();
            for m in &matrices {
                family.push(QEFormula::new(n, prefix.clone(), m.clone(), BTreeMap::new()).unwrap());
            }
        }
    }
    family
}

#[test]
fn decide_agrees_with_naive_exhaustively() {
    // Small cut of the acceptance family; the full run lives in the
    // acceptance suite.
    let family = exhaustive_family(3, 2);
    assert!(family.len() > 100);
    for f in &family {
        let a = decide(f, &cfg()).unwrap().truth;
        let b = decide_naive(f, &cfg()).unwrap().truth;
        assert_eq!(a, b, "disagreement on {}", crate::formula::print_qecnf(f));
    }
}

#[test]
fn horn_leaf_and_liveness_do_not_change_verdicts() {
    let family = exhaustive_family(3, 2);
    let plain = cfg();
    let mut no_horn = cfg();
    no_horn.use_horn_leaf = false;
    let mut live = cfg();
    live.liveness_reduction = true;
    for f in &family {
        let a = decide(f, &plain).unwrap().truth;
        let b = decide(f, &no_horn).unwrap().truth;
        let c = decide(f, &live).unwrap().truth;
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}

#[test]
fn parallel_verdicts_match_sequential() {
    let family = exhaustive_family(3, 2);
    let mut par = cfg();
    par.workers = 4;
    for f in family.iter().step_by(7) {
        let a = decide(f, &cfg()).unwrap().truth;
        let b = decide(f, &par).unwrap().truth;
        assert_eq!(a, b);
    }
}

#[test]
fn verdict_invariant_under_index_renaming() {
    // Swapping variable indices (a pure relabeling applied to both prefix
    // and matrix) never changes the verdict.
    let family = exhaustive_family(3, 2);
    for f in family.iter().step_by(11) {
        let n = f.num_vars();
        let perm: Vec<u32> = (1..=n).rev().collect();
        let prefix = f
            .prefix()
            .iter()
            .map(|&(q, v)| (q, Variable::new(perm[v.slot()])))
            .collect();
        let matrix = f
            .matrix()
            .iter()
            .map(|c| {
                match Clause::from_raw(c.literals().iter().map(|l| {
                    (
                        Variable::new(perm[l.atom.a().slot()]),
                        Variable::new(perm[l.atom.b().slot()]),
                        l.polarity,
                    )
                })) {
                    SimplifiedClause::Clause(c) => c,
                    _ => unreachable!(),
                }
            })
            .collect();
        let g = QEFormula::new(n, prefix, matrix, BTreeMap::new()).unwrap();
        assert_eq!(
            decide(f, &cfg()).unwrap().truth,
            decide(&g, &cfg()).unwrap().truth
        );
    }
}

#[test]
fn horn_saturate_agrees_with_decide_on_existential_horn_sentences() {
    let family = exhaustive_family(4, 2);
    let mut checked = 0;
    for f in &family {
        let all_exists = f
            .prefix()
            .iter()
            .all(|&(q, _)| q == Quantifier::Exists);
        let horn = f.matrix().iter().all(|c| {
            c.literals()
                .iter()
                .filter(|l| l.polarity == Polarity::Eq)
                .count()
                <= 1
        });
        if !all_exists || !horn {
            continue;
        }
        checked += 1;
        let sat = matches!(
            horn_saturate(f.matrix(), f.num_vars(), None).unwrap(),
            HornOutcome::Consistent(_)
        );
        assert_eq!(sat, decide(f, &cfg()).unwrap().truth);
    }
    assert!(checked > 50);
}

#[test]
fn strategy_examples() {
    // forall x exists y (x = y): y joins x's class.
    let f = parse("qecnf 2\nforall 1\nexists 2\nc 1=2\n");
    let s = extract_strategy(&f, &cfg()).unwrap();
    assert_eq!(s.get(2, &[0]), Some(ClassChoice::Join(0)));
    assert!(replay_strategy(&f, &s).unwrap());

    // forall x forall y exists z (x != y or y = z).
    let f = parse("qecnf 3\nforall 1 2\nexists 3\nc 1!=2 2=3\n");
    let s = extract_strategy(&f, &cfg()).unwrap();
    // When the universals share a class, z must join it.
    assert_eq!(s.get(3, &[0, 0]), Some(ClassChoice::Join(0)));
    assert!(replay_strategy(&f, &s).unwrap());

    // Empty matrix: any total strategy replays fine.
    let f = parse("qecnf 2\nforall 1\nexists 2\n");
    let s = extract_strategy(&f, &cfg()).unwrap();
    assert!(replay_strategy(&f, &s).unwrap());

    // No strategy for a false sentence.
    let f = parse("qecnf 2\nexists 2\nforall 1\nc 1=2\n");
    assert!(matches!(
        extract_strategy(&f, &cfg()),
        Err(SolverError::NotTrue)
    ));
}

#[test]
fn strategies_replay_on_every_true_sentence_of_the_family() {
    for f in exhaustive_family(3, 2).iter().step_by(5) {
        if decide(f, &cfg()).unwrap().truth {
            let s = extract_strategy(f, &cfg()).unwrap();
            assert!(
                replay_strategy(f, &s).unwrap(),
                "replay failed on {}",
                crate::formula::print_qecnf(f)
            );
        }
    }
}

#[test]
fn fixed_free_decision_matches_naive() {
    // Relation-mode formula: free 1..2, forall 3, clause (1!=2 or 2=3).
    let f = QEFormula::new(
        3,
        vec![(Quantifier::Forall, Variable::new(3))],
        vec![
            match Clause::from_raw([
                (Variable::new(1), Variable::new(2), Polarity::Neq),
                (Variable::new(2), Variable::new(3), Polarity::Eq),
            ]) {
                SimplifiedClause::Clause(c) => c,
                _ => unreachable!(),
            },
        ],
        BTreeMap::new(),
    )
    .unwrap();
    for p in crate::partition::enumerate_partitions(2).unwrap() {
        let a = decide_fixed_free(&f, &p, &cfg()).unwrap().truth;
        let b = decide_naive_fixed_free(&f, &p, &cfg()).unwrap().truth;
        assert_eq!(a, b);
        // x != y holds exactly on the split kernel.
        assert_eq!(a, !p.same_class(0, 1));
    }
}

/// Exhaustive relation-mode agreement: every clause set over four
/// variables, every quantifier pattern on the two bound variables, every
/// kernel on the two free ones. This drives the component solver with
/// pre-assigned classes.
#[test]
fn fixed_free_agreement_is_exhaustive() {
    let pool = clause_pool(4);
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            subsets.push(vec![i, j]);
        }
        subsets.push(vec![i]);
    }
    let mut checked = 0;
    for quants in [
        [Quantifier::Exists, Quantifier::Exists],
        [Quantifier::Exists, Quantifier::Forall],
        [Quantifier::Forall, Quantifier::Exists],
        [Quantifier::Forall, Quantifier::Forall],
    ] {
        let prefix = vec![(quants[0], Variable::new(3)), (quants[1], Variable::new(4))];
        for s in &subsets {
            let matrix: Vec<Clause> = s.iter().map(|&i| pool[i].clone()).collect();
            let f = QEFormula::new(4, prefix.clone(), matrix, Default::default()).unwrap();
            for p in crate::partition::enumerate_partitions(2).unwrap() {
                let fast = decide_fixed_free(&f, &p, &cfg()).unwrap().truth;
                let slow = decide_naive_fixed_free(&f, &p, &cfg()).unwrap().truth;
                assert_eq!(
                    fast,
                    slow,
                    "kernel {p} on {}",
                    crate::formula::print_qecnf(&f)
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}
