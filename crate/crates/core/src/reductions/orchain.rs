//! Disjunction chains and the not-all-equal gadget over the language
//! `{!=, x=y or u=v}`.
//!
//! A disjunction of pair predicates is realized by chaining: clause
//! `(P_i or y_i = y_{i+1})` per predicate plus the unit `y_1 != y_{m+1}`,
//! with every disequality predicate `u != v` first rewritten through a
//! fresh pin `v'` as `(u = v' or ...)` together with the unit `v != v'`.
//! Existentially closing the fresh variables yields exactly the
//! disjunction.

use std::collections::BTreeSet;

use crate::formula::{Clause, Polarity, SimplifiedClause, Variable};

use super::{ReduceError, VarAlloc};

/// An equality or disequality predicate on a variable pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pred {
    pub a: Variable,
    pub b: Variable,
    pub negated: bool,
}

impl Pred {
    pub fn eq(a: Variable, b: Variable) -> Self {
        Pred {
            a,
            b,
            negated: false,
        }
    }

    pub fn neq(a: Variable, b: Variable) -> Self {
        Pred {
            a,
            b,
            negated: true,
        }
    }
}

/// Clauses plus fresh (existential) variables produced by a gadget builder.
#[derive(Clone, Debug, Default)]
pub struct GadgetPiece {
    pub clauses: Vec<Clause>,
    pub fresh: Vec<(Variable, String)>,
}

impl GadgetPiece {
    fn clause(&mut self, lits: &[(Variable, Variable, Polarity)]) {
        match Clause::from_raw(lits.iter().copied()) {
            SimplifiedClause::Clause(c) => self.clauses.push(c),
            other => unreachable!("degenerate gadget clause: {other:?}"),
        }
    }

    fn fresh(&mut self, alloc: &mut VarAlloc, name: String) -> Variable {
        let v = alloc.fresh();
        self.fresh.push((v, name));
        v
    }
}

/// Realizes `P_1 or ... or P_m` with fresh existential variables.
pub fn or_chain(
    preds: &[Pred],
    alloc: &mut VarAlloc,
    prefix: &str,
) -> Result<GadgetPiece, ReduceError> {
    if preds.is_empty() {
        return Err(ReduceError::EmptyPredicateList);
    }
    let mut piece = GadgetPiece::default();
    // Pins and chain variables interleaved so every clause completes as
    // soon as its last variable is played.
    let mut prev = piece.fresh(alloc, format!("{prefix}.y1"));
    let first = prev;
    for (i, p) in preds.iter().enumerate() {
        let pin = p
            .negated
            .then(|| piece.fresh(alloc, format!("{prefix}.p{}", i + 1)));
        let next = piece.fresh(alloc, format!("{prefix}.y{}", i + 2));
        let link = (prev, next, Polarity::Eq);
        match pin {
            Some(pin) => {
                // (u = v' or link) and v != v'.
                piece.clause(&[(p.a, pin, Polarity::Eq), link]);
                piece.clause(&[(p.b, pin, Polarity::Neq)]);
            }
            None => piece.clause(&[(p.a, p.b, Polarity::Eq), link]),
        }
        prev = next;
    }
    piece.clause(&[(first, prev, Polarity::Neq)]);
    Ok(piece)
}

/// One pair-literal of the not-all-equal expansion: a predicate on one of
/// the three encoded pairs.
type PairLit = (usize, bool); // (pair index, negated)

/// Not-all-equal of three pair-encoded booleans (`v = v'` encodes true),
/// over six distinct variables.
pub fn nae_gadget(
    vars: [Variable; 6],
    alloc: &mut VarAlloc,
    prefix: &str,
) -> Result<GadgetPiece, ReduceError> {
    let mut seen = BTreeSet::new();
    for v in vars {
        if !seen.insert(v.index()) {
            return Err(ReduceError::NonDistinctVariables);
        }
    }
    Ok(nae_gadget_pairs(
        [(vars[0], vars[1]), (vars[2], vars[3]), (vars[4], vars[5])],
        alloc,
        prefix,
    ))
}

/// Pair-level builder, tolerant of repeated pairs (as arise from instances
/// with repeated variables in one constraint).
pub(crate) fn nae_gadget_pairs(
    pairs: [(Variable, Variable); 3],
    alloc: &mut VarAlloc,
    prefix: &str,
) -> GadgetPiece {
    // Canonical atom per pair so repeated pairs share literal identity.
    let canon: Vec<(u32, u32)> = pairs
        .iter()
        .map(|&(a, b)| {
            assert_ne!(a, b, "a pair encodes one boolean with two variables");
            (a.index().min(b.index()), a.index().max(b.index()))
        })
        .collect();

    // Disjunctive terms: every sign pattern except all-true and all-false.
    let mut terms: Vec<Vec<PairLit>> = Vec::new();
    for mask in 1u8..7 {
        let mut term: Vec<PairLit> = Vec::new();
        let mut contradictory = false;
        for i in 0..3 {
            let lit: PairLit = (i, mask & (1 << i) == 0);
            // Identify literals through the canonical atom.
            let key = (canon[i], lit.1);
            if term
                .iter()
                .any(|&(j, n)| (canon[j], n) == (key.0, !key.1))
            {
                contradictory = true;
                break;
            }
            if !term.iter().any(|&(j, n)| (canon[j], n) == key) {
                term.push(lit);
            }
        }
        if !contradictory {
            terms.push(term);
        }
    }

    let mut piece = GadgetPiece::default();
    if terms.is_empty() {
        // All three booleans coincide: not-all-equal is plain false.
        let w1 = piece.fresh(alloc, format!("{prefix}.false1"));
        let w2 = piece.fresh(alloc, format!("{prefix}.false2"));
        piece.clause(&[(w1, w2, Polarity::Eq)]);
        piece.clause(&[(w1, w2, Polarity::Neq)]);
        return piece;
    }

    // Distribute to CNF over pair-literals, dropping tautologies and
    // duplicates, then remove subsumed clauses.
    let mut cnf: BTreeSet<BTreeSet<((u32, u32), bool)>> = BTreeSet::new();
    let mut picks = vec![0usize; terms.len()];
    'outer: loop {
        let mut clause: BTreeSet<((u32, u32), bool)> = BTreeSet::new();
        let mut tautology = false;
        for (t, &p) in terms.iter().zip(picks.iter()) {
            let (i, n) = t[p % t.len()];
            let key = (canon[i], n);
            if clause.contains(&(key.0, !key.1)) {
                tautology = true;
                break;
            }
            clause.insert(key);
        }
        if !tautology {
            cnf.insert(clause);
        }
        // Next pick vector.
        for slot in 0..picks.len() {
            picks[slot] += 1;
            if picks[slot] < terms[slot].len() {
                continue 'outer;
            }
            picks[slot] = 0;
        }
        break;
    }
    let minimal: Vec<_> = cnf
        .iter()
        .filter(|c| !cnf.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect();

    for (ci, clause) in minimal.iter().enumerate() {
        let preds: Vec<Pred> = clause
            .iter()
            .map(|&((a, b), negated)| Pred {
                a: Variable::new(a),
                b: Variable::new(b),
                negated,
            })
            .collect();
        let chain = or_chain(&preds, alloc, &format!("{prefix}.c{}", ci + 1))
            .expect("expansion clauses are nonempty");
        piece.clauses.extend(chain.clauses);
        piece.fresh.extend(chain.fresh);
    }
    piece
}
