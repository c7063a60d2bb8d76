//! Class-choice game search with clause watching, kernel memoization and a
//! Horn saturation leaf.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use smallvec::SmallVec;

use crate::formula::{Polarity, QEFormula, Quantifier};
use crate::partition::Partition;

use super::horn::UnionFind;
use super::{SearchStats, SolverConfig, SolverError, Verdict};

/// Depth up to which sibling branches run on the worker pool.
const PAR_DEPTH: u32 = 3;

/// Memo entries stop being inserted past this size; with plain kernel keys
/// every node is distinct, so an unbounded table would track the whole
/// search tree.
const MEMO_CAP: usize = 1 << 21;

const UNASSIGNED: u32 = u32::MAX;

type Key = SmallVec<[u8; 24]>;

#[derive(Clone, Copy)]
struct CLit {
    a: u32,
    b: u32,
    negated: bool,
}

struct CClause {
    lits: Vec<CLit>,
    horn: bool,
}

pub(super) struct Compiled {
    num_slots: usize,
    fixed: usize,
    /// Quantifier per slot; fixed slots carry `Exists` but are never played.
    quants: Vec<Quantifier>,
    clauses: Vec<CClause>,
    /// Literals whose later endpoint is this slot.
    lits_at: Vec<Vec<(u32, CLit)>>,
    /// Clauses whose last variable is this slot.
    completes_at: Vec<Vec<u32>>,
    /// Earliest position from which all remaining slots are existential.
    all_exists_from: usize,
    /// Per slot: one past the last position at which the slot can still
    /// influence an incomplete clause.
    last_use: Vec<usize>,
    non_horn_total: usize,
}

#[derive(Clone)]
struct State {
    assign: Vec<u32>,
    num_classes: u32,
    satisfied: Vec<bool>,
    sat_count: usize,
    non_horn_unsat: usize,
    trail: Vec<u32>,
}

struct Engine<'c> {
    c: &'c Compiled,
    cfg: SolverConfig,
    memo: DashMap<Key, bool>,
    nodes: AtomicU64,
    memo_hits: AtomicU64,
}

pub(super) fn solve(
    f: &QEFormula,
    fixed: Option<&Partition>,
    cfg: &SolverConfig,
) -> Result<Verdict, SolverError> {
    let compiled = compile(f);
    let engine = Engine {
        c: &compiled,
        cfg: cfg.clone(),
        memo: DashMap::new(),
        nodes: AtomicU64::new(0),
        memo_hits: AtomicU64::new(0),
    };
    let mut state = State {
        assign: vec![UNASSIGNED; compiled.num_slots],
        num_classes: 0,
        satisfied: vec![false; compiled.clauses.len()],
        sat_count: 0,
        non_horn_unsat: compiled.non_horn_total,
        trail: Vec::new(),
    };
    // Fixed free variables are played before the prefix.
    let mut root_ok = true;
    if let Some(p) = fixed {
        for s in 0..p.len() {
            let (_, _, ok) = engine.push(&mut state, s, p.class_of(s));
            root_ok &= ok;
        }
    }
    let truth = if !root_ok {
        false
    } else if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .expect("worker pool");
        pool.install(|| engine.search(&mut state, compiled.fixed, 0))?
    } else {
        engine.search(&mut state, compiled.fixed, 0)?
    };
    Ok(Verdict {
        truth,
        stats: SearchStats {
            nodes: engine.nodes.load(Ordering::Relaxed),
            memo_hits: engine.memo_hits.load(Ordering::Relaxed),
        },
    })
}

fn compile(f: &QEFormula) -> Compiled {
    let fixed = f.num_free() as usize;
    let num_slots = f.num_vars() as usize;
    // Assignment slot per variable: free variables first, then prefix order.
    let mut slot_of_var = vec![usize::MAX; num_slots];
    for (s, slot) in slot_of_var.iter_mut().enumerate().take(fixed) {
        *slot = s;
    }
    let mut quants = vec![Quantifier::Exists; num_slots];
    for (i, &(q, v)) in f.prefix().iter().enumerate() {
        slot_of_var[v.slot()] = fixed + i;
        quants[fixed + i] = q;
    }

    let mut clauses = Vec::with_capacity(f.matrix().len());
    let mut lits_at: Vec<Vec<(u32, CLit)>> = vec![Vec::new(); num_slots];
    let mut completes_at: Vec<Vec<u32>> = vec![Vec::new(); num_slots];
    let mut last_use = vec![0usize; num_slots];
    let mut non_horn_total = 0;
    for (ci, c) in f.matrix().iter().enumerate() {
        let mut lits = Vec::with_capacity(c.literals().len());
        let mut clause_last = 0usize;
        for l in c.literals() {
            let a = slot_of_var[l.atom.a().slot()] as u32;
            let b = slot_of_var[l.atom.b().slot()] as u32;
            let lit = CLit {
                a: a.min(b),
                b: a.max(b),
                negated: l.polarity == Polarity::Neq,
            };
            lits_at[lit.b as usize].push((ci as u32, lit));
            clause_last = clause_last.max(lit.b as usize);
            lits.push(lit);
        }
        completes_at[clause_last].push(ci as u32);
        let horn = c
            .literals()
            .iter()
            .filter(|l| l.polarity == Polarity::Eq)
            .count()
            <= 1;
        if !horn {
            non_horn_total += 1;
        }
        for l in &lits {
            for s in [l.a as usize, l.b as usize] {
                last_use[s] = last_use[s].max(clause_last + 1);
            }
        }
        clauses.push(CClause { lits, horn });
    }

    let mut all_exists_from = num_slots;
    while all_exists_from > fixed && quants[all_exists_from - 1] == Quantifier::Exists {
        all_exists_from -= 1;
    }

    Compiled {
        num_slots,
        fixed,
        quants,
        clauses,
        lits_at,
        completes_at,
        all_exists_from,
        last_use,
        non_horn_total,
    }
}

impl Engine<'_> {
    fn count_node(&self) -> Result<(), SolverError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cfg.node_budget {
            return Err(SolverError::BudgetExhausted {
                limit: self.cfg.node_budget,
            });
        }
        Ok(())
    }

    /// Assigns `class` to `slot`, updating satisfaction watches. Returns the
    /// undo marks and whether no clause completed unsatisfied.
    fn push(&self, st: &mut State, slot: usize, class: u32) -> (u32, usize, bool) {
        let old_classes = st.num_classes;
        st.assign[slot] = class;
        if class == st.num_classes {
            st.num_classes += 1;
        }
        let tmark = st.trail.len();
        for &(ci, lit) in &self.c.lits_at[slot] {
            let ci = ci as usize;
            if !st.satisfied[ci] {
                let equal = st.assign[lit.a as usize] == st.assign[lit.b as usize];
                if equal != lit.negated {
                    st.satisfied[ci] = true;
                    st.sat_count += 1;
                    st.trail.push(ci as u32);
                    if !self.c.clauses[ci].horn {
                        st.non_horn_unsat -= 1;
                    }
                }
            }
        }
        let ok = self.c.completes_at[slot]
            .iter()
            .all(|&ci| st.satisfied[ci as usize]);
        (old_classes, tmark, ok)
    }

    fn pop(&self, st: &mut State, slot: usize, old_classes: u32, tmark: usize) {
        st.assign[slot] = UNASSIGNED;
        st.num_classes = old_classes;
        while st.trail.len() > tmark {
            let ci = st.trail.pop().unwrap() as usize;
            st.satisfied[ci] = false;
            st.sat_count -= 1;
            if !self.c.clauses[ci].horn {
                st.non_horn_unsat += 1;
            }
        }
    }

    /// Memo keys exist only for the alternating region (before the innermost
    /// existential run) and only for narrow kernels; elsewhere lookups can
    /// never pay for themselves.
    fn memo_key(&self, st: &State, pos: usize) -> Option<Key> {
        if pos >= self.c.all_exists_from || self.c.num_slots > 255 {
            return None;
        }
        let mut key: Key = SmallVec::new();
        key.push((pos & 0xff) as u8);
        key.push((pos >> 8) as u8);
        if self.cfg.liveness_reduction {
            // Canonical kernel of the live assigned slots only.
            let mut relabel: SmallVec<[u8; 24]> = SmallVec::new();
            relabel.resize(st.num_classes as usize, u8::MAX);
            let mut next = 0u8;
            for s in 0..pos {
                if self.c.last_use[s] > pos {
                    let c = st.assign[s] as usize;
                    if relabel[c] == u8::MAX {
                        relabel[c] = next;
                        next += 1;
                    }
                    key.push(relabel[c]);
                } else {
                    key.push(u8::MAX); // dead marker keeps positions aligned
                }
            }
        } else {
            for s in 0..pos {
                key.push(st.assign[s] as u8);
            }
        }
        Some(key)
    }

    fn search(&self, st: &mut State, pos: usize, depth: u32) -> Result<bool, SolverError> {
        self.count_node()?;
        if st.sat_count == self.c.clauses.len() {
            return Ok(true);
        }
        if pos == self.c.num_slots {
            // Every clause completed on the way down and none unsatisfied.
            return Ok(true);
        }
        if pos >= self.c.all_exists_from {
            if self.cfg.use_horn_leaf && st.non_horn_unsat == 0 {
                return Ok(self.horn_leaf(st));
            }
            // The rest of the game is purely existential.
            let unassigned: Vec<usize> = (pos..self.c.num_slots).collect();
            return self.exists_csp(st, &unassigned);
        }
        let key = self.memo_key(st, pos);
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                self.memo_hits.fetch_add(1, Ordering::Relaxed);
                return Ok(*v);
            }
        }

        let q = self.c.quants[pos];
        let choices = st.num_classes + 1;
        let value = if self.cfg.workers > 1 && depth < PAR_DEPTH {
            use rayon::prelude::*;
            let results: Result<Vec<bool>, SolverError> = (0..choices)
                .into_par_iter()
                .map(|class| {
                    let mut child = st.clone();
                    let (_, _, ok) = self.push(&mut child, pos, class);
                    if !ok {
                        return Ok(false);
                    }
                    self.search(&mut child, pos + 1, depth + 1)
                })
                .collect();
            let results = results?;
            match q {
                Quantifier::Exists => results.iter().any(|&v| v),
                Quantifier::Forall => results.iter().all(|&v| v),
            }
        } else {
            let mut value = q == Quantifier::Forall;
            for class in 0..choices {
                let (oc, tmark, ok) = self.push(st, pos, class);
                let sub = if ok {
                    self.search(st, pos + 1, depth + 1)
                } else {
                    Ok(false)
                };
                self.pop(st, pos, oc, tmark);
                let sub = sub?;
                match q {
                    Quantifier::Exists if sub => {
                        value = true;
                        break;
                    }
                    Quantifier::Forall if !sub => {
                        value = false;
                        break;
                    }
                    _ => {}
                }
            }
            value
        };

        if let Some(k) = key {
            if self.memo.len() < MEMO_CAP {
                self.memo.insert(k, value);
            }
        }
        Ok(value)
    }

    /// Existential tail solver. Satisfiability factorizes over connected
    /// components of the unsatisfied clauses, recomputed after every
    /// assignment, so independent gadgets cost a sum instead of a
    /// product. A variable only ever joins a class that an unsatisfied
    /// clause of its component can see, or opens a fresh one; literals
    /// compare clause partners only, so other classes are
    /// indistinguishable from fresh.
    fn exists_csp(&self, st: &mut State, unassigned: &[usize]) -> Result<bool, SolverError> {
        self.count_node()?;
        if unassigned.is_empty() || st.sat_count == self.c.clauses.len() {
            return Ok(true);
        }
        if self.cfg.use_horn_leaf && st.non_horn_unsat == 0 {
            return Ok(self.horn_leaf(st));
        }

        // Connected components of the unassigned slots under unsatisfied
        // clauses.
        let n = self.c.num_slots;
        let mut idx: Vec<usize> = vec![usize::MAX; n];
        for (i, &s) in unassigned.iter().enumerate() {
            idx[s] = i;
        }
        let mut uf = UnionFind::new(unassigned.len());
        for (ci, clause) in self.c.clauses.iter().enumerate() {
            if st.satisfied[ci] {
                continue;
            }
            let mut prev: Option<u32> = None;
            for lit in &clause.lits {
                for s in [lit.a as usize, lit.b as usize] {
                    if idx[s] != usize::MAX {
                        if let Some(p) = prev {
                            uf.union(p, idx[s] as u32);
                        }
                        prev = Some(idx[s] as u32);
                    }
                }
            }
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut membership: Vec<usize> = vec![usize::MAX; unassigned.len()];
        let mut comp_of_root: Vec<usize> = vec![usize::MAX; unassigned.len()];
        for (i, &s) in unassigned.iter().enumerate() {
            let root = uf.find(i as u32) as usize;
            if comp_of_root[root] == usize::MAX {
                comp_of_root[root] = components.len();
                components.push(Vec::new());
            }
            let cid = comp_of_root[root];
            components[cid].push(s);
            membership[i] = cid;
        }

        // Visible assigned classes per component: an unsatisfied clause's
        // unassigned variables all lie in one component, and its assigned
        // variables donate their classes to that component.
        let mut visible: Vec<Vec<bool>> =
            vec![vec![false; st.num_classes as usize]; components.len()];
        let mut constrained = vec![false; components.len()];
        for (ci, clause) in self.c.clauses.iter().enumerate() {
            if st.satisfied[ci] {
                continue;
            }
            let cid = clause.lits.iter().find_map(|l| {
                [l.a as usize, l.b as usize]
                    .into_iter()
                    .find_map(|s| (idx[s] != usize::MAX).then(|| membership[idx[s]]))
            });
            let Some(cid) = cid else { continue };
            constrained[cid] = true;
            for lit in &clause.lits {
                for s in [lit.a as usize, lit.b as usize] {
                    if st.assign[s] != UNASSIGNED {
                        visible[cid][st.assign[s] as usize] = true;
                    }
                }
            }
        }

        for (cid, comp) in components.iter().enumerate() {
            if !constrained[cid] {
                // Every clause this group could influence is satisfied;
                // fresh values finish it off.
                continue;
            }
            let branch = comp[0];
            let rest: Vec<usize> = comp[1..].to_vec();
            let mut found = false;
            for class in 0..=st.num_classes {
                if class < st.num_classes && !visible[cid][class as usize] {
                    continue;
                }
                let (oc, tmark, ok) = self.push(st, branch, class);
                let sub = if ok {
                    self.exists_csp(st, &rest)
                } else {
                    Ok(false)
                };
                self.pop(st, branch, oc, tmark);
                if sub? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All remaining slots are existential and every unsatisfied clause is
    /// Horn: satisfiability reduces to equality-closure saturation against
    /// the kernel of the assigned slots.
    fn horn_leaf(&self, st: &State) -> bool {
        let mut uf = UnionFind::new(self.c.num_slots);
        let mut class_rep: Vec<Option<u32>> = vec![None; st.num_classes as usize];
        for s in 0..self.c.num_slots {
            let cls = st.assign[s];
            if cls == UNASSIGNED {
                continue;
            }
            match class_rep[cls as usize] {
                Some(rep) => {
                    uf.union(s as u32, rep);
                }
                None => class_rep[cls as usize] = Some(s as u32),
            }
        }
        let class_rep: Vec<u32> = class_rep.into_iter().flatten().collect();
        let mut fired = vec![false; self.c.clauses.len()];
        loop {
            let mut changed = false;
            for (ci, clause) in self.c.clauses.iter().enumerate() {
                if fired[ci] || st.satisfied[ci] {
                    continue;
                }
                let Some(pos_lit) = clause.lits.iter().find(|l| !l.negated) else {
                    continue;
                };
                let premise = clause
                    .lits
                    .iter()
                    .filter(|l| l.negated)
                    .all(|l| uf.same(l.a, l.b));
                if premise {
                    fired[ci] = true;
                    uf.union(pos_lit.a, pos_lit.b);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // Distinct assigned classes must stay distinct.
        for i in 0..class_rep.len() {
            for j in i + 1..class_rep.len() {
                if uf.same(class_rep[i], class_rep[j]) {
                    return false;
                }
            }
        }
        // All-negative clauses must keep one pair split.
        for (ci, clause) in self.c.clauses.iter().enumerate() {
            if st.satisfied[ci] || clause.lits.iter().any(|l| !l.negated) {
                continue;
            }
            if clause.lits.iter().all(|l| uf.same(l.a, l.b)) {
                return false;
            }
        }
        true
    }
}
