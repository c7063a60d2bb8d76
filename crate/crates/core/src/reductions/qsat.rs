//! Reduction from quantified 3-SAT to QCSP over the implication relation
//! `I(a, l, b) = (a != l or l = b)`, drawn as an edge from `a` to `b`
//! labeled `l`.
//!
//! The output prefix is `forall t forall f`, then per round `i`:
//! `exists x_i^0 forall x_i^1 forall y_i^0 forall y_i^1`, then `exists z`
//! and all unlabeled gadget vertices innermost. The matrix is the union of
//! the chain gadgets for `i = 0..n` with the clause paths: `x_i^0 = t`
//! encodes `x_i = 0`, `x_i^1 = t` encodes `x_i = 1`, and likewise for the
//! universal rounds.

use crate::formula::{QEFormula, Quantifier, Variable};

use super::orchain::GadgetPiece;
use super::{FormulaBuilder, GadgetReport, PropLit, PropVar, Qbf, ReduceError, VarAlloc};

/// Labeled variables of the reduction output, 1-based per round.
#[derive(Clone, Debug)]
pub struct Labels {
    pub t: Variable,
    pub f: Variable,
    pub z: Variable,
    pub x0: Vec<Variable>,
    pub x1: Vec<Variable>,
    pub y0: Vec<Variable>,
    pub y1: Vec<Variable>,
}

impl Labels {
    fn x0(&self, i: u32) -> Variable {
        self.x0[(i - 1) as usize]
    }
    fn x1(&self, i: u32) -> Variable {
        self.x1[(i - 1) as usize]
    }
    fn y0(&self, i: u32) -> Variable {
        self.y0[(i - 1) as usize]
    }
    fn y1(&self, i: u32) -> Variable {
        self.y1[(i - 1) as usize]
    }

    /// The edge label encoding a propositional literal: `u^0` for a
    /// positive occurrence of `u`, `u^1` for a negated one.
    fn label_of(&self, l: PropLit) -> Variable {
        match (l.var, l.negated) {
            (PropVar::X(i), false) => self.x0(i),
            (PropVar::X(i), true) => self.x1(i),
            (PropVar::Y(i), false) => self.y0(i),
            (PropVar::Y(i), true) => self.y1(i),
        }
    }
}

fn edge_piece(piece: &mut GadgetPiece, from: Variable, label: Variable, to: Variable) {
    use crate::formula::{Clause, Polarity, SimplifiedClause};
    match Clause::from_raw([
        (from, label, Polarity::Neq),
        (label, to, Polarity::Eq),
    ]) {
        SimplifiedClause::Clause(c) => piece.clauses.push(c),
        other => unreachable!("degenerate edge: {other:?}"),
    }
}

/// Chain gadget for index `i` in `0..=n`: from the source (`f` for `i = 0`,
/// else `x_i^0`) a chain of parallel edge pairs labeled `(y_j^1, y_j^0)`
/// for `j = max(i,1)..=n`, then single edges labeled `x_j^1` for
/// `j = i+1..=n` into the meeting vertex; from `t` single edges labeled
/// `x_j^0` for `j = i+1..=n` and a final edge labeled `z` into the same
/// meeting vertex.
pub fn build_chain_gadget(i: u32, n: u32, labels: &Labels, alloc: &mut VarAlloc) -> GadgetPiece {
    assert!(i <= n);
    let mut piece = GadgetPiece::default();
    let fresh = |piece: &mut GadgetPiece, alloc: &mut VarAlloc, role: String| {
        let v = alloc.fresh();
        piece.fresh.push((v, role));
        v
    };

    let mut cur = if i == 0 { labels.f } else { labels.x0(i) };
    for j in i.max(1)..=n {
        let next = fresh(&mut piece, alloc, format!("chain{i}.pair{j}"));
        edge_piece(&mut piece, cur, labels.y1(j), next);
        edge_piece(&mut piece, cur, labels.y0(j), next);
        cur = next;
    }
    for j in i + 1..=n {
        let next = fresh(&mut piece, alloc, format!("chain{i}.upper{j}"));
        edge_piece(&mut piece, cur, labels.x1(j), next);
        cur = next;
    }
    let meet = cur;
    let mut lower = labels.t;
    for j in i + 1..=n {
        let next = fresh(&mut piece, alloc, format!("chain{i}.lower{j}"));
        edge_piece(&mut piece, lower, labels.x0(j), next);
        lower = next;
    }
    edge_piece(&mut piece, lower, labels.z, meet);
    piece
}

/// Clause paths: per 3-literal clause a path of length 3 from `t` to `z`
/// through two fresh vertices, edges labeled by the literal encoding.
pub fn build_clause_paths(
    clauses: &[[PropLit; 3]],
    labels: &Labels,
    alloc: &mut VarAlloc,
) -> GadgetPiece {
    let mut piece = GadgetPiece::default();
    for (ci, clause) in clauses.iter().enumerate() {
        let c = ci + 1;
        let p1 = alloc.fresh();
        piece.fresh.push((p1, format!("path{c}.v1")));
        let p2 = alloc.fresh();
        piece.fresh.push((p2, format!("path{c}.v2")));
        edge_piece(&mut piece, labels.t, labels.label_of(clause[0]), p1);
        edge_piece(&mut piece, p1, labels.label_of(clause[1]), p2);
        edge_piece(&mut piece, p2, labels.label_of(clause[2]), labels.z);
    }
    piece
}

fn build(phi: &Qbf, existential_tf: bool) -> Result<(QEFormula, GadgetReport), ReduceError> {
    let n = phi.rounds();
    let mut b = FormulaBuilder::new();
    let tf_quant = if existential_tf {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    };
    let t = b.var(tf_quant, "t", "truth marker");
    let f = b.var(tf_quant, "f", "falsity marker");
    let d = if existential_tf {
        Some(b.var(Quantifier::Forall, "d", "disequality gadget pin for t != f"))
    } else {
        None
    };
    let mut x0 = Vec::new();
    let mut x1 = Vec::new();
    let mut y0 = Vec::new();
    let mut y1 = Vec::new();
    for i in 1..=n {
        x0.push(b.var(Quantifier::Exists, format!("x{i}^0"), format!("x{i} = 0 encoder")));
        x1.push(b.var(Quantifier::Forall, format!("x{i}^1"), format!("x{i} = 1 encoder")));
        y0.push(b.var(Quantifier::Forall, format!("y{i}^0"), format!("y{i} = 0 encoder")));
        y1.push(b.var(Quantifier::Forall, format!("y{i}^1"), format!("y{i} = 1 encoder")));
    }
    let z = b.var(Quantifier::Exists, "z", "path sink");
    let labels = Labels {
        t,
        f,
        z,
        x0,
        x1,
        y0,
        y1,
    };
    if let Some(d) = d {
        // forall d . I(t, f, d) pins t != f.
        b.edge(t, f, d);
    }
    for i in 0..=n {
        let piece = build_chain_gadget(i, n, &labels, b.alloc());
        b.absorb(piece);
    }
    let piece = build_clause_paths(phi.clauses(), &labels, b.alloc());
    b.absorb(piece);
    b.finish()
}

/// Main reduction: the output is true iff the quantified 3-CNF is true.
pub fn qbf_to_qcsp(phi: &Qbf) -> Result<(QEFormula, GadgetReport), ReduceError> {
    build(phi, false)
}

/// Variant with `t` and `f` quantified existentially (still outermost) and
/// the added constraint `t != f` via its universal gadget pin.
pub fn qbf_to_qcsp_existential_tf(phi: &Qbf) -> Result<(QEFormula, GadgetReport), ReduceError> {
    build(phi, true)
}
