//! Splitting a prenex formula into the layered view.

use crate::formula::{Polarity, QEFormula, Quantifier, Variable};

use super::{Equality, GammaConstraint, Layer, LayeredFormula, ProofError, SigmaCore};

/// Accepts matrices whose clauses are unit equalities or two-literal
/// implications (one negative, one positive literal). The prefix is split
/// into (existential block, universal block) layers ending with a flat
/// core; a leading universal block gets an empty existential block in
/// front, a trailing existential-free tail an empty core.
pub fn layer_formula(f: &QEFormula) -> Result<LayeredFormula, ProofError> {
    let mut constraints = Vec::new();
    for c in f.matrix() {
        let lits = c.literals();
        let gamma = match lits.len() {
            1 if lits[0].polarity == Polarity::Eq => Some(GammaConstraint::Unit(
                Equality::new(lits[0].atom.a(), lits[0].atom.b()).unwrap(),
            )),
            2 => {
                let neg = lits.iter().find(|l| l.polarity == Polarity::Neq);
                let pos = lits.iter().find(|l| l.polarity == Polarity::Eq);
                match (neg, pos) {
                    (Some(n), Some(p)) => Some(GammaConstraint::Implication(
                        Equality::new(n.atom.a(), n.atom.b()).unwrap(),
                        Equality::new(p.atom.a(), p.atom.b()).unwrap(),
                    )),
                    _ => None,
                }
            }
            _ => None,
        };
        match gamma {
            Some(g) => constraints.push(g),
            None => return Err(ProofError::NonGammaClause(c.to_string())),
        }
    }

    // Maximal quantifier blocks.
    let mut blocks: Vec<(Quantifier, Vec<Variable>)> = Vec::new();
    for &(q, v) in f.prefix() {
        match blocks.last_mut() {
            Some((bq, vars)) if *bq == q => vars.push(v),
            _ => blocks.push((q, vec![v])),
        }
    }
    if blocks.first().map(|(q, _)| *q) == Some(Quantifier::Forall) {
        blocks.insert(0, (Quantifier::Exists, Vec::new()));
    }
    if blocks.last().map(|(q, _)| *q) == Some(Quantifier::Forall) {
        blocks.push((Quantifier::Exists, Vec::new()));
    }

    let mut layers = Vec::new();
    let mut core_exists = Vec::new();
    let mut i = 0;
    while i < blocks.len() {
        if i + 1 < blocks.len() {
            layers.push(Layer {
                exists: blocks[i].1.clone(),
                forall: blocks[i + 1].1.clone(),
            });
            i += 2;
        } else {
            core_exists = blocks[i].1.clone();
            i += 1;
        }
    }

    Ok(LayeredFormula {
        free: f.free_vars().collect(),
        layers,
        core: SigmaCore {
            exists: core_exists,
            constraints,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_qecnf;

    fn layered(text: &str) -> Result<LayeredFormula, ProofError> {
        layer_formula(&parse_qecnf(text).unwrap().formula)
    }

    #[test]
    fn one_layer_plus_core() {
        let lf = layered("qecnf 3\nexists 1\nforall 2\nexists 3\nc 1!=2 2=3\n").unwrap();
        assert_eq!(lf.level(), 1);
        assert_eq!(lf.layers[0].exists, vec![Variable::new(1)]);
        assert_eq!(lf.layers[0].forall, vec![Variable::new(2)]);
        assert_eq!(lf.core.exists, vec![Variable::new(3)]);
        assert_eq!(lf.core.constraints.len(), 1);
    }

    #[test]
    fn non_gamma_clause_is_named() {
        let err = layered("qecnf 4\nexists 1 2 3 4\nc 1=2 3=4\n").unwrap_err();
        match err {
            ProofError::NonGammaClause(c) => assert_eq!(c, "1=2 3=4"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn purely_existential_formula_has_zero_layers() {
        let lf = layered("qecnf 2\nexists 1 2\nc 1=2\n").unwrap();
        assert_eq!(lf.level(), 0);
        assert_eq!(lf.core.exists.len(), 2);
    }

    #[test]
    fn leading_universal_and_trailing_universal_pad_with_empty_blocks() {
        let lf = layered("qecnf 2\nforall 1\nexists 2\nc 1=2\n").unwrap();
        assert_eq!(lf.level(), 1);
        assert!(lf.layers[0].exists.is_empty());
        assert_eq!(lf.core.exists, vec![Variable::new(2)]);

        let lf = layered("qecnf 2\nexists 1\nforall 2\nc 1=2\n").unwrap();
        assert_eq!(lf.level(), 1);
        assert!(lf.core.exists.is_empty());
    }

    #[test]
    fn relation_mode_free_variables_are_kept() {
        let f = crate::formula::parse_relation_source("rel 2\nforall 3\nc 1!=3 3=2\n").unwrap();
        let crate::formula::RelationSource::Defined(f) = f else {
            panic!()
        };
        let lf = layer_formula(&f).unwrap();
        assert_eq!(lf.free.len(), 2);
        assert_eq!(lf.level(), 1);
    }
}
