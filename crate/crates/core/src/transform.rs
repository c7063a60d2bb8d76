//! Prefix-shaping utilities and the exponential rewriting of an
//! alternating sentence into an equivalent Π₂ sentence.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Clause, FormulaError, QEFormula, Quantifier, SimplifiedClause, Variable};

/// Default cap on the number of exists/forall rounds accepted by
/// [`expand_to_pi2`]; the output matrix has `(2n)^n` copies.
pub const DEFAULT_PI2_CAP: u32 = 4;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("prefix is not strictly alternating exists/forall rounds; run pad_to_sigma_shape first")]
    ShapeViolation,
    #[error("{rounds} rounds exceed the cap {cap}; the output would hold {copies} matrix copies (use force to override)")]
    CapExceeded { rounds: u32, cap: u32, copies: u64 },
    #[error("the rewritten sentence would hold {0} variables, beyond what can be represented")]
    OutputTooLarge(u128),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Maximal quantifier blocks of a prefix, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternationProfile {
    pub blocks: Vec<Quantifier>,
}

impl AlternationProfile {
    /// Number of maximal blocks; 0 for an empty prefix.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn leading(&self) -> Option<Quantifier> {
        self.blocks.first().copied()
    }

    /// Smallest `k` such that the profile fits a Π_k prefix (leading
    /// universal block, `k` blocks).
    pub fn pi_rank(&self) -> usize {
        match self.leading() {
            None => 0,
            Some(Quantifier::Forall) => self.blocks.len(),
            Some(Quantifier::Exists) => self.blocks.len() + 1,
        }
    }
}

pub fn alternation_profile(f: &QEFormula) -> AlternationProfile {
    let mut blocks = Vec::new();
    for &(q, _) in f.prefix() {
        if blocks.last() != Some(&q) {
            blocks.push(q);
        }
    }
    AlternationProfile { blocks }
}

/// Inserts fresh dummy variables (unused in the matrix) so the prefix
/// becomes strictly alternating single-variable rounds starting with an
/// existential and ending with a universal. Dummies are unconstrained, so
/// the truth value is preserved.
pub fn pad_to_sigma_shape(f: &QEFormula) -> QEFormula {
    let mut prefix: Vec<(Quantifier, Variable)> = Vec::new();
    let mut names = f.names().clone();
    let mut next_var = f.num_vars();
    let mut next_dummy = 0u32;
    let mut expected = Quantifier::Exists;
    let mut fresh = |names: &mut BTreeMap<u32, String>, next_dummy: &mut u32, q| {
        next_var += 1;
        *next_dummy += 1;
        names.insert(next_var, format!("d{next_dummy}"));
        (q, Variable::new(next_var))
    };
    for &(q, v) in f.prefix() {
        if q != expected {
            prefix.push(fresh(&mut names, &mut next_dummy, expected));
            expected = flip(expected);
        }
        prefix.push((q, v));
        expected = flip(expected);
    }
    // Rounds end on a universal; an empty prefix becomes one full round.
    if expected == Quantifier::Exists && !prefix.is_empty() {
        // Already ends with a universal.
    } else {
        if prefix.is_empty() {
            prefix.push(fresh(&mut names, &mut next_dummy, Quantifier::Exists));
        }
        prefix.push(fresh(&mut names, &mut next_dummy, Quantifier::Forall));
    }
    QEFormula::new(next_var, prefix, f.matrix().to_vec(), names)
        .expect("padding preserves validity")
}

fn flip(q: Quantifier) -> Quantifier {
    match q {
        Quantifier::Exists => Quantifier::Forall,
        Quantifier::Forall => Quantifier::Exists,
    }
}

/// The exists/forall rounds of a shaped prefix.
fn rounds_of(f: &QEFormula) -> Result<Vec<(Variable, Variable)>, TransformError> {
    if !f.prefix().len().is_multiple_of(2) || !f.is_sentence() {
        return Err(TransformError::ShapeViolation);
    }
    let mut rounds = Vec::new();
    for pair in f.prefix().chunks(2) {
        match (pair[0], pair[1]) {
            ((Quantifier::Exists, y), (Quantifier::Forall, x)) => rounds.push((y, x)),
            _ => return Err(TransformError::ShapeViolation),
        }
    }
    if rounds.is_empty() {
        return Err(TransformError::ShapeViolation);
    }
    Ok(rounds)
}

/// Rewrites a sentence with prefix `exists y1 forall x1 ... exists yn
/// forall xn` into an equivalent Π₂ sentence.
///
/// For every tuple `(a1..an)` over `[2n]` the matrix is copied with `y_i`
/// renamed to the copy indexed by `(a1..a_{i-1})` (so `y1` is shared) and
/// `x_i` to the copy indexed by `(a1..a_i)`; the output universally
/// quantifies all x-copies and then existentially quantifies all y-copies.
pub fn expand_to_pi2(f: &QEFormula, cap: u32, force: bool) -> Result<QEFormula, TransformError> {
    let rounds = rounds_of(f)?;
    let n = rounds.len() as u32;
    let width = 2 * n;
    let copies = (width as u64).pow(n);
    if n > cap && !force {
        return Err(TransformError::CapExceeded {
            rounds: n,
            cap,
            copies,
        });
    }
    // Even forced runs must stay representable.
    let total_vars: u128 = (1..=n)
        .map(|i| (width as u128).pow(i) + (width as u128).pow(i - 1))
        .sum();
    if total_vars > 50_000_000 {
        return Err(TransformError::OutputTooLarge(total_vars));
    }

    // Copy indices in lexicographic tuple order: x_i copies are keyed by
    // tuples of length i, y_i copies by tuples of length i-1.
    let mut names = BTreeMap::new();
    let mut prefix = Vec::new();
    let mut next = 0u32;
    // x-copy index for (i, tuple): offsets per level.
    let mut x_base = vec![0u32; n as usize + 1];
    let mut y_base = vec![0u32; n as usize + 1];
    for i in 1..=n {
        x_base[i as usize] = next;
        let count = (width as u64).pow(i) as u32;
        for t in 0..count {
            next += 1;
            let tuple = decode_tuple(t, i, width);
            names.insert(next, copy_name("x", i, &tuple));
            prefix.push((Quantifier::Forall, Variable::new(next)));
        }
    }
    for i in 1..=n {
        y_base[i as usize] = next;
        let count = (width as u64).pow(i - 1) as u32;
        for t in 0..count {
            next += 1;
            let tuple = decode_tuple(t, i - 1, width);
            names.insert(next, copy_name("y", i, &tuple));
            prefix.push((Quantifier::Exists, Variable::new(next)));
        }
    }

    // Per-round variable role: position of a variable within the rounds.
    let mut role = vec![None; f.num_vars() as usize + 1];
    for (i, &(y, x)) in rounds.iter().enumerate() {
        role[y.index() as usize] = Some((i as u32 + 1, false));
        role[x.index() as usize] = Some((i as u32 + 1, true));
    }

    let mut matrix: Vec<Clause> = Vec::new();
    for t in 0..copies {
        let tuple = decode_tuple(t as u32, n, width);
        let rename = |v: Variable| -> Variable {
            let (i, is_x) = role[v.index() as usize].expect("prefix covers matrix");
            let idx = if is_x {
                x_base[i as usize] + encode_tuple(&tuple[..i as usize], width)
            } else {
                y_base[i as usize] + encode_tuple(&tuple[..i as usize - 1], width)
            };
            Variable::new(idx + 1)
        };
        for c in f.matrix() {
            match Clause::from_raw(c.literals().iter().map(|l| {
                (
                    rename(l.atom.a()),
                    rename(l.atom.b()),
                    l.polarity,
                )
            })) {
                SimplifiedClause::Clause(c) => matrix.push(c),
                // Renaming is injective per copy, so degeneracy is impossible.
                other => unreachable!("copy produced {other:?}"),
            }
        }
    }

    Ok(QEFormula::new(next, prefix, matrix, names)?)
}

fn decode_tuple(mut t: u32, len: u32, width: u32) -> Vec<u32> {
    // Lexicographic rank to tuple over [width], entries are 1-based.
    let mut tuple = vec![1u32; len as usize];
    for slot in (0..len as usize).rev() {
        tuple[slot] = t % width + 1;
        t /= width;
    }
    tuple
}

fn encode_tuple(tuple: &[u32], width: u32) -> u32 {
    let mut t = 0u32;
    for &a in tuple {
        t = t * width + (a - 1);
    }
    t
}

fn copy_name(base: &str, i: u32, tuple: &[u32]) -> String {
    if tuple.is_empty() {
        format!("{base}{i}")
    } else {
        let parts: Vec<String> = tuple.iter().map(|a| a.to_string()).collect();
        format!("{base}{i}^{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_qecnf;
    use crate::solver::{decide, SolverConfig};

    fn parse(text: &str) -> QEFormula {
        parse_qecnf(text).unwrap().formula
    }

    fn profile_of(text: &str) -> Vec<Quantifier> {
        alternation_profile(&parse(text)).blocks
    }

    #[test]
    fn profiles() {
        use Quantifier::*;
        assert_eq!(profile_of("qecnf 3\nforall 1 2\nexists 3\n"), vec![Forall, Exists]);
        assert_eq!(
            profile_of("qecnf 4\nexists 1\nforall 2\nexists 3\nforall 4\n"),
            vec![Exists, Forall, Exists, Forall]
        );
        assert_eq!(profile_of("qecnf 0\n"), Vec::<Quantifier>::new());
        assert_eq!(alternation_profile(&parse("qecnf 0\n")).k(), 0);
    }

    #[test]
    fn pi_rank() {
        let p = alternation_profile(&parse("qecnf 2\nforall 1\nexists 2\n"));
        assert_eq!(p.pi_rank(), 2);
        let p = alternation_profile(&parse("qecnf 1\nexists 1\n"));
        assert_eq!(p.pi_rank(), 2);
    }

    #[test]
    fn padding_examples() {
        use Quantifier::*;
        // forall x -> exists d1 forall x.
        let f = pad_to_sigma_shape(&parse("qecnf 1\nforall 1\n"));
        let qs: Vec<_> = f.prefix().iter().map(|&(q, _)| q).collect();
        assert_eq!(qs, vec![Exists, Forall]);
        assert_eq!(f.num_vars(), 2);

        // exists y exists y' forall x -> exists y forall d1 exists y' forall x.
        let f = pad_to_sigma_shape(&parse("qecnf 3\nexists 1 2\nforall 3\n"));
        let qs: Vec<_> = f.prefix().iter().map(|&(q, _)| q).collect();
        assert_eq!(qs, vec![Exists, Forall, Exists, Forall]);
        let vars: Vec<_> = f.prefix().iter().map(|&(_, v)| v.index()).collect();
        assert_eq!(vars, vec![1, 4, 2, 3]);

        // Already shaped: unchanged.
        let g = parse("qecnf 2\nexists 1\nforall 2\nc 1=2\n");
        assert_eq!(pad_to_sigma_shape(&g), g);

        // Empty prefix gains one full round.
        let f = pad_to_sigma_shape(&parse("qecnf 0\n"));
        let qs: Vec<_> = f.prefix().iter().map(|&(q, _)| q).collect();
        assert_eq!(qs, vec![Exists, Forall]);
    }

    #[test]
    fn padding_preserves_truth_on_small_family() {
        let cfg = SolverConfig::default();
        for f in crate::solver::tests::exhaustive_family(3, 2) {
            let padded = pad_to_sigma_shape(&f);
            assert_eq!(
                decide(&f, &cfg).unwrap().truth,
                decide(&padded, &cfg).unwrap().truth
            );
        }
    }

    #[test]
    fn pi2_expansion_round_one() {
        // exists y1 forall x1 (y1 = x1) expands to
        // forall x1^1 x1^2 exists y1 ((y1=x1^1) and (y1=x1^2)); both false.
        let f = parse("qecnf 2\nexists 1\nforall 2\nc 1=2\n");
        let g = expand_to_pi2(&f, DEFAULT_PI2_CAP, false).unwrap();
        assert_eq!(g.num_vars(), 3);
        assert_eq!(alternation_profile(&g).blocks, vec![Quantifier::Forall, Quantifier::Exists]);
        assert_eq!(g.matrix().len(), 2);
        let cfg = SolverConfig::default();
        assert!(!decide(&f, &cfg).unwrap().truth);
        assert!(!decide(&g, &cfg).unwrap().truth);

        // Empty matrix stays trivially true.
        let f = parse("qecnf 2\nexists 1\nforall 2\n");
        let g = expand_to_pi2(&f, DEFAULT_PI2_CAP, false).unwrap();
        assert!(decide(&g, &cfg).unwrap().truth);
    }

    #[test]
    fn pi2_expansion_copy_count() {
        // n = 2: exactly (2*2)^2 = 16 matrix copies.
        let f = parse("qecnf 4\nexists 1\nforall 2\nexists 3\nforall 4\nc 1=2 3=4\n");
        let g = expand_to_pi2(&f, DEFAULT_PI2_CAP, false).unwrap();
        assert_eq!(g.matrix().len(), 16);
        // Variables: x copies 4 + 16, y copies 1 + 4.
        assert_eq!(g.num_vars(), 25);
        assert_eq!(alternation_profile(&g).blocks, vec![Quantifier::Forall, Quantifier::Exists]);
    }

    #[test]
    fn pi2_cap_and_shape_errors() {
        let f = parse("qecnf 2\nforall 1\nexists 2\nc 1=2\n");
        assert!(matches!(
            expand_to_pi2(&f, 4, false),
            Err(TransformError::ShapeViolation)
        ));
        let shaped = parse(
            "qecnf 10\nexists 1\nforall 2\nexists 3\nforall 4\nexists 5\nforall 6\nexists 7\nforall 8\nexists 9\nforall 10\n",
        );
        assert!(matches!(
            expand_to_pi2(&shaped, 4, false),
            Err(TransformError::CapExceeded { rounds: 5, .. })
        ));
        assert!(expand_to_pi2(&shaped, 4, true).is_ok());
    }
}
