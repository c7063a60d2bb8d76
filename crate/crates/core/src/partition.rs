//! Canonical set partitions represented as restricted-growth strings.
//!
//! A partition of `{1..m}` is stored as the sequence `c1..cm` with `c1 = 0`
//! and `c_{i+1} <= 1 + max(c1..ci)`. Two assignments with the same kernel
//! satisfy exactly the same equality clauses, which makes this the canonical
//! semantic object of the crate and a cheap hash key for memoization.

use std::fmt;

use thiserror::Error;

/// Default bound on the arity accepted by [`enumerate_partitions`].
pub const DEFAULT_PARTITION_CAP: u32 = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("sequence is not a restricted-growth string at position {0}")]
    NotCanonical(usize),
    #[error("empty partition")]
    Empty,
    #[error("arity {arity} exceeds cap {cap}")]
    CapExceeded { arity: u32, cap: u32 },
}

/// An equivalence relation on `{1..m}`, canonically encoded.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from a restricted-growth string.
    pub fn from_rgs(classes: Vec<u32>) -> Result<Self, PartitionError> {
        if classes.is_empty() {
            return Err(PartitionError::Empty);
        }
        let mut max = 0u32;
        for (i, &c) in classes.iter().enumerate() {
            let bound = if i == 0 { 0 } else { max + 1 };
            if c > bound {
                return Err(PartitionError::NotCanonical(i));
            }
            max = max.max(c);
        }
        Ok(Partition(classes))
    }

    /// The equality kernel of an assignment: elements get the class index of
    /// the first occurrence of their value.
    pub fn kernel_of(values: &[u64]) -> Self {
        assert!(!values.is_empty(), "kernel of an empty assignment");
        let mut classes = Vec::with_capacity(values.len());
        let mut seen: Vec<u64> = Vec::new();
        for &v in values {
            match seen.iter().position(|&s| s == v) {
                Some(c) => classes.push(c as u32),
                None => {
                    classes.push(seen.len() as u32);
                    seen.push(v);
                }
            }
        }
        Partition(classes)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Class of the `i`-th element, 0-based.
    pub fn class_of(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn classes(&self) -> &[u32] {
        &self.0
    }

    pub fn num_classes(&self) -> u32 {
        self.0.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Whether elements `i` and `j` (0-based) share a class.
    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.0[i] == self.0[j]
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// Iterator over all canonical partitions of `{1..m}` in lexicographic
/// restricted-growth order.
pub struct PartitionIter {
    next: Option<Vec<u32>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        self.next = successor(&cur);
        Some(Partition(cur))
    }
}

fn successor(rgs: &[u32]) -> Option<Vec<u32>> {
    // Rightmost position that can still grow; everything after it resets to 0.
    let mut next = rgs.to_vec();
    for i in (1..next.len()).rev() {
        let max_prefix = next[..i].iter().copied().max().unwrap_or(0);
        if next[i] <= max_prefix {
            next[i] += 1;
            for c in next[i + 1..].iter_mut() {
                *c = 0;
            }
            return Some(next);
        }
    }
    None
}

/// Streams the `Bell(m)` canonical partitions of `{1..m}` under the default
/// arity cap.
pub fn enumerate_partitions(m: u32) -> Result<PartitionIter, PartitionError> {
    enumerate_partitions_capped(m, DEFAULT_PARTITION_CAP)
}

/// Same as [`enumerate_partitions`], with an explicit cap.
pub fn enumerate_partitions_capped(m: u32, cap: u32) -> Result<PartitionIter, PartitionError> {
    if m == 0 {
        return Err(PartitionError::Empty);
    }
    if m > cap {
        return Err(PartitionError::CapExceeded { arity: m, cap });
    }
    Ok(PartitionIter {
        next: Some(vec![0; m as usize]),
    })
}

/// Bell number `B(m)`, the count of partitions of an `m`-element set.
pub fn bell(m: u32) -> u64 {
    // Bell triangle.
    let m = m as usize;
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
