//! Young diagrams: enumeration, conjugation, hooks and contents.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition of `n`, stored as non-increasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Builds a partition from row lengths, rejecting zero or increasing parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "partition {parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition {parts:?} is not non-increasing"
            )));
        }
        let n = parts.iter().sum();
        Ok(Self { parts, n })
    }

    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self {
            parts: Vec::new(),
            n: 0,
        }
    }

    /// The single-row partition `[n]`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n], n }
        }
    }

    /// The single-column partition `[1, …, 1]`.
    pub fn column(n: usize) -> Self {
        Self {
            parts: vec![1; n],
            n,
        }
    }

    /// Builds from parts already known to be valid.
    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        let n = parts.iter().sum();
        Self { parts, n }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of rows, i.e. the length of the first column `c₁`.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Length of the first row `r₁` (0 for the empty partition).
    pub fn first_row(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transposed diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.first_row();
        let mut conj = Vec::with_capacity(cols);
        for j in 0..cols {
            conj.push(self.parts.iter().take_while(|&&p| p > j).count());
        }
        Partition {
            parts: conj,
            n: self.n,
        }
    }

    /// Hook lengths and contents of every cell, in row-major order.
    pub fn cell_stats(&self) -> CellStats {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.n);
        let mut contents = Vec::with_capacity(self.n);
        for (i, &len) in self.parts.iter().enumerate() {
            for j in 0..len {
                let arm = len - j - 1;
                let leg = conj.parts[j] - i - 1;
                hooks.push(arm + leg + 1);
                contents.push(j as i64 - i as i64);
            }
        }
        CellStats { hooks, contents }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Per-cell hook lengths and contents, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStats {
    pub hooks: Vec<usize>,
    /// `j − i` for the cell in row `i`, column `j` (zero-based).
    pub contents: Vec<i64>,
}

/// Free-function form of [`Partition::cell_stats`].
pub fn cell_stats(p: &Partition) -> CellStats {
    p.cell_stats()
}

/// Free-function form of [`Partition::conjugate`].
pub fn conjugate(p: &Partition) -> Partition {
    p.conjugate()
}

/// Streams the partitions of `n` with at most `max_rows` rows and first row at
/// most `max_cols`, in decreasing lexicographic order.
///
/// `n == 0` yields the single empty partition.
pub fn enumerate_partitions(
    n: usize,
    max_rows: Option<usize>,
    max_cols: Option<usize>,
) -> Partitions {
    Partitions::new(n, max_rows, max_cols)
}

/// Iterator returned by [`enumerate_partitions`].
#[derive(Clone, Debug)]
pub struct Partitions {
    n: usize,
    max_rows: usize,
    max_cols: usize,
    current: Option<Vec<usize>>,
}

impl Partitions {
    fn new(n: usize, max_rows: Option<usize>, max_cols: Option<usize>) -> Self {
        let max_rows = max_rows.unwrap_or(n).min(n);
        let max_cols = max_cols.unwrap_or(n).min(n);
        let mut parts = Vec::new();
        let current = if fill_greedy(&mut parts, n, max_cols, max_rows) {
            Some(parts)
        } else {
            None
        };
        Self {
            n,
            max_rows,
            max_cols,
            current,
        }
    }

    /// Lexicographic successor under the row/column caps.
    fn advance(&self, cur: &[usize]) -> Option<Vec<usize>> {
        let mut prefix_sum: usize = cur.iter().sum();
        for i in (0..cur.len()).rev() {
            prefix_sum -= cur[i];
            if cur[i] == 1 {
                continue;
            }
            let v = cur[i] - 1;
            let mut next = cur[..i].to_vec();
            next.push(v);
            let rest = self.n - prefix_sum - v;
            let rows_left = self.max_rows - (i + 1);
            if fill_greedy(&mut next, rest, v, rows_left) {
                return Some(next);
            }
            // A smaller part at position i leaves even less room, so give up here.
        }
        None
    }
}

/// Appends the lexicographically largest completion of `rest` boxes using parts
/// `≤ cap` and at most `rows` rows. Returns false if none exists.
fn fill_greedy(parts: &mut Vec<usize>, rest: usize, cap: usize, rows: usize) -> bool {
    if rest == 0 {
        return true;
    }
    if cap == 0 || rest > cap.saturating_mul(rows) {
        return false;
    }
    let mut rest = rest;
    while rest > 0 {
        let p = rest.min(cap);
        parts.push(p);
        rest -= p;
    }
    true
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        debug_assert!(cur.len() <= self.max_rows || cur.is_empty());
        debug_assert!(cur.first().is_none_or(|&c| c <= self.max_cols));
        Some(Partition::from_sorted_unchecked(cur))
    }
}

/// Number of partitions of `n`, saturating at `u128::MAX`.
pub fn partition_count(n: usize) -> u128 {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] = ways[total].saturating_add(ways[total - part]);
        }
    }
    ways[n]
}
