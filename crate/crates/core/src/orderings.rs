//! Row and column orderings, partial sums and simplicity.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::pfarray::{Cell, PFArray};

/// An ordering of the filled cells of every row and every column.
/// `rows[i - 1]` lists the filled cells of row `i` in order, likewise `cols`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ordering {
    pub rows: Vec<Vec<Cell>>,
    pub cols: Vec<Vec<Cell>>,
}

impl Ordering {
    /// Left to right in each row, top to bottom in each column.
    pub fn natural(a: &PFArray) -> Ordering {
        Ordering {
            rows: (1..=a.rows()).map(|i| a.row_cells(i)).collect(),
            cols: (1..=a.cols()).map(|j| a.col_cells(j)).collect(),
        }
    }

    /// Each sequence must be a permutation of its line's filled cells.
    pub fn validate(&self, a: &PFArray) -> Result<()> {
        if self.rows.len() != a.rows() || self.cols.len() != a.cols() {
            return arg("ordering shape does not match the array");
        }
        let same = |seq: &[Cell], mut expect: Vec<Cell>| {
            let mut got = seq.to_vec();
            got.sort();
            expect.sort();
            got == expect
        };
        for (i, seq) in self.rows.iter().enumerate() {
            if !same(seq, a.row_cells(i + 1)) {
                return arg(format!(
                    "row {} ordering is not a permutation of its filled cells",
                    i + 1
                ));
            }
        }
        for (j, seq) in self.cols.iter().enumerate() {
            if !same(seq, a.col_cells(j + 1)) {
                return arg(format!(
                    "column {} ordering is not a permutation of its filled cells",
                    j + 1
                ));
            }
        }
        Ok(())
    }

    /// `ω_r` as a successor map on cells.
    pub fn row_successor(&self) -> BTreeMap<Cell, Cell> {
        successor_map(&self.rows)
    }

    /// `ω_c` as a successor map on cells.
    pub fn col_successor(&self) -> BTreeMap<Cell, Cell> {
        successor_map(&self.cols)
    }

    pub fn row_values(&self, a: &PFArray, i: usize) -> Vec<GroupElement> {
        values_of(a, &self.rows[i - 1])
    }

    pub fn col_values(&self, a: &PFArray, j: usize) -> Vec<GroupElement> {
        values_of(a, &self.cols[j - 1])
    }

    /// Every nonempty row and column sequence is simple.
    pub fn is_simple(&self, a: &PFArray) -> bool {
        self.rows
            .iter()
            .chain(&self.cols)
            .filter(|s| !s.is_empty())
            .all(|s| is_simple(a.spec(), &values_of(a, s)).unwrap_or(false))
    }
}

fn successor_map(lines: &[Vec<Cell>]) -> BTreeMap<Cell, Cell> {
    let mut out = BTreeMap::new();
    for seq in lines {
        for (k, c) in seq.iter().enumerate() {
            out.insert(*c, seq[(k + 1) % seq.len()]);
        }
    }
    out
}

fn values_of(a: &PFArray, seq: &[Cell]) -> Vec<GroupElement> {
    seq.iter()
        .map(|c| a.get(*c).expect("ordering was validated against the array").clone())
        .collect()
}

/// `(s_1, …, s_k)` with `s_i = t_1 + … + t_i`.
pub fn partial_sums(spec: &GroupSpec, seq: &[GroupElement]) -> Result<Vec<GroupElement>> {
    if seq.is_empty() {
        return arg("partial sums of an empty sequence");
    }
    let mut acc = spec.identity();
    seq.iter()
        .map(|x| {
            acc = spec.add(&acc, x)?;
            Ok(acc.clone())
        })
        .collect()
}

/// True iff the partial sums are pairwise distinct.
pub fn is_simple(spec: &GroupSpec, seq: &[GroupElement]) -> Result<bool> {
    let sums = partial_sums(spec, seq)?;
    let distinct: BTreeSet<&GroupElement> = sums.iter().collect();
    Ok(distinct.len() == sums.len())
}

/// Natural orderings of all rows and columns are simple.
pub fn is_globally_simple(a: &PFArray) -> bool {
    Ordering::natural(a).is_simple(a)
}

/// Simplicity test restricted to partial sums at cyclic distance at least 3.
///
/// Only meaningful for a zero-sum sequence with no zero entry and no pair
/// `x, -x`, as found in any row of a relative Heffter array; anything else is
/// refused.
pub fn remark_fastpath(spec: &GroupSpec, seq: &[GroupElement]) -> Result<bool> {
    if seq.is_empty() {
        return arg("empty sequence");
    }
    if !spec.sum(seq)?.is_identity() {
        return Err(Error::Precondition("sequence does not sum to zero".into()));
    }
    let mut seen = BTreeSet::new();
    for x in seq {
        if x.is_identity() || seen.contains(&spec.neg(x)?) || !seen.insert(x.clone()) {
            return Err(Error::Precondition(format!(
                "sequence contains zero, a repeat or an inverse pair at {x}"
            )));
        }
    }
    let s = partial_sums(spec, seq)?;
    let k = s.len();
    for b in 0..k {
        for c in b + 3..k {
            if k - (c - b) >= 3 && s[b] == s[c] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The composition `ω_c ∘ ω_r` on the skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub permutation: BTreeMap<Cell, Cell>,
    pub cycle_lengths: Vec<usize>,
    pub is_compatible: bool,
}

/// Sends a filled cell to the next cell of its row, then to the next cell of
/// that cell's column.
pub fn compose_orderings(a: &PFArray, ord: &Ordering) -> Result<Composition> {
    ord.validate(a)?;
    let wr = ord.row_successor();
    let wc = ord.col_successor();
    let permutation: BTreeMap<Cell, Cell> = wr.iter().map(|(x, y)| (*x, wc[y])).collect();
    let cycle_lengths = cycle_type(&permutation);
    let is_compatible = cycle_lengths.len() == 1;
    Ok(Composition {
        permutation,
        cycle_lengths,
        is_compatible,
    })
}

pub(crate) fn cycle_type<T: Ord + Copy>(perm: &BTreeMap<T, T>) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in perm.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while seen.insert(x) {
            len += 1;
            x = perm[&x];
        }
        out.push(len);
    }
    out
}
