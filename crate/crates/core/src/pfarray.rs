//! Partially filled arrays over a finite abelian group.
//!
//! Rows and columns are 1-based. Whenever an index is taken modulo the array
//! size the reduced residues are `{1, …, n}`, so `n + 1` wraps to `1` and `0`
//! wraps to `n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::group::{GroupElement, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Reduces `x` into `{1, …, n}`.
pub fn wrap(x: i64, n: usize) -> usize {
    ((x - 1).rem_euclid(n as i64) + 1) as usize
}

/// Parameters of `diag(r, c, s, Δ1, Δ2, ℓ)`: installs `s + iΔ2` at
/// `(r + iΔ1, c + iΔ1)` for `i` in `[0, ℓ - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagSpec {
    pub row: i64,
    pub col: i64,
    pub seed: i64,
    pub index_step: i64,
    pub value_step: i64,
    pub len: usize,
}

impl DiagSpec {
    pub const fn new(row: i64, col: i64, seed: i64, index_step: i64, value_step: i64, len: i64) -> Self {
        DiagSpec {
            row,
            col,
            seed,
            index_step,
            value_step,
            len: len as usize,
        }
    }
}

/// An `m × n` partially filled array. Empty cells are simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFArray {
    m: usize,
    n: usize,
    spec: GroupSpec,
    entries: BTreeMap<Cell, GroupElement>,
}

impl PFArray {
    pub fn new(m: usize, n: usize, spec: GroupSpec) -> Result<Self> {
        if m == 0 || n == 0 {
            return arg("arrays need at least one row and one column");
        }
        Ok(PFArray {
            m,
            n,
            spec,
            entries: BTreeMap::new(),
        })
    }

    /// A skeleton-only array: the listed cells are filled with the identity of
    /// the trivial group.
    pub fn skeleton_only<I>(m: usize, n: usize, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = Cell>,
    {
        let mut a = PFArray::new(m, n, GroupSpec::trivial())?;
        let zero = a.spec.identity();
        for c in cells {
            a.insert(c, zero.clone())?;
        }
        Ok(a)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// `|skel(A)|`
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, cell: Cell) -> Option<&GroupElement> {
        self.entries.get(&cell)
    }

    pub fn is_filled(&self, cell: Cell) -> bool {
        self.entries.contains_key(&cell)
    }

    fn in_range(&self, cell: Cell) -> bool {
        (1..=self.m).contains(&cell.row) && (1..=self.n).contains(&cell.col)
    }

    /// Fills an empty cell; filling an occupied cell is a collision.
    pub fn insert(&mut self, cell: Cell, value: GroupElement) -> Result<()> {
        if !self.in_range(cell) {
            return arg(format!("cell {cell} outside a {}x{} array", self.m, self.n));
        }
        if !self.spec.contains(&value) {
            return Err(Error::Structural(format!(
                "value {value} does not belong to {}",
                self.spec
            )));
        }
        if let Some(old) = self.entries.get(&cell) {
            return Err(Error::Collision {
                cell,
                detail: format!("already holds {old}, refused {value}"),
            });
        }
        self.entries.insert(cell, value);
        Ok(())
    }

    /// Fills an empty cell of a `Z_v` array with the reduction of `x`.
    pub fn insert_int(&mut self, cell: Cell, x: i64) -> Result<()> {
        let e = self.spec.residue(x)?;
        self.insert(cell, e)
    }

    /// Overwrites (or fills) a cell. Intended for building perturbed inputs.
    pub fn replace(&mut self, cell: Cell, value: GroupElement) -> Result<Option<GroupElement>> {
        if !self.in_range(cell) {
            return arg(format!("cell {cell} outside a {}x{} array", self.m, self.n));
        }
        if !self.spec.contains(&value) {
            return Err(Error::Structural(format!(
                "value {value} does not belong to {}",
                self.spec
            )));
        }
        Ok(self.entries.insert(cell, value))
    }

    pub fn remove(&mut self, cell: Cell) -> Option<GroupElement> {
        self.entries.remove(&cell)
    }

    /// Filled cells with their values, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, &GroupElement)> + '_ {
        self.entries.iter().map(|(c, v)| (*c, v))
    }

    /// `E(A)` as a list, row-major.
    pub fn values(&self) -> Vec<GroupElement> {
        self.entries.values().cloned().collect()
    }

    pub fn skeleton(&self) -> BTreeSet<Cell> {
        self.entries.keys().copied().collect()
    }

    /// Filled cells of row `i`, left to right.
    pub fn row_cells(&self, i: usize) -> Vec<Cell> {
        self.entries
            .range(Cell::new(i, 0)..Cell::new(i + 1, 0))
            .map(|(c, _)| *c)
            .collect()
    }

    /// Filled cells of column `j`, top to bottom.
    pub fn col_cells(&self, j: usize) -> Vec<Cell> {
        (1..=self.m)
            .map(|i| Cell::new(i, j))
            .filter(|c| self.entries.contains_key(c))
            .collect()
    }

    pub fn row_values(&self, i: usize) -> Vec<GroupElement> {
        self.row_cells(i).iter().map(|c| self.entries[c].clone()).collect()
    }

    pub fn col_values(&self, j: usize) -> Vec<GroupElement> {
        self.col_cells(j).iter().map(|c| self.entries[c].clone()).collect()
    }

    /// Number of rows / columns holding at least one filled cell.
    pub fn nonempty_lines(&self) -> (usize, usize) {
        let rows: BTreeSet<usize> = self.entries.keys().map(|c| c.row).collect();
        let cols: BTreeSet<usize> = self.entries.keys().map(|c| c.col).collect();
        (rows.len(), cols.len())
    }

    /// Runs `diag(r, c, s, Δ1, Δ2, ℓ)` on a square `Z_v` array.
    pub fn apply_diag(&mut self, d: &DiagSpec) -> Result<()> {
        if !self.is_square() {
            return arg("diag needs a square array");
        }
        if self.spec.as_cyclic().is_none() {
            return arg("diag needs a single cyclic factor");
        }
        if d.len == 0 {
            return arg("diag length must be at least 1");
        }
        let n = self.n;
        for i in 0..d.len as i64 {
            let cell = Cell::new(wrap(d.row + i * d.index_step, n), wrap(d.col + i * d.index_step, n));
            let value = self.spec.residue(d.seed + i * d.value_step)?;
            self.insert(cell, value).map_err(|e| match e {
                Error::Collision { cell, detail } => Error::Collision {
                    cell,
                    detail: format!("{detail} (step {i} of {d:?})"),
                },
                other => other,
            })?;
        }
        Ok(())
    }

    /// `A ⊕ B`: skeleton `skel(A) ∪ skel(B)`, missing coordinates padded with 0.
    pub fn direct_sum(&self, other: &PFArray) -> Result<PFArray> {
        if self.m != other.m || self.n != other.n {
            return arg(format!(
                "direct sum needs equal shapes, got {}x{} and {}x{}",
                self.m, self.n, other.m, other.n
            ));
        }
        let spec = self.spec.direct_sum(&other.spec);
        let zero_a = self.spec.identity();
        let zero_b = other.spec.identity();
        let cells: BTreeSet<Cell> = self.skeleton().union(&other.skeleton()).copied().collect();
        let mut out = PFArray::new(self.m, self.n, spec.clone())?;
        for cell in cells {
            let a = self.get(cell).unwrap_or(&zero_a);
            let b = other.get(cell).unwrap_or(&zero_b);
            let coords: Vec<u64> = a.coords().iter().chain(b.coords()).copied().collect();
            out.insert(cell, spec.from_canonical(coords)?)?;
        }
        Ok(out)
    }

    /// `{|x| : x ∈ E(A)}` using symmetric representatives.
    pub fn support(&self) -> Result<BTreeSet<u64>> {
        if self.spec.as_cyclic().is_none() {
            return arg("support is defined for single cyclic factors only");
        }
        self.entries
            .values()
            .map(|e| self.spec.symmetric_rep(e).map(|x| x.unsigned_abs()))
            .collect()
    }

    /// Cyclic row relabeling: the entry at `(i, j)` moves to `(i + by, j)`.
    /// Diagonal `D_d` becomes `D_{d + by}`.
    pub fn shift_rows(&self, by: i64) -> PFArray {
        let entries = self
            .entries
            .iter()
            .map(|(c, v)| (Cell::new(wrap(c.row as i64 + by, self.m), c.col), v.clone()))
            .collect();
        PFArray {
            m: self.m,
            n: self.n,
            spec: self.spec.clone(),
            entries,
        }
    }

    /// The same skeleton over the trivial group.
    pub fn to_skeleton(&self) -> PFArray {
        let zero = GroupSpec::trivial().identity();
        PFArray {
            m: self.m,
            n: self.n,
            spec: GroupSpec::trivial(),
            entries: self.entries.keys().map(|c| (*c, zero.clone())).collect(),
        }
    }

    /// Keeps the coordinates `factors` of every entry.
    pub fn project(&self, factors: std::ops::Range<usize>) -> Result<PFArray> {
        if factors.is_empty() || factors.end > self.spec.rank() {
            return arg("projection range out of bounds");
        }
        let spec = GroupSpec::new(self.spec.orders()[factors.clone()].to_vec())?;
        let mut out = PFArray::new(self.m, self.n, spec.clone())?;
        for (c, v) in &self.entries {
            out.insert(*c, spec.from_canonical(v.coords()[factors.clone()].to_vec())?)?;
        }
        Ok(out)
    }

    /// Diagonal index `d` with `cell ∈ D_d` (square arrays).
    pub fn diagonal_of(&self, cell: Cell) -> usize {
        wrap(cell.row as i64 - cell.col as i64 + 1, self.n)
    }

    pub fn classify_diagonals(&self) -> Result<DiagonalReport> {
        if !self.is_square() {
            return arg("diagonal structure needs a square array");
        }
        let n = self.n;
        let mut fill = vec![0usize; n + 1];
        for c in self.entries.keys() {
            fill[self.diagonal_of(*c)] += 1;
        }
        let filled: Vec<usize> = (1..=n).filter(|&d| fill[d] == n).collect();
        let covered = filled.len() * n;
        let is_k_diagonal = !filled.is_empty() && covered == self.entries.len();
        let k = filled.len();

        let mut strip_widths = Vec::new();
        if is_k_diagonal && k < n {
            // walk cyclically starting just after a filled diagonal
            let start = filled[0];
            let mut run = 0;
            for step in 1..=n {
                let d = wrap((start + step) as i64, n);
                if fill[d] == n {
                    if run > 0 {
                        strip_widths.push(run);
                    }
                    run = 0;
                } else {
                    run += 1;
                }
            }
        }
        let is_cyclically_k_diagonal = is_k_diagonal && strip_widths.len() <= 1;
        let uniform_width = match strip_widths.split_first() {
            Some((w, rest)) if rest.iter().all(|x| x == w) => Some(*w),
            _ => None,
        };
        Ok(DiagonalReport {
            filled_diagonal_indices: filled,
            is_k_diagonal,
            is_cyclically_k_diagonal,
            strip_widths,
            uniform_width,
        })
    }

    /// For a cyclically k-diagonal array, the first index of its run of
    /// consecutive filled diagonals.
    pub fn cyclic_run_start(&self) -> Result<usize> {
        let report = self.classify_diagonals()?;
        if !report.is_cyclically_k_diagonal {
            return arg("array is not cyclically k-diagonal");
        }
        let n = self.n;
        let filled: BTreeSet<usize> = report.filled_diagonal_indices.iter().copied().collect();
        if filled.len() == n {
            return Ok(1);
        }
        Ok(*filled
            .iter()
            .find(|&&d| !filled.contains(&wrap(d as i64 - 1, n)))
            .expect("a proper cyclic run has a first diagonal"))
    }
}

/// The cells of `D_i` in column order: `(i,1), (i+1,2), …, (i-1,n)`.
pub fn diagonal_cells(n: usize, i: usize) -> Result<Vec<Cell>> {
    if n == 0 || !(1..=n).contains(&i) {
        return arg(format!("diagonal index {i} outside [1,{n}]"));
    }
    Ok((1..=n).map(|j| Cell::new(wrap((i + j) as i64 - 1, n), j)).collect())
}

/// Skeleton-only square array of size `n` whose filled cells are the listed diagonals.
pub fn diagonal_skeleton(n: usize, diagonals: &[usize]) -> Result<PFArray> {
    let mut cells = Vec::with_capacity(n * diagonals.len());
    for &d in diagonals {
        cells.extend(diagonal_cells(n, d)?);
    }
    PFArray::skeleton_only(n, n, cells)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    /// Indices `i` with `D_i` entirely filled, ascending.
    pub filled_diagonal_indices: Vec<usize>,
    /// The skeleton is exactly the union of the filled diagonals.
    pub is_k_diagonal: bool,
    pub is_cyclically_k_diagonal: bool,
    /// Widths of the maximal runs of empty diagonals, in cyclic order.
    pub strip_widths: Vec<usize>,
    pub uniform_width: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zv(n: usize, v: u64) -> PFArray {
        PFArray::new(n, n, GroupSpec::cyclic(v).unwrap()).unwrap()
    }

    fn sym(a: &PFArray, r: usize, c: usize) -> i64 {
        a.spec().symmetric_rep(a.get(Cell::new(r, c)).unwrap()).unwrap()
    }

    #[test]
    fn diag_expands_definition() {
        let mut a = zv(3, 21);
        a.apply_diag(&DiagSpec::new(1, 1, -6, 1, 7, 3)).unwrap();
        assert_eq!((sym(&a, 1, 1), sym(&a, 2, 2), sym(&a, 3, 3)), (-6, 1, 8));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn diag_wraps_indices() {
        let mut a = zv(3, 21);
        a.apply_diag(&DiagSpec::new(1, 2, 9, 2, -7, 2)).unwrap();
        assert_eq!(sym(&a, 1, 2), 9);
        assert_eq!(sym(&a, 3, 1), 2);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn diag_main_diagonal_of_63() {
        let mut a = zv(9, 63);
        a.apply_diag(&DiagSpec::new(1, 1, -27, 1, 7, 9)).unwrap();
        let got: Vec<i64> = (1..=9).map(|i| sym(&a, i, i)).collect();
        assert_eq!(got, vec![-27, -20, -13, -6, 1, 8, 15, 22, 29]);
    }

    #[test]
    fn diag_collision_is_reported() {
        let mut a = zv(3, 21);
        a.apply_diag(&DiagSpec::new(1, 1, 1, 1, 1, 3)).unwrap();
        let err = a.apply_diag(&DiagSpec::new(2, 2, 5, 1, 1, 1)).unwrap_err();
        assert!(matches!(err, Error::Collision { cell, .. } if cell == Cell::new(2, 2)));
    }

    #[test]
    fn diagonal_cells_examples() {
        let c = |r, c| Cell::new(r, c);
        assert_eq!(diagonal_cells(3, 1).unwrap(), vec![c(1, 1), c(2, 2), c(3, 3)]);
        assert_eq!(diagonal_cells(3, 2).unwrap(), vec![c(2, 1), c(3, 2), c(1, 3)]);
        let d = diagonal_cells(11, 11).unwrap();
        assert_eq!(d[0], c(11, 1));
        assert_eq!(d[1], c(1, 2));
        assert_eq!(d[10], c(10, 11));
        assert!(diagonal_cells(3, 0).is_err());
        assert!(diagonal_cells(3, 4).is_err());
    }

    #[test]
    fn diagonals_partition_grid() {
        for n in 1..12 {
            let mut seen = BTreeSet::new();
            for i in 1..=n {
                for c in diagonal_cells(n, i).unwrap() {
                    assert!(seen.insert(c));
                    assert_eq!(zv(n, 5).diagonal_of(c), i);
                }
            }
            assert_eq!(seen.len(), n * n);
        }
    }

    #[test]
    fn classify_full_and_strips() {
        let full = diagonal_skeleton(3, &[1, 2, 3]).unwrap();
        let r = full.classify_diagonals().unwrap();
        assert!(r.is_k_diagonal && r.is_cyclically_k_diagonal);
        assert!(r.strip_widths.is_empty());
        assert_eq!(r.uniform_width, None);

        let a = diagonal_skeleton(9, &[1, 2, 9]).unwrap();
        let r = a.classify_diagonals().unwrap();
        assert_eq!(r.filled_diagonal_indices, vec![1, 2, 9]);
        assert!(r.is_cyclically_k_diagonal);
        assert_eq!(r.strip_widths, vec![6]);

        let b = diagonal_skeleton(10, &[1, 2, 6, 7]).unwrap();
        let r = b.classify_diagonals().unwrap();
        assert!(r.is_k_diagonal && !r.is_cyclically_k_diagonal);
        assert_eq!(r.strip_widths, vec![3, 3]);
        assert_eq!(r.uniform_width, Some(3));

        let mut partial = diagonal_skeleton(4, &[1]).unwrap();
        partial
            .insert(Cell::new(2, 1), GroupSpec::trivial().identity())
            .unwrap();
        let r = partial.classify_diagonals().unwrap();
        assert!(!r.is_k_diagonal);
        assert!(b.cyclic_run_start().is_err());
        assert_eq!(a.cyclic_run_start().unwrap(), 9);
    }

    #[test]
    fn direct_sum_examples() {
        let g1 = GroupSpec::cyclic(7).unwrap();
        let g2 = GroupSpec::cyclic(5).unwrap();
        let mut a = PFArray::new(2, 2, g1.clone()).unwrap();
        a.insert_int(Cell::new(1, 1), 3).unwrap();
        let mut b = PFArray::new(2, 2, g2).unwrap();
        b.insert_int(Cell::new(2, 2), 4).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(Cell::new(1, 1)).unwrap().coords(), &[3, 0]);
        assert_eq!(s.get(Cell::new(2, 2)).unwrap().coords(), &[0, 4]);

        let wrong = PFArray::new(3, 2, g1).unwrap();
        assert!(matches!(a.direct_sum(&wrong), Err(Error::Argument(_))));
    }

    #[test]
    fn support_and_shift() {
        let mut a = zv(3, 21);
        a.apply_diag(&DiagSpec::new(1, 1, -6, 1, 7, 3)).unwrap();
        assert_eq!(a.support().unwrap(), BTreeSet::from([6, 1, 8]));
        assert!(zv(2, 5).support().unwrap().is_empty());

        let s = a.shift_rows(1);
        assert_eq!(s.classify_diagonals().unwrap().filled_diagonal_indices, vec![2]);
        assert_eq!(sym(&s, 2, 1), -6);
    }
}
