//! The Crazy Knight's Tour: orientations, the tour map, exhaustive search,
//! lifting of solutions to larger diagonal skeletons and the closed-form
//! orientation for the 9-diagonal family.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::orderings::Ordering;
use crate::pfarray::{diagonal_skeleton, Cell, PFArray};

/// Row directions `R` and column directions `C`; `true` means `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    pub rows: Vec<bool>,
    pub cols: Vec<bool>,
}

impl Orientation {
    pub fn all_positive(m: usize, n: usize) -> Self {
        Orientation {
            rows: vec![true; m],
            cols: vec![true; n],
        }
    }

    pub fn from_signs(rows: &[i8], cols: &[i8]) -> Result<Self> {
        let conv = |xs: &[i8]| {
            xs.iter()
                .map(|&x| match x {
                    1 => Ok(true),
                    -1 => Ok(false),
                    _ => arg(format!("orientation entries are ±1, got {x}")),
                })
                .collect::<Result<Vec<bool>>>()
        };
        Ok(Orientation {
            rows: conv(rows)?,
            cols: conv(cols)?,
        })
    }

    pub fn row_signs(&self) -> Vec<i8> {
        self.rows.iter().map(|&p| if p { 1 } else { -1 }).collect()
    }

    pub fn col_signs(&self) -> Vec<i8> {
        self.cols.iter().map(|&p| if p { 1 } else { -1 }).collect()
    }

    /// Negates every direction.
    pub fn reversed(&self) -> Self {
        Orientation {
            rows: self.rows.iter().map(|p| !p).collect(),
            cols: self.cols.iter().map(|p| !p).collect(),
        }
    }

    pub fn rows_string(&self) -> String {
        signs_to_string(&self.rows)
    }

    pub fn cols_string(&self) -> String {
        signs_to_string(&self.cols)
    }

    pub fn parse_parts(rows: &str, cols: &str) -> Result<Self> {
        Ok(Orientation {
            rows: parse_signs(rows)?,
            cols: parse_signs(cols)?,
        })
    }

    fn check_shape(&self, a: &PFArray) -> Result<()> {
        if self.rows.len() != a.rows() || self.cols.len() != a.cols() {
            return arg(format!(
                "orientation has {}+{} entries, array is {}x{}",
                self.rows.len(),
                self.cols.len(),
                a.rows(),
                a.cols()
            ));
        }
        Ok(())
    }
}

fn signs_to_string(xs: &[bool]) -> String {
    xs.iter().map(|&p| if p { '+' } else { '-' }).collect()
}

fn parse_signs(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|ch| match ch {
            '+' => Ok(true),
            '-' => Ok(false),
            _ => Err(Error::Parse(format!("orientation character {ch:?} is not + or -"))),
        })
        .collect()
}

/// `ROWS/COLS`, e.g. `+++/--+`.
impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rows_string(), self.cols_string())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse("orientation must look like ROWS/COLS".into()))?;
        Orientation::parse_parts(r, c)
    }
}

#[derive(Serialize, Deserialize)]
struct OrientationJson {
    rows: String,
    cols: String,
}

impl Serialize for Orientation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OrientationJson {
            rows: self.rows_string(),
            cols: self.cols_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Orientation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OrientationJson::deserialize(d)?;
        Orientation::parse_parts(&raw.rows, &raw.cols).map_err(serde::de::Error::custom)
    }
}

/// Row `i` left to right when `r_i = +1`, otherwise right to left; columns
/// likewise top to bottom.
pub fn orientation_to_orderings(a: &PFArray, o: &Orientation) -> Result<Ordering> {
    o.check_shape(a)?;
    let mut ord = Ordering::natural(a);
    for (seq, &p) in ord.rows.iter_mut().zip(&o.rows) {
        if !p {
            seq.reverse();
        }
    }
    for (seq, &p) in ord.cols.iter_mut().zip(&o.cols) {
        if !p {
            seq.reverse();
        }
    }
    Ok(ord)
}

/// Dense successor tables over the skeleton, one per direction.
struct Tables {
    cells: Vec<Cell>,
    row_next: [Vec<usize>; 2],
    col_next: [Vec<usize>; 2],
}

impl Tables {
    fn new(a: &PFArray) -> Self {
        let cells: Vec<Cell> = a.skeleton().into_iter().collect();
        let index = |c: &Cell| cells.binary_search(c).expect("cell of the skeleton");
        let len = cells.len();
        let mut row_next = [vec![0; len], vec![0; len]];
        let mut col_next = [vec![0; len], vec![0; len]];
        let link = |tables: &mut [Vec<usize>; 2], line: Vec<Cell>| {
            let ids: Vec<usize> = line.iter().map(index).collect();
            let k = ids.len();
            for (p, &x) in ids.iter().enumerate() {
                tables[1][x] = ids[(p + 1) % k];
                tables[0][x] = ids[(p + k - 1) % k];
            }
        };
        for i in 1..=a.rows() {
            link(&mut row_next, a.row_cells(i));
        }
        for j in 1..=a.cols() {
            link(&mut col_next, a.col_cells(j));
        }
        Tables {
            cells,
            row_next,
            col_next,
        }
    }

    #[inline]
    fn step(&self, o: &Orientation, x: usize) -> usize {
        let c = self.cells[x];
        let y = self.row_next[o.rows[c.row - 1] as usize][x];
        let d = self.cells[y];
        self.col_next[o.cols[d.col - 1] as usize][y]
    }

    fn orbit_len(&self, o: &Orientation) -> usize {
        let mut x = self.step(o, 0);
        let mut len = 1;
        while x != 0 {
            x = self.step(o, x);
            len += 1;
        }
        len
    }

    fn solves(&self, o: &Orientation) -> bool {
        self.orbit_len(o) == self.cells.len()
    }
}

/// One knight move: to the next filled cell of the row in direction `r_i`,
/// then to the next filled cell of that column in direction `c_j`.
pub fn knight_step(a: &PFArray, o: &Orientation, cell: Cell) -> Result<Cell> {
    o.check_shape(a)?;
    if !a.is_filled(cell) {
        return arg(format!("cell {cell} is empty"));
    }
    let next_in = |line: Vec<Cell>, at: Cell, forward: bool| {
        let k = line.len();
        let p = line.iter().position(|c| *c == at).expect("cell lies on its line");
        if forward {
            line[(p + 1) % k]
        } else {
            line[(p + k - 1) % k]
        }
    };
    let mid = next_in(a.row_cells(cell.row), cell, o.rows[cell.row - 1]);
    Ok(next_in(a.col_cells(mid.col), mid, o.cols[mid.col - 1]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tour {
    pub orbit: Vec<Cell>,
    pub is_solution: bool,
}

/// Iterates [`knight_step`] from `start` until it returns.
pub fn knight_tour(a: &PFArray, o: &Orientation, start: Cell) -> Result<Tour> {
    o.check_shape(a)?;
    if a.is_empty() {
        return arg("empty array");
    }
    if !a.is_filled(start) {
        return arg(format!("start cell {start} is empty"));
    }
    let t = Tables::new(a);
    let s = t.cells.binary_search(&start).expect("filled");
    let mut orbit = vec![start];
    let mut x = t.step(o, s);
    while x != s {
        orbit.push(t.cells[x]);
        x = t.step(o, x);
    }
    let is_solution = orbit.len() == a.len();
    Ok(Tour { orbit, is_solution })
}

/// True iff `o` is a solution of `P(A)`.
pub fn is_solution(a: &PFArray, o: &Orientation) -> Result<bool> {
    o.check_shape(a)?;
    if a.is_empty() {
        return arg("empty array");
    }
    Ok(Tables::new(a).solves(o))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Skip the search when `|skel(A)| ≢ m + n - 1 (mod 2)` on arrays with no
    /// empty row or column.
    pub parity_filter: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            parity_filter: true,
            jobs: None,
        }
    }
}

const MAX_SEARCH_BITS: usize = 62;

/// Lexicographically least solution with `r_1 = +1`, ordering `+` before `-`
/// and reading `r_1, …, r_m, c_1, …, c_n`.
pub fn knight_search(a: &PFArray) -> Result<Option<Orientation>> {
    knight_search_with(a, SearchOptions::default())
}

pub fn knight_search_with(a: &PFArray, opts: SearchOptions) -> Result<Option<Orientation>> {
    if a.is_empty() {
        return arg("empty array");
    }
    let (m, n) = (a.rows(), a.cols());
    if opts.parity_filter && a.nonempty_lines() == (m, n) && (a.len() + m + n - 1) % 2 == 1 {
        return Ok(None);
    }
    let bits = m + n - 1;
    let decode = move |x: u64| {
        let bit = |p: usize| (x >> (bits - 1 - p)) & 1 == 0;
        Orientation {
            rows: std::iter::once(true).chain((0..m - 1).map(bit)).collect(),
            cols: (m - 1..bits).map(bit).collect(),
        }
    };
    run_search(a, bits, opts, decode)
}

/// Search restricted to `R = (1, …, 1)` and `C = (c_1, …, c_p, 1, …, 1)`,
/// the input shape of [`lift_solution`]. Least prefix first.
pub fn knight_search_lift_shape(a: &PFArray, prefix: usize, opts: SearchOptions) -> Result<Option<Orientation>> {
    if a.is_empty() {
        return arg("empty array");
    }
    let (m, n) = (a.rows(), a.cols());
    if prefix > n {
        return arg(format!("prefix {prefix} longer than {n} columns"));
    }
    let decode = move |x: u64| {
        let mut cols = vec![true; n];
        for (p, slot) in cols.iter_mut().enumerate().take(prefix) {
            *slot = (x >> (prefix - 1 - p)) & 1 == 0;
        }
        Orientation {
            rows: vec![true; m],
            cols,
        }
    };
    run_search(a, prefix, opts, decode)
}

fn run_search<F>(a: &PFArray, bits: usize, opts: SearchOptions, decode: F) -> Result<Option<Orientation>>
where
    F: Fn(u64) -> Orientation + Sync,
{
    if bits > MAX_SEARCH_BITS {
        return arg(format!("search space 2^{bits} is too large"));
    }
    let tables = Tables::new(a);
    let find = || {
        (0..1u64 << bits)
            .into_par_iter()
            .map(&decode)
            .find_first(|o| tables.solves(o))
    };
    match opts.jobs {
        None => Ok(find()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Argument(e.to_string()))?;
            Ok(pool.install(find))
        }
    }
}

/// Diagonal indices `ℓ_1 < … < ℓ_k` and the lifting step
/// `M = lcm(ℓ_2 - ℓ_1, …, ℓ_k - ℓ_{k-1}, ℓ_k - ℓ_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSpec {
    pub diagonals: Vec<usize>,
    pub m: usize,
}

impl LiftSpec {
    pub fn new(diagonals: Vec<usize>) -> Result<Self> {
        if diagonals.len() < 2 {
            return arg("lifting needs at least two diagonals");
        }
        if diagonals[0] == 0 || diagonals.windows(2).any(|w| w[0] >= w[1]) {
            return arg("diagonal indices must be positive and strictly increasing");
        }
        let last = *diagonals.last().unwrap();
        let m = diagonals
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain([last - diagonals[0]])
            .fold(1, lcm);
        Ok(LiftSpec { diagonals, m })
    }

    /// Number of free leading column signs, `n - ℓ_k + 1`.
    pub fn prefix_len(&self, n: usize) -> usize {
        n + 1 - self.diagonals.last().unwrap()
    }

    pub fn skeleton(&self, n: usize) -> Result<PFArray> {
        if *self.diagonals.last().unwrap() >= n {
            return arg(format!("largest diagonal index must be below n = {n}"));
        }
        diagonal_skeleton(n, &self.diagonals)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Lifts a solution of `P(A_n)` of the shape `R = (1, …, 1)`,
/// `C = (c_1, …, c_{n-ℓ_k+1}, 1, …, 1)` to a solution of `P(A_{n+M})` with the
/// same prefix. Both the input and the output are checked by running the tour.
pub fn lift_solution(spec: &LiftSpec, n: usize, o: &Orientation) -> Result<Orientation> {
    let a = spec.skeleton(n)?;
    o.check_shape(&a)?;
    let p = spec.prefix_len(n);
    if !o.rows.iter().all(|&x| x) || !o.cols[p..].iter().all(|&x| x) {
        return arg(format!(
            "solution must have R all +1 and C equal to +1 after position {p}"
        ));
    }
    if !Tables::new(&a).solves(o) {
        return arg("input orientation is not a solution");
    }
    let big = n + spec.m;
    let mut cols = vec![true; big];
    cols[..p].copy_from_slice(&o.cols[..p]);
    let lifted = Orientation {
        rows: vec![true; big],
        cols,
    };
    let b = spec.skeleton(big)?;
    if !Tables::new(&b).solves(&lifted) {
        return Err(Error::Certification {
            message: format!("lifted orientation does not solve P(A_{big})"),
            witness: Some(lifted.to_string()),
        });
    }
    Ok(lifted)
}

fn lemma_4_10_check(n: usize) -> Result<usize> {
    if n < 21 || n % 14 != 7 {
        return arg(format!("need n ≡ 7 (mod 14) and n ≥ 21, got {n}"));
    }
    Ok((n - 7) / 2)
}

/// Filled diagonals `D_1, …, D_7, D_{r+7}, D_{r+8}` with `r = (n - 7)/2`.
pub fn lemma_4_10_diagonals(n: usize) -> Result<Vec<usize>> {
    let r = lemma_4_10_check(n)?;
    Ok((1..=7).chain([r + 7, r + 8]).collect())
}

pub fn lemma_4_10_skeleton(n: usize) -> Result<PFArray> {
    diagonal_skeleton(n, &lemma_4_10_diagonals(n)?)
}

/// `R = (1, …, 1)`, `C = (-1 ×8, 1, …, 1)`.
pub fn lemma_4_10_orientation(n: usize) -> Result<Orientation> {
    lemma_4_10_check(n)?;
    let mut cols = vec![true; n];
    cols[..8].fill(false);
    Ok(Orientation {
        rows: vec![true; n],
        cols,
    })
}
