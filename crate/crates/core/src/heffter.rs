//! Verification of relative Heffter arrays, their integer variant, and
//! Archdeacon arrays.
//!
//! Verifiers never stop at the first problem: every violated condition is
//! reported with a stable tag so construction bugs can be located quickly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::pfarray::PFArray;

/// Parameters of an `H_t(m, n; s, k)` over `Z_{2nk+t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeffterParams {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub t: u64,
}

impl HeffterParams {
    /// Checks `t | 2nk`, `nk = ms`, `3 ≤ s ≤ n` and `3 ≤ k ≤ m`.
    pub fn new(m: usize, n: usize, s: usize, k: usize, t: u64) -> Result<Self> {
        let nk = (n * k) as u64;
        if t == 0 || !(2 * nk).is_multiple_of(t) {
            return arg(format!("t = {t} must divide 2nk = {}", 2 * nk));
        }
        if n * k != m * s {
            return arg(format!("nk = {} differs from ms = {}", n * k, m * s));
        }
        if !(3 <= s && s <= n) {
            return arg(format!("need 3 ≤ s ≤ n, got s = {s}, n = {n}"));
        }
        if !(3 <= k && k <= m) {
            return arg(format!("need 3 ≤ k ≤ m, got k = {k}, m = {m}"));
        }
        Ok(HeffterParams { m, n, s, k, t })
    }

    /// Square `H_t(n; k)`.
    pub fn square(n: usize, k: usize, t: u64) -> Result<Self> {
        Self::new(n, n, k, k, t)
    }

    /// `v = 2nk + t`
    pub fn v(&self) -> u64 {
        2 * (self.n * self.k) as u64 + self.t
    }

    pub fn group(&self) -> GroupSpec {
        GroupSpec::cyclic(self.v()).expect("v is positive")
    }

    /// `[1, ⌊v/2⌋]` minus the multiples of `v/t`.
    pub fn expected_support(&self) -> BTreeSet<u64> {
        let v = self.v();
        let step = v / self.t;
        (1..=v / 2).filter(|x| x % step != 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    RowCount,
    ColCount,
    Coverage,
    RowSum,
    ColSum,
    SubgroupHit,
    Duplicate,
    IntegerSum,
    Support,
    InversePair,
    ZeroEntry,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variants serialize");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        VerificationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn kinds(&self) -> BTreeSet<ViolationKind> {
        self.violations.iter().map(|v| v.kind).collect()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// Concatenates two reports.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.violations.extend(other.violations);
        self.valid = self.violations.is_empty();
        self
    }
}

struct Findings(Vec<Violation>);

impl Findings {
    fn push(&mut self, kind: ViolationKind, detail: impl Into<String>) {
        self.0.push(Violation {
            kind,
            detail: detail.into(),
        });
    }
}

fn check_shape(a: &PFArray, p: &HeffterParams) -> Result<()> {
    if a.rows() != p.m || a.cols() != p.n {
        return arg(format!(
            "array is {}x{}, parameters say {}x{}",
            a.rows(),
            a.cols(),
            p.m,
            p.n
        ));
    }
    if a.spec().as_cyclic() != Some(p.v()) {
        return arg(format!("array lives in {}, parameters need Z_{}", a.spec(), p.v()));
    }
    Ok(())
}

fn duplicates(a: &PFArray, out: &mut Findings) {
    let mut seen: BTreeMap<&GroupElement, usize> = BTreeMap::new();
    for (_, v) in a.entries() {
        *seen.entry(v).or_default() += 1;
    }
    for (v, count) in seen {
        if count > 1 {
            out.push(ViolationKind::Duplicate, format!("{v} appears {count} times"));
        }
    }
}

fn line_sums(a: &PFArray, skip_empty: bool, out: &mut Findings) {
    let spec = a.spec();
    for i in 1..=a.rows() {
        let vals = a.row_values(i);
        if skip_empty && vals.is_empty() {
            continue;
        }
        let s = spec.sum(&vals).expect("entries belong to the group");
        if !s.is_identity() {
            out.push(ViolationKind::RowSum, format!("row {i} sums to {s}"));
        }
    }
    for j in 1..=a.cols() {
        let vals = a.col_values(j);
        if skip_empty && vals.is_empty() {
            continue;
        }
        let s = spec.sum(&vals).expect("entries belong to the group");
        if !s.is_identity() {
            out.push(ViolationKind::ColSum, format!("column {j} sums to {s}"));
        }
    }
}

/// Checks the three defining conditions of `H_t(m, n; s, k)` over `Z_{2nk+t}`.
pub fn verify_relative_heffter(a: &PFArray, p: &HeffterParams) -> Result<VerificationReport> {
    check_shape(a, p)?;
    let v = p.v();
    let step = v / p.t;
    let mut out = Findings(Vec::new());

    for i in 1..=a.rows() {
        let c = a.row_cells(i).len();
        if c != p.s {
            out.push(
                ViolationKind::RowCount,
                format!("row {i} has {c} filled cells, expected {}", p.s),
            );
        }
    }
    for j in 1..=a.cols() {
        let c = a.col_cells(j).len();
        if c != p.k {
            out.push(
                ViolationKind::ColCount,
                format!("column {j} has {c} filled cells, expected {}", p.k),
            );
        }
    }

    let nk = p.n * p.k;
    if a.len() != nk {
        out.push(
            ViolationKind::Coverage,
            format!("{} entries, expected nk = {nk}", a.len()),
        );
    }
    duplicates(a, &mut out);

    let mut present = vec![false; v as usize];
    for (cell, e) in a.entries() {
        let x = e.coords()[0];
        if x % step == 0 {
            out.push(ViolationKind::SubgroupHit, format!("{cell} holds {x}, which lies in J"));
        }
        present[x as usize] = true;
    }
    for x in 1..=v / 2 {
        if x % step == 0 {
            continue;
        }
        let y = v - x;
        match (present[x as usize], present[y as usize]) {
            (false, false) => out.push(ViolationKind::Coverage, format!("neither {x} nor -{x} appears")),
            (true, true) if x != y => out.push(ViolationKind::Coverage, format!("both {x} and -{x} appear")),
            _ => {}
        }
    }

    line_sums(a, false, &mut out);
    Ok(VerificationReport::from_violations(out.0))
}

/// Relative Heffter conditions plus zero sums over the integers, using
/// symmetric representatives.
pub fn verify_integer(a: &PFArray, p: &HeffterParams) -> Result<VerificationReport> {
    let base = verify_relative_heffter(a, p)?;
    let spec = a.spec();
    let mut out = Findings(Vec::new());
    let rep = |cells: Vec<crate::pfarray::Cell>| -> i64 {
        cells
            .iter()
            .map(|c| {
                spec.symmetric_rep(a.get(*c).expect("listed cells are filled"))
                    .expect("cyclic")
            })
            .sum()
    };
    for i in 1..=a.rows() {
        let s = rep(a.row_cells(i));
        if s != 0 {
            out.push(ViolationKind::IntegerSum, format!("row {i} sums to {s} in Z"));
        }
    }
    for j in 1..=a.cols() {
        let s = rep(a.col_cells(j));
        if s != 0 {
            out.push(ViolationKind::IntegerSum, format!("column {j} sums to {s} in Z"));
        }
    }
    let support = a.support()?;
    let expected = p.expected_support();
    if support != expected {
        let extra: Vec<_> = support.difference(&expected).take(5).collect();
        let missing: Vec<_> = expected.difference(&support).take(5).collect();
        out.push(
            ViolationKind::Support,
            format!("support differs: unexpected {extra:?}, missing {missing:?}"),
        );
    }
    Ok(base.merge(VerificationReport::from_violations(out.0)))
}

/// Distinct entries, no entry together with its negative, zero row and
/// column sums. Empty rows and columns are exempt from the sum condition.
///
/// A zero entry is rejected with its own tag since `0 = -0`.
pub fn verify_archdeacon(a: &PFArray) -> VerificationReport {
    let spec = a.spec();
    let mut out = Findings(Vec::new());
    duplicates(a, &mut out);
    let values: BTreeSet<&GroupElement> = a.entries().map(|(_, v)| v).collect();
    for (cell, v) in a.entries() {
        if v.is_identity() {
            out.push(ViolationKind::ZeroEntry, format!("{cell} holds the identity"));
            continue;
        }
        let neg = spec.neg_unchecked(v);
        if neg == *v {
            out.push(ViolationKind::InversePair, format!("{cell} holds the self-inverse {v}"));
        } else if values.contains(&neg) && v < &neg {
            out.push(
                ViolationKind::InversePair,
                format!("both {v} and its negative {neg} appear"),
            );
        }
    }
    line_sums(a, true, &mut out);
    VerificationReport::from_violations(out.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl ClauseStatus {
    fn of(applies: bool, holds: bool) -> Self {
        match (applies, holds) {
            (false, _) => ClauseStatus::NotApplicable,
            (true, true) => ClauseStatus::Pass,
            (true, false) => ClauseStatus::Fail,
        }
    }
}

/// The three necessary conditions for an integer `H_t(n; k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryConditions {
    /// `t | nk` ⇒ `nk ≡ 0 (mod 4)` or `nk ≡ -t ≡ ±1 (mod 4)`.
    pub divides_nk: ClauseStatus,
    /// `t = 2nk` ⇒ `k` even.
    pub full_order: ClauseStatus,
    /// `t ≠ 2nk`, `t ∤ nk` ⇒ `t + 2nk ≡ 0 (mod 8)`.
    pub otherwise: ClauseStatus,
}

impl NecessaryConditions {
    pub fn passes(&self) -> bool {
        [self.divides_nk, self.full_order, self.otherwise]
            .iter()
            .all(|c| *c != ClauseStatus::Fail)
    }
}

/// Conditions are necessary only: `(n, k, t) = (4, 3, 8)` passes although no
/// integer `H_8(4; 3)` exists.
pub fn check_necessary_conditions(n: usize, k: usize, t: u64) -> Result<NecessaryConditions> {
    if !(3 <= k && k <= n) {
        return arg(format!("need n ≥ k ≥ 3, got n = {n}, k = {k}"));
    }
    let nk = (n * k) as u64;
    if t == 0 || !(2 * nk).is_multiple_of(t) {
        return arg(format!("t = {t} must divide 2nk = {}", 2 * nk));
    }
    let r = nk % 4;
    let neg_t = (4 - t % 4) % 4;
    let c1 = r == 0 || (r == neg_t && (r == 1 || r == 3));
    let divides = nk.is_multiple_of(t);
    let full = t == 2 * nk;
    Ok(NecessaryConditions {
        divides_nk: ClauseStatus::of(divides, c1),
        full_order: ClauseStatus::of(full, k.is_multiple_of(2)),
        otherwise: ClauseStatus::of(!divides && !full, (t + 2 * nk).is_multiple_of(8)),
    })
}

/// Necessary condition for compatible simple orderings of an `H_t(m, n; s, k)`:
/// `m, n, s, k` all odd; or `m` odd and `n, k` even; or `n` odd and `m, t` even.
pub fn check_compatibility_parity(m: usize, n: usize, s: usize, k: usize, t: u64) -> bool {
    let odd = |x: usize| x % 2 == 1;
    (odd(m) && odd(n) && odd(s) && odd(k))
        || (odd(m) && !odd(n) && !odd(k))
        || (odd(n) && !odd(m) && t.is_multiple_of(2))
}

/// `|skel(A)| ≡ m + n - 1 (mod 2)`, for arrays without empty rows or columns.
pub fn skeleton_parity(a: &PFArray) -> Result<bool> {
    let (r, c) = a.nonempty_lines();
    if r != a.rows() || c != a.cols() {
        return Err(Error::Precondition(
            "skeleton parity applies only to arrays without empty rows or columns".into(),
        ));
    }
    Ok(a.len() % 2 == (a.rows() + a.cols() - 1) % 2)
}
