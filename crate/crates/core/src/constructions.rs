//! Direct constructions of integer relative Heffter arrays, the four-cell
//! gadget `B_{m,n,d}`, Archdeacon composites and diagonal skeleton families.
//!
//! Every square construction is a list of `diag` procedures followed by a
//! handful of ad hoc cells. Ad hoc cells are installed last and must land on
//! empty cells, so a mistyped procedure parameter surfaces as a collision.

use crate::error::{arg, Error, Result};
use crate::group::GroupSpec;
use crate::heffter::verify_archdeacon;
use crate::orderings::is_globally_simple;
use crate::pfarray::{diagonal_skeleton, Cell, DiagSpec, PFArray};

fn assemble(n: usize, v: u64, procedures: &[DiagSpec], ad_hoc: &[(usize, usize, i64)]) -> Result<PFArray> {
    let mut a = PFArray::new(n, n, GroupSpec::cyclic(v)?)?;
    for d in procedures {
        a.apply_diag(d)?;
    }
    for &(r, c, x) in ad_hoc {
        a.insert_int(Cell::new(r, c), x)?;
    }
    Ok(a)
}

fn require_odd(n: usize) -> Result<i64> {
    if n < 3 || n.is_multiple_of(2) {
        return arg(format!("n must be odd and at least 3, got {n}"));
    }
    Ok(n as i64)
}

fn require_3_mod_4(n: usize, min: usize) -> Result<i64> {
    if n < min || n % 4 != 3 {
        return arg(format!("n must satisfy n ≡ 3 (mod 4) and n ≥ {min}, got {n}"));
    }
    Ok(n as i64)
}

/// Integer cyclically 3-diagonal `H_n(n; 3)` over `Z_{7n}`, `n` odd.
/// Filled diagonals are `D_n, D_1, D_2`.
pub fn build_h_n_3(n: usize) -> Result<PFArray> {
    let k = require_odd(n)?;
    let procs = [
        DiagSpec::new(1, 1, -(7 * k - 9) / 2, 1, 7, k),
        DiagSpec::new(1, 2, (7 * k - 3) / 2, 2, -7, (k + 1) / 2),
        DiagSpec::new(2, 3, -5, 2, -7, (k - 1) / 2),
        DiagSpec::new(2, 1, (7 * k - 13) / 2, 2, -7, (k + 1) / 2),
        DiagSpec::new(3, 2, -10, 2, -7, (k - 1) / 2),
    ];
    assemble(n, 7 * n as u64, &procs, &[])
}

/// Integer cyclically 3-diagonal `H_{2n}(n; 3)` over `Z_{8n}`, `n` odd.
pub fn build_h_2n_3(n: usize) -> Result<PFArray> {
    let k = require_odd(n)?;
    let procs = [
        DiagSpec::new(1, 1, -(4 * k - 5), 1, 8, k),
        DiagSpec::new(1, 2, 4 * k - 2, 2, -8, (k + 1) / 2),
        DiagSpec::new(2, 3, -6, 2, -8, (k - 1) / 2),
        DiagSpec::new(2, 1, 4 * k - 7, 2, -8, (k + 1) / 2),
        DiagSpec::new(3, 2, -11, 2, -8, (k - 1) / 2),
    ];
    assemble(n, 8 * n as u64, &procs, &[])
}

/// Integer cyclically 7-diagonal globally simple `H_7(n; 7)` over
/// `Z_{14n+7}`, `n ≡ 3 (mod 4)`, `n ≥ 7`.
pub fn build_h7(n: usize) -> Result<PFArray> {
    let n = require_3_mod_4(n, 7)?;
    let procs = [
        DiagSpec::new(3, 3, -(n + 1) / 2, 2, -1, (n - 1) / 2),
        DiagSpec::new(4, 4, 1, 2, 1, (n - 3) / 2),
        DiagSpec::new(n - 2, n - 1, -(5 * n + 3), 2, -1, n),
        DiagSpec::new(2, 1, -(4 * n + 3), 2, -1, n),
        DiagSpec::new(1, 3, (7 * n + 3) / 4, 4, 1, (n + 1) / 4),
        DiagSpec::new(2, 4, (3 * n + 1) / 2, 4, -1, (n + 1) / 4),
        DiagSpec::new(3, 5, (11 * n + 7) / 4, 4, 1, (n + 1) / 4),
        DiagSpec::new(4, 6, (5 * n + 1) / 2, 4, -1, (n - 3) / 4),
        DiagSpec::new(3, 1, -(9 * n + 5) / 4, 4, 1, (n + 1) / 4),
        DiagSpec::new(4, 2, -(5 * n + 3) / 2, 4, -1, (n + 1) / 4),
        DiagSpec::new(5, 3, -(5 * n + 1) / 4, 4, 1, (n + 1) / 4),
        DiagSpec::new(6, 4, -(3 * n + 3) / 2, 4, -1, (n - 3) / 4),
        DiagSpec::new(n - 2, 1, 6 * n + 4, 2, 1, n),
        DiagSpec::new(2, n - 1, 3 * n + 2, 2, 1, n),
    ];
    let ad_hoc = [(1, 1, n), (2, 2, -(n - 1) / 2)];
    assemble(n as usize, (14 * n + 7) as u64, &procs, &ad_hoc)
}

/// Integer 9-diagonal globally simple `H_9(n; 9)` with width `(n-9)/2` over
/// `Z_{18n+9}`, `n ≡ 3 (mod 4)`, `n ≥ 11`.
pub fn build_h9(n: usize) -> Result<PFArray> {
    let n = require_3_mod_4(n, 11)?;
    let h1 = (n + 1) / 2;
    let h3 = (n + 3) / 2;
    let h5 = (n + 5) / 2;
    let procs = [
        DiagSpec::new(3, 1, 5 * n + 3, 1, 1, n),
        DiagSpec::new(4, 1, -(6 * n + 4), 1, -1, n),
        DiagSpec::new(3, 6, -(7 * n + 4), 1, -1, n),
        DiagSpec::new(4, 6, 8 * n + 5, 1, 1, n),
        DiagSpec::new(1, h3, -(2 * n), 1, 2, (n - 1) / 2),
        DiagSpec::new(h3, 1, 2 * n + 2, 1, 2, (n - 1) / 2),
        DiagSpec::new(2, 2, -(n - 2), 1, 1, (n - 3) / 2),
        DiagSpec::new(h3, 2, -(2 * n + 3), 1, -2, (n - 3) / 2),
        DiagSpec::new(2, h3, 2 * n - 1, 1, -2, (n - 3) / 2),
        DiagSpec::new(h3, h3, (n - 3) / 2, 1, -1, (n - 5) / 2),
        DiagSpec::new(2, 1, -(3 * n + 4), 2, -1, (n + 1) / 4),
        DiagSpec::new(1, 2, 5 * n, 2, -1, (n + 1) / 4),
        DiagSpec::new(3, 2, -(4 * n + 3), 2, -1, (n - 3) / 4),
        DiagSpec::new(2, 3, 4 * n + 1, 2, -1, (n - 3) / 4),
        DiagSpec::new(h1, h3, (17 * n + 9) / 4, 2, 1, (n - 3) / 4),
        DiagSpec::new(h3, h1, -(15 * n + 7) / 4, 2, 1, (n - 3) / 4),
        DiagSpec::new(h3, h5, (13 * n + 17) / 4, 2, 1, (n - 3) / 4),
        DiagSpec::new(h5, h3, -(19 * n - 1) / 4, 2, 1, (n - 3) / 4),
    ];
    let nu = n as usize;
    let m1 = h1 as usize;
    let ad_hoc = [
        (1, 1, n - 1),
        (1, m1, n + 2),
        (1, nu, -(5 * n + 1)),
        (m1, 1, -(3 * n)),
        (m1, m1, n),
        (m1, nu, n + 1),
        (nu - 1, nu - 1, -(n - 1) / 2),
        (nu - 1, nu, 5 * n + 2),
        (nu, 1, 3 * n + 3),
        (nu, m1, -(3 * n + 1)),
        (nu, nu - 1, -(3 * n + 2)),
        (nu, nu, 1),
    ];
    assemble(nu, (18 * n + 9) as u64, &procs, &ad_hoc)
}

/// `B_{m,n,d}(i1, i2; j1, j2)` over `Z_d`: `+1` at `(i1,j1)`, `(i2,j2)` and
/// `-1` at `(i2,j1)`, `(i1,j2)`.
pub fn build_b(m: usize, n: usize, d: u64, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<PFArray> {
    if d <= 2 {
        return arg(format!("d must exceed 2 so that 1 ≠ -1, got {d}"));
    }
    if i1 == i2 || j1 == j2 {
        return arg("B needs two distinct rows and two distinct columns");
    }
    if ![i1, i2].iter().all(|i| (1..=m).contains(i)) || ![j1, j2].iter().all(|j| (1..=n).contains(j)) {
        return arg("B cell indices out of range");
    }
    let mut b = PFArray::new(m, n, GroupSpec::cyclic(d)?)?;
    b.insert_int(Cell::new(i1, j1), 1)?;
    b.insert_int(Cell::new(i2, j2), 1)?;
    b.insert_int(Cell::new(i2, j1), -1)?;
    b.insert_int(Cell::new(i1, j2), -1)?;
    Ok(b)
}

/// Moves the filled diagonals of a cyclically k-diagonal array to
/// `D_1, …, D_k` by a cyclic row shift.
pub fn relabel_to_leading_diagonals(a: &PFArray) -> Result<PFArray> {
    let start = a.cyclic_run_start()?;
    Ok(a.shift_rows(1 - start as i64))
}

/// `A ⊕ B_{n,n,d}(1,2;1,2)` for a globally simple cyclically k-diagonal
/// relative Heffter array `A` with `k < n`; `A` is relabeled first when its
/// run of filled diagonals does not start at `D_1`.
///
/// The result is checked to be a globally simple Archdeacon array before it
/// is returned.
pub fn build_archdeacon_composite(a: &PFArray, d: u64) -> Result<PFArray> {
    if d <= 2 {
        return arg(format!("d must exceed 2, got {d}"));
    }
    if a.spec().as_cyclic().is_none() {
        return arg("base array must live in a cyclic group");
    }
    let report = a.classify_diagonals()?;
    if !report.is_cyclically_k_diagonal {
        return arg("base array is not cyclically k-diagonal");
    }
    let n = a.cols();
    if report.filled_diagonal_indices.len() >= n {
        return arg("base array needs k < n");
    }
    if !verify_archdeacon(a).valid || !is_globally_simple(a) {
        return arg("base array must be a globally simple zero-sum array with distinct entries");
    }
    let base = relabel_to_leading_diagonals(a)?;
    let b = build_b(n, n, d, 1, 2, 1, 2)?;
    let e = base.direct_sum(&b)?;
    let check = verify_archdeacon(&e);
    if !check.valid {
        return Err(Error::Certification {
            message: "composite is not an Archdeacon array".into(),
            witness: check.violations.first().map(|v| v.detail.clone()),
        });
    }
    if !is_globally_simple(&e) {
        return Err(Error::Certification {
            message: "composite is not globally simple".into(),
            witness: None,
        });
    }
    Ok(e)
}

/// Skeleton of size `n` with filled diagonals `D_1, …, D_{k-3}, D_{k-1}, D_k, D_{k+1}`
/// for `k ≡ 3 (mod 4)`, `n ≡ 1 (mod 4)`, `n ≥ k`.
pub fn build_skeleton_cor39(n: usize, k: usize) -> Result<PFArray> {
    if k % 4 != 3 || n % 4 != 1 || n < k {
        return arg(format!(
            "need k ≡ 3 (mod 4), n ≡ 1 (mod 4), n ≥ k; got n = {n}, k = {k}"
        ));
    }
    diagonal_skeleton(n, &cor39_diagonals(k))
}

/// Diagonal indices of the family above, ascending.
pub fn cor39_diagonals(k: usize) -> Vec<usize> {
    (1..=k.saturating_sub(3)).chain([k - 1, k, k + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heffter::{verify_integer, HeffterParams};
    use std::collections::BTreeSet;

    #[test]
    fn h_n_3_at_3_matches_hand_trace() {
        let a = build_h_n_3(3).unwrap();
        let g = a.spec();
        let at = |r, c| g.symmetric_rep(a.get(Cell::new(r, c)).unwrap()).unwrap();
        assert_eq!((at(1, 1), at(2, 2), at(3, 3)), (-6, 1, 8));
        assert_eq!((at(1, 2), at(3, 1), at(2, 3)), (9, 2, -5));
        assert_eq!((at(2, 1), at(1, 3), at(3, 2)), (4, -3, -10));
        let p = HeffterParams::square(3, 3, 3).unwrap();
        assert!(verify_integer(&a, &p).unwrap().valid);
        let expected: BTreeSet<u64> = (1..=10).filter(|&x| x != 7).collect();
        assert_eq!(a.support().unwrap(), expected);
    }

    #[test]
    fn h_2n_3_at_3() {
        let a = build_h_2n_3(3).unwrap();
        let p = HeffterParams::square(3, 3, 6).unwrap();
        let r = verify_integer(&a, &p).unwrap();
        assert!(r.valid, "{:?}", r.violations);
        let expected: BTreeSet<u64> = (1..=11).filter(|&x| x != 4 && x != 8).collect();
        assert_eq!(a.support().unwrap(), expected);
    }

    #[test]
    fn bad_parameters() {
        assert!(build_h_n_3(4).is_err());
        assert!(build_h_n_3(1).is_err());
        assert!(build_h_2n_3(10).is_err());
        assert!(build_h7(6).is_err());
        assert!(build_h7(3).is_err());
        assert!(build_h9(7).is_err());
        assert!(build_h9(13).is_err());
        assert!(build_b(4, 4, 2, 1, 2, 1, 2).is_err());
        assert!(build_b(4, 4, 3, 1, 1, 1, 2).is_err());
        assert!(build_skeleton_cor39(7, 3).is_err());
        assert!(build_skeleton_cor39(5, 7).is_err());
    }

    #[test]
    fn b_gadget_sums_vanish() {
        let b = build_b(8, 8, 3, 1, 2, 1, 2).unwrap();
        assert_eq!(b.len(), 4);
        let g = b.spec();
        for i in 1..=8 {
            assert!(g.sum(&b.row_values(i)).unwrap().is_identity());
            assert!(g.sum(&b.col_values(i)).unwrap().is_identity());
        }
        assert_eq!(g.symmetric_rep(b.get(Cell::new(1, 2)).unwrap()).unwrap(), -1);
        assert_eq!(g.symmetric_rep(b.get(Cell::new(2, 2)).unwrap()).unwrap(), 1);
    }

    #[test]
    fn cor39_skeletons() {
        let a = build_skeleton_cor39(5, 3).unwrap();
        assert_eq!(a.classify_diagonals().unwrap().filled_diagonal_indices, vec![2, 3, 4]);
        assert_eq!(a.len(), 15);
        let b = build_skeleton_cor39(9, 7).unwrap();
        assert_eq!(
            b.classify_diagonals().unwrap().filled_diagonal_indices,
            vec![1, 2, 3, 4, 6, 7, 8]
        );
        assert_eq!(b.len(), 63);
    }

    #[test]
    fn composite_rejects_bad_inputs() {
        let a = build_h_n_3(3).unwrap();
        // k = n = 3
        assert!(matches!(build_archdeacon_composite(&a, 3), Err(Error::Argument(_))));
        let a = build_h_n_3(5).unwrap();
        assert!(matches!(build_archdeacon_composite(&a, 2), Err(Error::Argument(_))));
        let e = build_archdeacon_composite(&a, 3).unwrap();
        assert_eq!(e.len(), 16);
        assert_eq!(e.spec().orders(), &[35, 3]);
    }
}
