use std::collections::BTreeSet;

use heffter::constructions::{build_archdeacon_composite, build_b, build_h7, build_h9, build_h_2n_3, build_h_n_3};
use heffter::heffter::{verify_archdeacon, verify_integer, verify_relative_heffter, ViolationKind};
use heffter::orderings::{is_globally_simple, partial_sums};
use heffter::{Cell, GroupSpec, HeffterParams, PFArray};

const H9_9_3: &str = include_str!("fixtures/h9_9_3.csv");
const H18_9_3: &str = include_str!("fixtures/h18_9_3.csv");
const H7_11_7: &str = include_str!("fixtures/h7_11_7.csv");
const H9_15_9: &str = include_str!("fixtures/h9_15_9.csv");
const FIG4: &str = include_str!("fixtures/figure4.csv");
const FIG5: &str = include_str!("fixtures/figure5.csv");

fn z(v: u64) -> GroupSpec {
    GroupSpec::cyclic(v).unwrap()
}

fn sym(a: &PFArray, r: usize, c: usize) -> i64 {
    a.spec().symmetric_rep(a.get(Cell::new(r, c)).unwrap()).unwrap()
}

#[test]
fn builders_reproduce_fixtures() {
    assert_eq!(build_h_n_3(9).unwrap().to_csv(), H9_9_3);
    assert_eq!(build_h_2n_3(9).unwrap().to_csv(), H18_9_3);
    assert_eq!(build_h7(11).unwrap().to_csv(), H7_11_7);
    assert_eq!(build_h9(15).unwrap().to_csv(), H9_15_9);
}

#[test]
fn fixtures_verify() {
    let cases = [
        (H9_9_3, 9, 3, 9u64),
        (H18_9_3, 9, 3, 18),
        (H7_11_7, 11, 7, 7),
        (H9_15_9, 15, 9, 9),
    ];
    for (text, n, k, t) in cases {
        let p = HeffterParams::square(n, k, t).unwrap();
        let a = PFArray::from_csv(text, &p.group()).unwrap();
        let r = verify_integer(&a, &p).unwrap();
        assert!(r.valid, "n={n} k={k} t={t}: {:?}", r.violations);
        assert!(verify_archdeacon(&a).valid);
    }
    let g = z(161);
    let a = PFArray::from_csv(H7_11_7, &g).unwrap();
    assert!(is_globally_simple(&a));
    assert!(is_globally_simple(&PFArray::from_csv(H9_15_9, &z(279)).unwrap()));
}

#[test]
fn perturbed_h9_9_3() {
    let p = HeffterParams::square(9, 3, 9).unwrap();
    let mut a = PFArray::from_csv(H9_9_3, &p.group()).unwrap();
    assert_eq!(sym(&a, 1, 1), -27);
    a.replace(Cell::new(1, 1), p.group().residue(-26).unwrap()).unwrap();
    let r = verify_relative_heffter(&a, &p).unwrap();
    assert!(!r.valid);
    for kind in [ViolationKind::RowSum, ViolationKind::ColSum, ViolationKind::Coverage] {
        assert!(r.has(kind), "missing {kind:?} in {:?}", r.violations);
    }
}

#[test]
fn printed_spot_values() {
    let a = build_h_2n_3(9).unwrap();
    assert_eq!(sym(&a, 1, 1), -31);
    let h7 = build_h7(11).unwrap();
    let row1: Vec<i64> = (1..=11)
        .filter(|&j| h7.is_filled(Cell::new(1, j)))
        .map(|j| sym(&h7, 1, j))
        .collect();
    assert_eq!(row1, vec![11, -65, 20, 77, 40, -31, -52]);
    let sums: Vec<u64> = partial_sums(h7.spec(), &h7.row_values(1))
        .unwrap()
        .iter()
        .map(|x| x.coords()[0])
        .collect();
    assert_eq!(sums, vec![11, 107, 127, 43, 83, 52, 0]);
    let h9 = build_h9(15).unwrap();
    assert_eq!((sym(&h9, 1, 1), sym(&h9, 1, 2), sym(&h9, 15, 15)), (14, 75, 1));
    let expected: BTreeSet<u64> = (1..=139).filter(|x| ![31, 62, 93, 124].contains(x)).collect();
    assert_eq!(h9.support().unwrap(), expected);
    let d = h9.classify_diagonals().unwrap();
    assert_eq!(d.filled_diagonal_indices, vec![1, 2, 3, 4, 8, 9, 13, 14, 15]);
    assert_eq!(d.uniform_width, Some(3));
    assert_eq!(d.strip_widths, vec![3, 3]);
}

#[test]
fn figures_are_archdeacon_arrays() {
    for (text, v) in [(FIG4, 51), (FIG5, 60)] {
        for d in [3, 4, 5] {
            let g = GroupSpec::new(vec![v, d]).unwrap();
            let a = PFArray::from_csv(text, &g).unwrap();
            let r = verify_archdeacon(&a);
            assert!(r.valid, "v={v} d={d}: {:?}", r.violations);
            assert!(is_globally_simple(&a));
        }
    }
}

#[test]
fn figure_second_coordinates_are_b() {
    for (text, v, n, d) in [(FIG4, 51, 8, 3), (FIG5, 60, 7, 5)] {
        let g = GroupSpec::new(vec![v, d]).unwrap();
        let a = PFArray::from_csv(text, &g).unwrap();
        let second = a.project(1..2).unwrap();
        let nonzero: Vec<(Cell, i64)> = second
            .entries()
            .map(|(c, x)| (c, second.spec().symmetric_rep(x).unwrap()))
            .filter(|(_, x)| *x != 0)
            .collect();
        let b = build_b(n, n, d, 1, 2, 1, 2).unwrap();
        let expect: Vec<(Cell, i64)> = b
            .entries()
            .map(|(c, x)| (c, b.spec().symmetric_rep(x).unwrap()))
            .collect();
        assert_eq!(nonzero, expect);
    }
    let g = GroupSpec::new(vec![51, 3]).unwrap();
    let a = PFArray::from_csv(FIG4, &g).unwrap();
    let coords = |r, c| g.symmetric_coords(a.get(Cell::new(r, c)).unwrap()).unwrap();
    assert_eq!(coords(1, 2), vec![0, -1]);
    assert_eq!(coords(1, 1), vec![-9, 1]);
}

#[test]
fn composite_round_trip() {
    let e = build_archdeacon_composite(&build_h_n_3(9).unwrap(), 3).unwrap();
    assert_eq!(e.spec().orders(), &[63, 3]);
    let back = PFArray::from_csv(&e.to_csv(), e.spec()).unwrap();
    assert_eq!(back, e);
    assert_eq!(PFArray::from_json(&e.to_json()).unwrap(), e);
}
