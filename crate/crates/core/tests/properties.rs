use std::collections::{BTreeMap, BTreeSet};

use heffter::constructions::{build_h7, build_h_2n_3, build_h_n_3};
use heffter::group::subgroup_of_order;
use heffter::heffter::{
    check_compatibility_parity, check_necessary_conditions, skeleton_parity, verify_archdeacon, verify_integer,
    verify_relative_heffter,
};
use heffter::knight::{knight_search, orientation_to_orderings};
use heffter::orderings::{is_globally_simple, is_simple, remark_fastpath, Ordering};
use heffter::pfarray::diagonal_skeleton;
use heffter::topology::{
    base_cycles, build_rho0, develop_and_verify, trace_faces, two_color_check, verify_orthogonal, CayleyGraph,
};
use heffter::{Cell, GroupElement, GroupSpec, HeffterParams, PFArray};

fn from_rows(v: u64, rows: &[&[Option<i64>]]) -> PFArray {
    let g = GroupSpec::cyclic(v).unwrap();
    let mut a = PFArray::new(rows.len(), rows[0].len(), g).unwrap();
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if let Some(x) = x {
                a.insert_int(Cell::new(i + 1, j + 1), *x).unwrap();
            }
        }
    }
    a
}

fn small_arrays() -> Vec<(PFArray, HeffterParams)> {
    let mut out = Vec::new();
    for n in (3..=11).step_by(2) {
        out.push((build_h_n_3(n).unwrap(), HeffterParams::square(n, 3, n as u64).unwrap()));
        out.push((
            build_h_2n_3(n).unwrap(),
            HeffterParams::square(n, 3, 2 * n as u64).unwrap(),
        ));
    }
    out.push((build_h7(7).unwrap(), HeffterParams::square(7, 7, 7).unwrap()));
    out
}

#[test]
fn plus_minus_e_is_complement_of_j() {
    for (a, p) in small_arrays() {
        let v = p.v();
        let j: BTreeSet<u64> = subgroup_of_order(v, p.t)
            .unwrap()
            .iter()
            .map(|x| x.coords()[0])
            .collect();
        let mut pm = BTreeSet::new();
        for (_, x) in a.entries() {
            let r = x.coords()[0];
            pm.insert(r);
            pm.insert((v - r) % v);
        }
        let expect: BTreeSet<u64> = (0..v).filter(|x| !j.contains(x)).collect();
        assert_eq!(pm, expect, "v={v}");
        assert!(verify_integer(&a, &p).unwrap().valid);
        assert!(verify_relative_heffter(&a, &p).unwrap().valid);
        assert!(verify_archdeacon(&a).valid);
    }
}

#[test]
fn integer_h2_support_is_an_interval() {
    let a = from_rows(
        26,
        &[
            &[Some(1), Some(5), Some(-6), None],
            &[None, Some(-8), Some(10), Some(-2)],
            &[Some(11), None, Some(-4), Some(-7)],
            &[Some(-12), Some(3), None, Some(9)],
        ],
    );
    let p = HeffterParams::square(4, 3, 2).unwrap();
    assert!(verify_integer(&a, &p).unwrap().valid);
    assert_eq!(a.support().unwrap(), (1..=12).collect());
}

#[test]
fn both_signs_break_archdeacon() {
    let g = GroupSpec::new(vec![5, 3]).unwrap();
    let mut a = PFArray::new(1, 2, g.clone()).unwrap();
    a.insert(Cell::new(1, 1), g.element(&[1, 0]).unwrap()).unwrap();
    a.insert(Cell::new(1, 2), g.element(&[-1, 0]).unwrap()).unwrap();
    let r = verify_archdeacon(&a);
    assert!(!r.valid);
    assert!(r.has(heffter::ViolationKind::InversePair));
}

// Prop. 1.2 as printed, written out independently of the library.
fn prop_1_2(n: i64, k: i64, t: i64) -> bool {
    let nk = n * k;
    let c1 = nk % t != 0 || nk % 4 == 0 || ((nk + t) % 4 == 0 && nk % 2 == 1);
    let c2 = t != 2 * nk || k % 2 == 0;
    let c3 = t == 2 * nk || nk % t == 0 || (t + 2 * nk) % 8 == 0;
    c1 && c2 && c3
}

#[test]
fn necessary_condition_table() {
    let mut rows = 0;
    for n in 3..=20i64 {
        for k in 3..=n {
            for t in 1..=2 * n * k {
                if (2 * n * k) % t != 0 {
                    continue;
                }
                let got = check_necessary_conditions(n as usize, k as usize, t as u64).unwrap();
                assert_eq!(got.passes(), prop_1_2(n, k, t), "n={n} k={k} t={t}");
                rows += 1;
            }
        }
    }
    assert!(rows > 1000);
    assert!(check_necessary_conditions(4, 3, 8).unwrap().passes());
    assert!(!check_necessary_conditions(5, 3, 30).unwrap().passes());
    assert!(check_necessary_conditions(9, 3, 9).unwrap().passes());
    assert!(check_necessary_conditions(9, 3, 7).is_err());
}

#[test]
fn compatibility_parity_examples() {
    assert!(check_compatibility_parity(9, 9, 3, 3, 9));
    assert!(!check_compatibility_parity(4, 4, 3, 3, 8));
    let full = PFArray::skeleton_only(2, 2, [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(r, c)| Cell::new(r, c))).unwrap();
    assert!(!skeleton_parity(&full).unwrap());
}

#[test]
fn short_heffter_rows_are_simple() {
    for (a, _) in small_arrays().into_iter().filter(|(_, p)| p.k <= 5) {
        assert!(is_globally_simple(&a));
    }
}

#[test]
fn fastpath_agrees_on_h7_lines() {
    let a = heffter::constructions::build_h7(11).unwrap();
    let g = a.spec();
    for i in 1..=11 {
        for seq in [a.row_values(i), a.col_values(i)] {
            assert_eq!(remark_fastpath(g, &seq).unwrap(), is_simple(g, &seq).unwrap());
        }
    }
}

fn all_edges(g: &GroupSpec, conn: &BTreeSet<GroupElement>) -> BTreeSet<(GroupElement, GroupElement)> {
    let mut out = BTreeSet::new();
    for x in g.elements() {
        for y in g.elements() {
            if x < y && conn.contains(&g.sub(&y, &x).unwrap()) {
                out.insert((x.clone(), y));
            }
        }
    }
    out
}

fn cycle_edge_sets(cycles: &[heffter::topology::Cycle]) -> Vec<BTreeSet<(GroupElement, GroupElement)>> {
    cycles
        .iter()
        .map(|c| {
            let k = c.len();
            (0..k)
                .map(|i| {
                    let (x, y) = (c.vertices[i].clone(), c.vertices[(i + 1) % k].clone());
                    if x < y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn decompositions_against_brute_force() {
    for n in [3usize, 5] {
        let a = build_h_n_3(n).unwrap();
        let g = a.spec().clone();
        let cay = CayleyGraph::from_array(&a).unwrap();
        let j = subgroup_of_order(7 * n as u64, n as u64).unwrap();
        assert!(cay.is_multipartite_over(&j));
        let edges = all_edges(&g, cay.connection());
        let b = base_cycles(&a, &Ordering::natural(&a)).unwrap();
        for c in b.rows.iter().chain(&b.cols) {
            // differences telescope back to the line's entries
            let diffs: BTreeSet<GroupElement> = c.differences(&g).unwrap().into_iter().collect();
            assert_eq!(diffs.len(), c.len());
        }
        let dr = develop_and_verify(&b.rows, &cay).unwrap();
        let dc = develop_and_verify(&b.cols, &cay).unwrap();
        let rs = cycle_edge_sets(&dr.developed_cycles());
        let cs = cycle_edge_sets(&dc.developed_cycles());
        let union_r: BTreeSet<_> = rs.iter().flatten().cloned().collect();
        assert_eq!(union_r, edges);
        assert_eq!(rs.iter().map(|s| s.len()).sum::<usize>(), edges.len());
        let oracle = rs.iter().all(|x| cs.iter().all(|y| x.intersection(y).count() <= 1));
        assert_eq!(verify_orthogonal(&dr, &dc).unwrap(), oracle);
        assert!(oracle);
    }
}

#[test]
fn non_orthogonal_pair_is_detected() {
    // two different decompositions of K_7 sharing a triangle's worth of edges
    let g = GroupSpec::cyclic(7).unwrap();
    let e = |xs: &[i64]| heffter::topology::Cycle::new(xs.iter().map(|&x| g.residue(x).unwrap()).collect()).unwrap();
    let cay = CayleyGraph::new(g.clone(), (1..7).map(|x| g.residue(x).unwrap())).unwrap();
    let d1 = develop_and_verify(&[e(&[0, 1, 3])], &cay).unwrap();
    let d2 = develop_and_verify(&[e(&[0, 3, 1])], &cay).unwrap();
    let d3 = develop_and_verify(&[e(&[0, 2, 3])], &cay).unwrap();
    // (0,1,3) and (0,3,1) are the same triangle traversed backwards
    assert!(verify_orthogonal(&d1, &d2).is_err());
    let s1 = cycle_edge_sets(&d1.developed_cycles());
    let s3 = cycle_edge_sets(&d3.developed_cycles());
    let oracle = s1.iter().all(|x| s3.iter().all(|y| x.intersection(y).count() <= 1));
    assert_eq!(verify_orthogonal(&d1, &d3).unwrap(), oracle);
}

#[test]
fn face_tracing_invariants() {
    for (a, p) in small_arrays().into_iter().take(6) {
        let o = knight_search(&a).unwrap().expect("solution");
        let ord = orientation_to_orderings(&a, &o).unwrap();
        let rho = build_rho0(&a, &ord).unwrap();
        let cay = CayleyGraph::from_array(&a).unwrap();
        let rep = trace_faces(&cay, &rho).unwrap();
        let darts: usize = rep.faces.iter().map(|f| f.vertices.len()).sum();
        assert_eq!(darts, 2 * rep.s);
        assert_eq!(rep.f as u64, p.v() * 2 * p.n as u64);
        assert_eq!(2 - rep.v as i64 + rep.s as i64 - rep.f as i64, 2 * rep.genus as i64);
        assert_eq!(rep.formula_genus, Some(rep.genus as i64));
        // each undirected edge borders exactly two faces
        let mut count: BTreeMap<(GroupElement, GroupElement), usize> = BTreeMap::new();
        for f in &rep.faces {
            let k = f.vertices.len();
            for i in 0..k {
                let (x, y) = (f.vertices[i].clone(), f.vertices[(i + 1) % k].clone());
                *count.entry(if x < y { (x, y) } else { (y, x) }).or_default() += 1;
            }
        }
        assert_eq!(count.len(), rep.s);
        assert!(count.values().all(|&c| c == 2));
        assert!(two_color_check(&rep, &a, &ord).unwrap().passed);
    }
}

#[test]
fn lemma_orientation_is_outside_the_lifting_shape() {
    use heffter::knight::{is_solution, lemma_4_10_diagonals, lemma_4_10_orientation, lift_solution, LiftSpec};
    use heffter::Orientation;
    let spec = LiftSpec::new(lemma_4_10_diagonals(21).unwrap()).unwrap();
    assert_eq!(spec.m, 14);
    assert_eq!(spec.prefix_len(21), 7);
    let o = lemma_4_10_orientation(21).unwrap();
    // eight leading -1 columns exceed the free prefix of length 7
    assert!(matches!(lift_solution(&spec, 21, &o), Err(heffter::Error::Argument(_))));
    let mut cols = vec![true; 35];
    cols[..8].fill(false);
    let naive = Orientation {
        rows: vec![true; 35],
        cols,
    };
    let big = diagonal_skeleton(35, &spec.diagonals).unwrap();
    assert!(is_solution(&big, &naive).unwrap());
}
