//! Cayley graphs, cycle decompositions developed from base cycles,
//! orthogonality, the rotation `ρ̄₀` and face tracing.
//!
//! Heavy loops run on mixed-radix group indices; public values are
//! [`GroupElement`]s.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::group::{GroupElement, GroupSpec, IndexOps};
use crate::orderings::{compose_orderings, cycle_type, is_simple, partial_sums, Ordering};
use crate::pfarray::{Cell, PFArray};

/// `Cay[G : Λ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyGraph {
    spec: GroupSpec,
    connection: BTreeSet<GroupElement>,
}

impl CayleyGraph {
    pub fn new<I>(spec: GroupSpec, connection: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let connection: BTreeSet<GroupElement> = connection.into_iter().collect();
        for a in &connection {
            if !spec.contains(a) {
                return Err(Error::Structural(format!("{a} is not an element of {spec}")));
            }
            if a.is_identity() {
                return arg("the identity cannot be a connection element");
            }
            if !connection.contains(&spec.neg_unchecked(a)) {
                return arg(format!("connection set is not closed under negation at {a}"));
            }
        }
        Ok(CayleyGraph { spec, connection })
    }

    /// `Cay[G : ±E(A)]`.
    pub fn from_array(a: &PFArray) -> Result<Self> {
        let spec = a.spec().clone();
        let conn: Vec<GroupElement> = a
            .entries()
            .flat_map(|(_, v)| [v.clone(), spec.neg_unchecked(v)])
            .collect();
        CayleyGraph::new(spec, conn)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn connection(&self) -> &BTreeSet<GroupElement> {
        &self.connection
    }

    pub fn vertex_count(&self) -> usize {
        self.spec.size() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() * self.connection.len() / 2
    }

    pub fn has_edge(&self, x: &GroupElement, y: &GroupElement) -> bool {
        self.spec
            .sub(y, x)
            .map(|d| self.connection.contains(&d))
            .unwrap_or(false)
    }

    /// True iff non-adjacent pairs are exactly those differing by an element
    /// of `j`, i.e. the graph is complete multipartite with the cosets of `j`
    /// as parts.
    pub fn is_multipartite_over(&self, j: &[GroupElement]) -> bool {
        let j: BTreeSet<&GroupElement> = j.iter().collect();
        self.spec
            .elements()
            .all(|g| self.connection.contains(&g) != j.contains(&g))
    }
}

/// A closed walk with pairwise distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle {
    pub vertices: Vec<GroupElement>,
}

impl Cycle {
    pub fn new(vertices: Vec<GroupElement>) -> Result<Self> {
        if vertices.len() < 3 {
            return arg("a cycle needs at least three vertices");
        }
        let distinct: BTreeSet<&GroupElement> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return arg("cycle vertices must be pairwise distinct");
        }
        Ok(Cycle { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `v_{i+1} - v_i`, closing with `v_1 - v_k`.
    pub fn differences(&self, spec: &GroupSpec) -> Result<Vec<GroupElement>> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| spec.sub(&self.vertices[(i + 1) % k], &self.vertices[i]))
            .collect()
    }

    pub fn translate(&self, spec: &GroupSpec, g: &GroupElement) -> Result<Cycle> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| spec.add(v, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cycle { vertices })
    }
}

/// Base cycles `S(ω_{R_i})` and `S(ω_{C_j})` of the nonempty rows and columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseCycles {
    pub rows: Vec<Cycle>,
    pub cols: Vec<Cycle>,
}

fn line_cycle(a: &PFArray, seq: &[Cell], what: &str) -> Result<Cycle> {
    let spec = a.spec();
    let vals: Vec<GroupElement> = seq
        .iter()
        .map(|c| {
            a.get(*c)
                .cloned()
                .ok_or_else(|| Error::Argument(format!("{c} is empty")))
        })
        .collect::<Result<_>>()?;
    if vals.len() < 3 {
        return Err(Error::Precondition(format!("{what} has fewer than three filled cells")));
    }
    if !is_simple(spec, &vals)? {
        return Err(Error::Precondition(format!("{what} is not simple in the given order")));
    }
    let sums = partial_sums(spec, &vals)?;
    if !sums.last().expect("nonempty").is_identity() {
        return Err(Error::Precondition(format!("{what} does not sum to zero")));
    }
    Ok(Cycle { vertices: sums })
}

/// Partial-sum cycles of every nonempty row and column under `ord`.
pub fn base_cycles(a: &PFArray, ord: &Ordering) -> Result<BaseCycles> {
    ord.validate(a)?;
    let lines = |seqs: &[Vec<Cell>], what: &str| {
        seqs.iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, s)| line_cycle(a, s, &format!("{what} {}", i + 1)))
            .collect::<Result<Vec<Cycle>>>()
    };
    Ok(BaseCycles {
        rows: lines(&ord.rows, "row")?,
        cols: lines(&ord.cols, "column")?,
    })
}

fn edge_key(size: usize, u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a * size + b) as u64
}

fn cycle_edges(size: usize, verts: &[usize]) -> impl Iterator<Item = u64> + '_ {
    let k = verts.len();
    (0..k).map(move |i| edge_key(size, verts[i], verts[(i + 1) % k]))
}

fn canonical_edge_set(size: usize, verts: &[usize]) -> Vec<u64> {
    let mut e: Vec<u64> = cycle_edges(size, verts).collect();
    e.sort_unstable();
    e
}

fn develop(ops: &IndexOps, base: &[Vec<usize>]) -> Vec<Vec<usize>> {
    (0..ops.size())
        .flat_map(|g| base.iter().map(move |c| c.iter().map(|&v| ops.add(v, g)).collect()))
        .collect()
}

/// A verified `G`-regular cycle decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionCertificate {
    pub group: GroupSpec,
    pub base_cycles: usize,
    pub cycles: usize,
    pub edges: usize,
    /// cycle length → number of developed cycles
    pub cycle_lengths: BTreeMap<usize, usize>,
    #[serde(skip)]
    developed: Vec<Vec<usize>>,
}

impl DecompositionCertificate {
    pub fn developed_cycles(&self) -> Vec<Cycle> {
        self.developed
            .iter()
            .map(|c| Cycle {
                vertices: c.iter().map(|&i| self.group.element_at(i)).collect(),
            })
            .collect()
    }

    /// One undirected edge per line: `u v cycle`, endpoints in canonical
    /// coordinates, cycles numbered from 0.
    pub fn edge_list(&self) -> String {
        let size = self.group.size() as usize;
        let mut out = String::new();
        for (id, c) in self.developed.iter().enumerate() {
            for e in cycle_edges(size, c) {
                let (u, v) = ((e / size as u64) as usize, (e % size as u64) as usize);
                out.push_str(&format!(
                    "{} {} {id}\n",
                    self.group.element_at(u),
                    self.group.element_at(v)
                ));
            }
        }
        out
    }

    fn canonical_cycles(&self) -> BTreeSet<Vec<u64>> {
        let size = self.group.size() as usize;
        self.developed.iter().map(|c| canonical_edge_set(size, c)).collect()
    }
}

/// Develops every base cycle by all of `G` and certifies that the translates
/// partition the edges of `graph`.
pub fn develop_and_verify(base: &[Cycle], graph: &CayleyGraph) -> Result<DecompositionCertificate> {
    let spec = graph.spec();
    let fail = |message: &str, witness: String| Error::Certification {
        message: message.into(),
        witness: Some(witness),
    };
    let mut seen: BTreeMap<GroupElement, usize> = BTreeMap::new();
    for c in base {
        for d in c.differences(spec)? {
            *seen.entry(spec.neg_unchecked(&d)).or_default() += 1;
            *seen.entry(d).or_default() += 1;
        }
    }
    for (d, count) in &seen {
        if *count != 1 {
            return Err(fail("difference repeated across the base cycles", d.to_string()));
        }
        if !graph.connection().contains(d) {
            return Err(fail("difference outside the connection set", d.to_string()));
        }
    }
    if let Some(d) = graph.connection().iter().find(|d| !seen.contains_key(*d)) {
        return Err(fail("connection element not covered by any base cycle", d.to_string()));
    }

    let ops = spec.index_ops();
    let size = ops.size();
    let base_idx: Vec<Vec<usize>> = base
        .iter()
        .map(|c| c.vertices.iter().map(|v| spec.index_of(v)).collect())
        .collect();
    let developed = develop(&ops, &base_idx);
    let mut owner: HashMap<u64, usize> = HashMap::with_capacity(graph.edge_count());
    let mut cycle_lengths = BTreeMap::new();
    for (id, c) in developed.iter().enumerate() {
        *cycle_lengths.entry(c.len()).or_insert(0) += 1;
        for e in cycle_edges(size, c) {
            if owner.insert(e, id).is_some() {
                let (u, v) = (e / size as u64, e % size as u64);
                return Err(fail(
                    "edge covered twice",
                    format!("{{{}, {}}}", spec.element_at(u as usize), spec.element_at(v as usize)),
                ));
            }
        }
    }
    if owner.len() != graph.edge_count() {
        return Err(Error::Certification {
            message: format!("{} of {} edges covered", owner.len(), graph.edge_count()),
            witness: None,
        });
    }
    Ok(DecompositionCertificate {
        group: spec.clone(),
        base_cycles: base.len(),
        cycles: developed.len(),
        edges: owner.len(),
        cycle_lengths,
        developed,
    })
}

/// True iff no cycle of `d1` shares two or more edges with a cycle of `d2`.
pub fn verify_orthogonal(d1: &DecompositionCertificate, d2: &DecompositionCertificate) -> Result<bool> {
    if d1.group != d2.group {
        return Err(Error::Structural("decompositions live in different groups".into()));
    }
    if d1.canonical_cycles() == d2.canonical_cycles() {
        return arg("a decomposition compared with itself");
    }
    let size = d1.group.size() as usize;
    let owner: HashMap<u64, usize> = d1
        .developed
        .iter()
        .enumerate()
        .flat_map(|(id, c)| cycle_edges(size, c).map(move |e| (e, id)))
        .collect();
    Ok(d2.developed.par_iter().all(|c| {
        let mut hit: Vec<usize> = cycle_edges(size, c).filter_map(|e| owner.get(&e).copied()).collect();
        hit.sort_unstable();
        hit.windows(2).all(|w| w[0] != w[1])
    }))
}

/// `ρ̄₀` on `±E(A)`: `a ↦ -ω_r(a)` on `E(A)` and `a ↦ ω_c(-a)` on `-E(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationMap {
    spec: GroupSpec,
    positive: BTreeSet<GroupElement>,
    map: BTreeMap<GroupElement, GroupElement>,
    nonempty_rows: usize,
    nonempty_cols: usize,
}

impl RotationMap {
    pub fn apply(&self, a: &GroupElement) -> Option<&GroupElement> {
        self.map.get(a)
    }

    pub fn domain(&self) -> impl Iterator<Item = &GroupElement> {
        self.map.keys()
    }

    /// `E(A)`
    pub fn positive(&self) -> &BTreeSet<GroupElement> {
        &self.positive
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        cycle_type(&self.map.iter().collect())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
}

pub fn build_rho0(a: &PFArray, ord: &Ordering) -> Result<RotationMap> {
    ord.validate(a)?;
    let spec = a.spec();
    let positive: BTreeSet<GroupElement> = a.values().into_iter().collect();
    if positive.len() != a.len() {
        return Err(Error::Precondition("entries are not pairwise distinct".into()));
    }
    if let Some(x) = positive
        .iter()
        .find(|x| x.is_identity() || positive.contains(&spec.neg_unchecked(x)))
    {
        return Err(Error::Precondition(format!("E(A) meets -E(A) at {x}")));
    }
    if !ord.is_simple(a) {
        return Err(Error::Precondition("ordering is not simple".into()));
    }
    if !compose_orderings(a, ord)?.is_compatible {
        return Err(Error::Precondition("orderings are not compatible".into()));
    }
    let value = |c: &Cell| a.get(*c).expect("validated").clone();
    let mut map = BTreeMap::new();
    for (x, y) in ord.row_successor() {
        map.insert(value(&x), spec.neg_unchecked(&value(&y)));
    }
    for (x, y) in ord.col_successor() {
        map.insert(spec.neg_unchecked(&value(&x)), value(&y));
    }
    let (nonempty_rows, nonempty_cols) = a.nonempty_lines();
    let rho = RotationMap {
        spec: spec.clone(),
        positive,
        map,
        nonempty_rows,
        nonempty_cols,
    };
    let lengths = rho.cycle_lengths();
    if lengths != [2 * a.len()] {
        return Err(Error::Certification {
            message: "ρ̄₀ does not act cyclically on ±E(A)".into(),
            witness: Some(format!("cycle type {lengths:?}")),
        });
    }
    Ok(rho)
}

/// A face boundary as a closed vertex walk starting at its least directed
/// edge. `color` is 1 when every step lies in `E(A)`, 2 when every step lies
/// in `-E(A)` and 0 otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub vertices: Vec<GroupElement>,
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub v: usize,
    pub s: usize,
    pub f: usize,
    pub genus: u64,
    /// `1 + (|E(A)| - m - n - 1)|G|/2` over nonempty rows and columns, when integral.
    pub formula_genus: Option<i64>,
    pub faces: Vec<Face>,
}

impl EmbeddingReport {
    pub fn face_lengths(&self, color: u8) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in self.faces.iter().filter(|f| f.color == color) {
            *out.entry(f.vertices.len()).or_insert(0) += 1;
        }
        out
    }
}

fn rotate_to_least_edge(walk: &mut [usize]) {
    let k = walk.len();
    let best = (0..k)
        .min_by_key(|&i| (walk[i], walk[(i + 1) % k]))
        .expect("faces are nonempty");
    walk.rotate_left(best);
}

/// Faces of the embedding given by `ρ((x, x+a)) = (x, x+ρ̄₀(a))`: the orbits
/// of `ρ∘τ` on directed edges, `τ((x, x+a)) = (x+a, x)`.
pub fn trace_faces(graph: &CayleyGraph, rho: &RotationMap) -> Result<EmbeddingReport> {
    if graph.spec() != rho.spec() {
        return Err(Error::Structural("graph and rotation live in different groups".into()));
    }
    let domain: BTreeSet<&GroupElement> = rho.domain().collect();
    if domain != graph.connection().iter().collect() {
        return arg("the connection set must equal the domain of ρ̄₀");
    }
    let spec = graph.spec();
    let ops = spec.index_ops();
    let size = ops.size();
    let conn: Vec<usize> = graph.connection().iter().map(|a| spec.index_of(a)).collect();
    let l = conn.len();
    let mut pos = vec![usize::MAX; size];
    for (p, &a) in conn.iter().enumerate() {
        pos[a] = p;
    }
    let rho_pos: Vec<usize> = graph
        .connection()
        .iter()
        .map(|a| pos[spec.index_of(rho.apply(a).expect("domain checked"))])
        .collect();
    let neg_pos: Vec<usize> = conn.iter().map(|&a| pos[ops.neg(a)]).collect();
    let is_pos: Vec<bool> = graph.connection().iter().map(|a| rho.positive.contains(a)).collect();

    let mut visited = vec![false; size * l];
    let mut faces = Vec::new();
    for start in 0..size * l {
        if visited[start] {
            continue;
        }
        let mut walk = Vec::new();
        let (mut pos1, mut neg1) = (false, false);
        let mut dart = start;
        while !visited[dart] {
            visited[dart] = true;
            let (x, p) = (dart / l, dart % l);
            walk.push(x);
            if is_pos[p] {
                pos1 = true;
            } else {
                neg1 = true;
            }
            let y = ops.add(x, conn[p]);
            dart = y * l + rho_pos[neg_pos[p]];
        }
        rotate_to_least_edge(&mut walk);
        let color = match (pos1, neg1) {
            (true, false) => 1,
            (false, true) => 2,
            _ => 0,
        };
        faces.push((walk, color));
    }

    let v = size as i64;
    let s = (size * l / 2) as i64;
    let f = faces.len() as i64;
    let twice_genus = 2 - v + s - f;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::Structural(format!(
            "Euler characteristic {} gives a non-integral genus",
            v - s + f
        )));
    }
    let e = rho.positive.len() as i64;
    let numer = (e - rho.nonempty_rows as i64 - rho.nonempty_cols as i64 - 1) * v;
    let formula_genus = (numer % 2 == 0).then(|| 1 + numer / 2);
    Ok(EmbeddingReport {
        v: size,
        s: s as usize,
        f: faces.len(),
        genus: (twice_genus / 2) as u64,
        formula_genus,
        faces: faces
            .into_iter()
            .map(|(w, color)| Face {
                vertices: w.into_iter().map(|i| spec.element_at(i)).collect(),
                color,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoColorReport {
    pub passed: bool,
    pub class1_faces: usize,
    pub class2_faces: usize,
    pub mixed_faces: usize,
    pub class1_lengths: BTreeMap<usize, usize>,
    pub class2_lengths: BTreeMap<usize, usize>,
    /// class-1 faces are the developed column cycles under `ω_c`
    pub class1_matches_columns: bool,
    /// class-2 faces are the developed row cycles under `ω_r^{-1}`
    pub class2_matches_rows: bool,
    /// every edge lies on exactly one face of each class
    pub edges_split: bool,
}

/// Checks that the faces split into the two decompositions `D_{ω_c}` and
/// `D_{ω_r^{-1}}`, each edge bordering one face of each.
pub fn two_color_check(report: &EmbeddingReport, a: &PFArray, ord: &Ordering) -> Result<TwoColorReport> {
    let spec = a.spec();
    let size = spec.size() as usize;
    let ops = spec.index_ops();
    let mut reversed = ord.clone();
    for r in &mut reversed.rows {
        r.reverse();
    }
    let as_idx = |cs: &[Cycle]| -> Vec<Vec<usize>> {
        cs.iter()
            .map(|c| c.vertices.iter().map(|v| spec.index_of(v)).collect())
            .collect()
    };
    let cols = as_idx(&base_cycles(a, ord)?.cols);
    let rows = as_idx(&base_cycles(a, &reversed)?.rows);
    let expected = |base: &[Vec<usize>]| -> BTreeSet<Vec<u64>> {
        develop(&ops, base)
            .iter()
            .map(|c| canonical_edge_set(size, c))
            .collect()
    };

    let mut class: [BTreeSet<Vec<u64>>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut counts: [HashMap<u64, u32>; 2] = [HashMap::new(), HashMap::new()];
    let mut mixed = 0;
    for face in &report.faces {
        let idx: Vec<usize> = face.vertices.iter().map(|v| spec.index_of(v)).collect();
        match face.color {
            1 | 2 => {
                let c = (face.color - 1) as usize;
                for e in cycle_edges(size, &idx) {
                    *counts[c].entry(e).or_insert(0) += 1;
                }
                class[c].insert(canonical_edge_set(size, &idx));
            }
            _ => mixed += 1,
        }
    }
    let class1_matches_columns = class[0] == expected(&cols);
    let class2_matches_rows = class[1] == expected(&rows);
    let edges_split = counts
        .iter()
        .all(|m| m.len() == report.s && m.values().all(|&x| x == 1));
    let class1_faces = report.faces.iter().filter(|f| f.color == 1).count();
    let class2_faces = report.faces.iter().filter(|f| f.color == 2).count();
    Ok(TwoColorReport {
        passed: mixed == 0 && class1_matches_columns && class2_matches_rows && edges_split,
        class1_faces,
        class2_faces,
        mixed_faces: mixed,
        class1_lengths: report.face_lengths(1),
        class2_lengths: report.face_lengths(2),
        class1_matches_columns,
        class2_matches_rows,
        edges_split,
    })
}
