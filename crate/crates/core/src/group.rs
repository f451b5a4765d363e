//! Finite abelian groups given as direct sums of cyclic groups.
//!
//! Elements are stored in canonical form: coordinate `i` lies in
//! `[0, orders[i] - 1]`. Signed views (symmetric representatives) are computed
//! on demand and never stored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

/// `Z_{orders[0]} ⊕ Z_{orders[1]} ⊕ …`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    orders: Vec<u64>,
}

/// An element of some [`GroupSpec`], one canonical residue per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return arg("a group needs at least one cyclic factor");
        }
        if orders.contains(&0) {
            return arg("cyclic factor orders must be positive");
        }
        if orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o)).is_none() {
            return arg("group order overflows u64");
        }
        Ok(GroupSpec { orders })
    }

    /// The cyclic group `Z_v`.
    pub fn cyclic(v: u64) -> Result<Self> {
        Self::new(vec![v])
    }

    /// The trivial group, used for skeleton-only arrays.
    pub fn trivial() -> Self {
        GroupSpec { orders: vec![1] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    /// `Some(v)` when this is a single cyclic factor `Z_v`.
    pub fn as_cyclic(&self) -> Option<u64> {
        match self.orders.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn direct_sum(&self, other: &GroupSpec) -> GroupSpec {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        GroupSpec { orders }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.orders.len()],
        }
    }

    /// Reduces signed integer coordinates into canonical form.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.orders.len() {
            return Err(Error::Structural(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.orders.len()
            )));
        }
        let coords = coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &o)| reduce(x as i128, o))
            .collect();
        Ok(GroupElement { coords })
    }

    /// Reduces a single signed integer into `Z_v`.
    pub fn residue(&self, x: i64) -> Result<GroupElement> {
        match self.as_cyclic() {
            Some(v) => Ok(GroupElement {
                coords: vec![reduce(x as i128, v)],
            }),
            None => arg("residue() needs a single cyclic factor"),
        }
    }

    /// Accepts an already canonical coordinate list.
    pub fn from_canonical(&self, coords: Vec<u64>) -> Result<GroupElement> {
        let e = GroupElement { coords };
        self.check(&e)?;
        Ok(e)
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.orders.len() && a.coords.iter().zip(&self.orders).all(|(&x, &o)| x < o)
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::Structural(format!("element {a} does not belong to {self}")))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.orders)
            .map(|((&x, &y), &o)| ((x as u128 + y as u128) % o as u128) as u64)
            .collect();
        GroupElement { coords }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub(crate) fn neg_unchecked(&self, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &o)| if x == 0 { 0 } else { o - x })
            .collect();
        GroupElement { coords }
    }

    pub fn sum<'a, I>(&self, items: I) -> Result<GroupElement>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut acc = self.identity();
        for x in items {
            acc = self.add(&acc, x)?;
        }
        Ok(acc)
    }

    /// The integer `x` with `-⌊v/2⌋ ≤ x ≤ ⌊v/2⌋` congruent to `a` modulo `v`;
    /// for even `v` the self-inverse element `v/2` maps to `+v/2`.
    pub fn symmetric_rep(&self, a: &GroupElement) -> Result<i64> {
        let v = self
            .as_cyclic()
            .ok_or_else(|| Error::Argument("symmetric_rep needs a single cyclic factor".into()))?;
        self.check(a)?;
        Ok(symmetric(a.coords[0], v))
    }

    /// Per-coordinate symmetric representatives (any rank).
    pub fn symmetric_coords(&self, a: &GroupElement) -> Result<Vec<i64>> {
        self.check(a)?;
        Ok(a.coords
            .iter()
            .zip(&self.orders)
            .map(|(&x, &o)| symmetric(x, o))
            .collect())
    }

    /// Mixed-radix index in `[0, size)`; the first factor is most significant.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.coords
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&x, &o)| acc * o + x) as usize
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0; self.orders.len()];
        for (slot, &o) in coords.iter_mut().zip(&self.orders).rev() {
            *slot = index as u64 % o;
            index /= o as usize;
        }
        GroupElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size() as usize).map(move |i| self.element_at(i))
    }

    /// Index arithmetic used by the hot loops in `topology`.
    pub(crate) fn index_ops(&self) -> IndexOps {
        IndexOps::new(self)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z_{o}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [x] => write!(f, "{x}"),
            cs => {
                let parts: Vec<String> = cs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// `{0, v/t, 2v/t, …, (t-1)v/t}` inside `Z_v`.
pub fn subgroup_of_order(v: u64, t: u64) -> Result<Vec<GroupElement>> {
    if v == 0 || t == 0 {
        return arg("v and t must be positive");
    }
    if !v.is_multiple_of(t) {
        return arg(format!("{t} does not divide {v}"));
    }
    let step = v / t;
    Ok((0..t).map(|i| GroupElement { coords: vec![i * step] }).collect())
}

fn reduce(x: i128, order: u64) -> u64 {
    x.rem_euclid(order as i128) as u64
}

fn symmetric(x: u64, order: u64) -> i64 {
    if x <= order / 2 {
        x as i64
    } else {
        x as i64 - order as i64
    }
}

/// Flattened group arithmetic on mixed-radix indices.
#[derive(Debug, Clone)]
pub(crate) struct IndexOps {
    orders: Vec<usize>,
    size: usize,
}

impl IndexOps {
    fn new(spec: &GroupSpec) -> Self {
        IndexOps {
            orders: spec.orders.iter().map(|&o| o as usize).collect(),
            size: spec.size() as usize,
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn add(&self, a: usize, b: usize) -> usize {
        if let [o] = self.orders.as_slice() {
            let s = a + b;
            return if s >= *o { s - o } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for &o in self.orders.iter().rev() {
            let s = (a % o + b % o) % o;
            out += s * scale;
            scale *= o;
            a /= o;
            b /= o;
        }
        out
    }

    pub(crate) fn neg(&self, a: usize) -> usize {
        if let [o] = self.orders.as_slice() {
            return if a == 0 { 0 } else { o - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for &o in self.orders.iter().rev() {
            let x = a % o;
            out += (if x == 0 { 0 } else { o - x }) * scale;
            scale *= o;
            a /= o;
        }
        out
    }
}
