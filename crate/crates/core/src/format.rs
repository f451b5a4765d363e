//! On-disk forms of [`PFArray`].
//!
//! JSON stores canonical residues:
//! `{"m":…,"n":…,"group":{"orders":[…]},"cells":[{"r":…,"c":…,"v":[…]}]}`
//! with cells in row-major order.
//!
//! CSV stores one line per row, symmetric representatives, an empty field for
//! an empty cell. Over a direct sum each field holds the per-factor symmetric
//! representatives separated by single spaces (`-9 1`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::pfarray::{Cell, PFArray};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArrayJson {
    m: usize,
    n: usize,
    group: GroupSpec,
    cells: Vec<CellJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CellJson {
    r: usize,
    c: usize,
    v: Vec<u64>,
}

impl Serialize for PFArray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ArrayJson {
            m: self.rows(),
            n: self.cols(),
            group: self.spec().clone(),
            cells: self
                .entries()
                .map(|(c, v)| CellJson {
                    r: c.row,
                    c: c.col,
                    v: v.coords().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PFArray {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ArrayJson::deserialize(d)?;
        let group = GroupSpec::new(raw.group.orders().to_vec()).map_err(serde::de::Error::custom)?;
        let mut a = PFArray::new(raw.m, raw.n, group.clone()).map_err(serde::de::Error::custom)?;
        for cell in raw.cells {
            let v = group.from_canonical(cell.v).map_err(serde::de::Error::custom)?;
            a.insert(Cell::new(cell.r, cell.c), v)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(a)
    }
}

impl PFArray {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("arrays always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<PFArray> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.rows() {
            let fields: Vec<String> = (1..=self.cols())
                .map(|j| match self.get(Cell::new(i, j)) {
                    None => String::new(),
                    Some(v) => self
                        .spec()
                        .symmetric_coords(v)
                        .expect("stored entries belong to the array's group")
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str, spec: &GroupSpec) -> Result<PFArray> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.is_empty() {
            return Err(Error::Parse("empty CSV".into()));
        }
        let n = lines[0].split(',').count();
        let mut a = PFArray::new(lines.len(), n, spec.clone())?;
        for (i, line) in lines.iter().enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected {n}",
                    i + 1,
                    fields.len()
                )));
            }
            for (j, field) in fields.iter().enumerate() {
                let field = field.trim();
                if field.is_empty() {
                    continue;
                }
                let coords = field
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|e| Error::Parse(format!("row {} col {}: {e}", i + 1, j + 1)))
                    })
                    .collect::<Result<Vec<i64>>>()?;
                let v = spec.element(&coords)?;
                a.insert(Cell::new(i + 1, j + 1), v)?;
            }
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_array() -> impl Strategy<Value = PFArray> {
        (1usize..6, 1usize..6, 1u64..40, 1u64..5).prop_flat_map(|(m, n, v, d)| {
            proptest::collection::vec(proptest::option::of((0..v, 0..d)), m * n).prop_map(move |cells| {
                let spec = GroupSpec::new(vec![v, d]).unwrap();
                let mut a = PFArray::new(m, n, spec.clone()).unwrap();
                for (k, c) in cells.into_iter().enumerate() {
                    if let Some((x, y)) = c {
                        let e = spec.from_canonical(vec![x, y]).unwrap();
                        a.insert(Cell::new(k / n + 1, k % n + 1), e).unwrap();
                    }
                }
                a
            })
        })
    }

    proptest! {
        #[test]
        fn json_and_csv_round_trip(a in arb_array()) {
            prop_assert_eq!(&PFArray::from_json(&a.to_json()).unwrap(), &a);
            prop_assert_eq!(&PFArray::from_csv(&a.to_csv(), a.spec()).unwrap(), &a);
        }
    }

    #[test]
    fn json_layout() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let mut a = PFArray::new(1, 2, spec).unwrap();
        a.insert_int(Cell::new(1, 2), -1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"m":1,"n":2,"group":{"orders":[7]},"cells":[{"r":1,"c":2,"v":[6]}]})
        );
        assert_eq!(a.to_csv(), ",-1\n");
    }

    #[test]
    fn csv_errors() {
        let spec = GroupSpec::cyclic(7).unwrap();
        assert!(matches!(PFArray::from_csv("1,2\n3\n", &spec), Err(Error::Parse(_))));
        assert!(matches!(PFArray::from_csv("1,x\n", &spec), Err(Error::Parse(_))));
        assert!(matches!(PFArray::from_csv("", &spec), Err(Error::Parse(_))));
    }
}
