use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::quadratic::{QuadraticValue, RadicalSum};
use super::TableError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacyClass {
    pub name: String,
    pub size: u64,
    pub element_order: u32,
    /// Level of the multiplier; equals the element order for `M₂₄`.
    pub ng: u32,
    /// Shortest cycle length in the cycle shape.
    pub hg: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fusion_target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Irreducible {
    pub name: String,
    pub dim: u64,
    pub values: Vec<QuadraticValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterTable {
    pub group_name: String,
    pub group_order: u64,
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<Irreducible>,
}

/// What [`CharacterTable::validate`] checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub group_name: String,
    pub group_order: u64,
    pub classes: usize,
    pub irreps: usize,
    pub row_pairs_checked: usize,
    pub column_pairs_checked: usize,
    pub distinct_orders: Vec<u32>,
    pub has_fusion: bool,
}

impl CharacterTable {
    /// Parses, validates and orders a table document.
    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let mut table: CharacterTable = serde_json::from_str(text).map_err(|e| TableError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        // Stable: ties keep input order.
        table.irreps.sort_by_key(|r| r.dim);
        table.validate()?;
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TableError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| TableError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialises");
        s.push('\n');
        s
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn irrep_index(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|c| c.name == name)
    }

    /// `1 = e_1 < e_2 < …`, the distinct element orders.
    pub fn distinct_orders(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.classes.iter().map(|c| c.element_order).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn dims(&self) -> Vec<u64> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// `χ_i(g)` as an exact radical sum.
    pub fn value(&self, irrep: usize, class: usize) -> RadicalSum {
        self.irreps[irrep].values[class].radical()
    }

    pub fn is_subgroup_table(&self) -> bool {
        self.classes.iter().any(|c| c.fusion_target.is_some())
    }

    pub fn validate(&self) -> Result<ValidationReport, TableError> {
        let structure = |m: String| Err(TableError::Structure(m));
        let k = self.classes.len();
        if k == 0 {
            return structure("table has no classes".into());
        }
        if self.irreps.len() != k {
            return structure(format!("{} classes but {} irreducibles", k, self.irreps.len()));
        }
        let g = self.group_order;
        let first = &self.classes[0];
        if first.size != 1 || first.element_order != 1 {
            return structure(format!("first class {} is not the identity", first.name));
        }
        let mut names = std::collections::HashSet::new();
        for c in &self.classes {
            if !names.insert(&c.name) {
                return structure(format!("duplicate class name {}", c.name));
            }
            if c.size == 0 || c.element_order == 0 || c.ng == 0 || c.hg == 0 {
                return structure(format!("class {}: size, order, ng and hg must be positive", c.name));
            }
            if g % c.size != 0 {
                return structure(format!("class {}: size {} does not divide |G| = {g}", c.name, c.size));
            }
            if g % c.element_order as u64 != 0 {
                return structure(format!("class {}: order {} does not divide |G|", c.name, c.element_order));
            }
            if g % c.ng as u64 != 0 {
                return structure(format!("class {}: ng = {} does not divide |G|", c.name, c.ng));
            }
            if c.ng % c.hg != 0 {
                return structure(format!("class {}: hg = {} does not divide ng = {}", c.name, c.hg, c.ng));
            }
        }
        let fused = self.classes.iter().filter(|c| c.fusion_target.is_some()).count();
        if fused != 0 && fused != k {
            let missing = self.classes.iter().find(|c| c.fusion_target.is_none()).expect("some class unfused");
            return Err(TableError::Fusion(format!("class {} has no fusion target", missing.name)));
        }
        let total: u64 = self.classes.iter().map(|c| c.size).sum();
        if total != g {
            return Err(TableError::ClassSizeSum { sum: total, order: g });
        }
        let mut irrep_names = std::collections::HashSet::new();
        for r in &self.irreps {
            if !irrep_names.insert(&r.name) {
                return structure(format!("duplicate irreducible name {}", r.name));
            }
            if r.values.len() != k {
                return structure(format!("irreducible {} has {} values for {k} classes", r.name, r.values.len()));
            }
            for (j, v) in r.values.iter().enumerate() {
                v.check().map_err(|m| TableError::Value {
                    irrep: r.name.clone(),
                    class: self.classes[j].name.clone(),
                    message: m,
                })?;
            }
            if r.values[0] != QuadraticValue::integer(r.dim as i64) && r.values[0].radical() != RadicalSum::integer(r.dim) {
                return Err(TableError::Value {
                    irrep: r.name.clone(),
                    class: first.name.clone(),
                    message: format!("value at the identity is {} but dim is {}", r.values[0], r.dim),
                });
            }
        }
        if self.irreps.windows(2).any(|w| w[0].dim > w[1].dim) {
            return structure("irreducibles are not in non-decreasing dimension".into());
        }
        let dim_sq: u128 = self.irreps.iter().map(|r| r.dim as u128 * r.dim as u128).sum();
        if dim_sq != g as u128 {
            return Err(TableError::DimensionSquares { sum: dim_sq, order: g });
        }

        let values: Vec<Vec<RadicalSum>> = self
            .irreps
            .iter()
            .map(|r| r.values.iter().map(|v| v.radical()).collect())
            .collect();
        let conj: Vec<Vec<RadicalSum>> = values.iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();
        let sizes: Vec<BigInt> = self.classes.iter().map(|c| BigInt::from(c.size)).collect();

        // Σ_g |[g]| χ_i(g) conj χ_j(g) = δ_ij |G|
        let mut rows = 0;
        for i in 0..k {
            for j in i..k {
                let mut s = RadicalSum::zero();
                for c in 0..k {
                    s = &s + &(&values[i][c] * &conj[j][c]).scale_int(&sizes[c]);
                }
                let expect = if i == j { RadicalSum::integer(g) } else { RadicalSum::zero() };
                if s != expect {
                    return Err(TableError::Orthogonality {
                        kind: "row",
                        first: self.irreps[i].name.clone(),
                        second: self.irreps[j].name.clone(),
                        value: s.to_string(),
                    });
                }
                rows += 1;
            }
        }
        // Σ_i conj χ_i(g) χ_i(h) = δ_gh |G|/|[g]|
        let mut cols = 0;
        for a in 0..k {
            for b in a..k {
                let mut s = RadicalSum::zero();
                for i in 0..k {
                    s = &s + &(&conj[i][a] * &values[i][b]);
                }
                let expect = if a == b {
                    let (q, r) = g.div_rem(&self.classes[a].size);
                    debug_assert_eq!(r, 0);
                    RadicalSum::integer(q)
                } else {
                    RadicalSum::zero()
                };
                if s != expect {
                    return Err(TableError::Orthogonality {
                        kind: "column",
                        first: self.classes[a].name.clone(),
                        second: self.classes[b].name.clone(),
                        value: s.to_string(),
                    });
                }
                cols += 1;
            }
        }
        Ok(ValidationReport {
            group_name: self.group_name.clone(),
            group_order: g,
            classes: k,
            irreps: k,
            row_pairs_checked: rows,
            column_pairs_checked: cols,
            distinct_orders: self.distinct_orders(),
            has_fusion: fused != 0,
        })
    }
}

pub fn load_table(path: impl AsRef<Path>) -> Result<CharacterTable, TableError> {
    CharacterTable::load(path)
}

pub fn distinct_orders(table: &CharacterTable) -> Vec<u32> {
    table.distinct_orders()
}
