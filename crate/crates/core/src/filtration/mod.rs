//! Recursive decomposition of a graded piece into multiples of nested
//! analogues of the regular representation, ordered by element order, and
//! the leading asymptotics of the non-free part.

mod asymptotics;
mod chain;
mod signs;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::decomp::{self, DecompError};
use crate::provider::CoefficientProvider;
use crate::rademacher::RademacherError;

pub use asymptotics::{fit_constant, m24_corollary_shape, nonfree_asymptotic, NonfreePrediction};
pub use chain::{
    direction_vector, exact_signs, filtrate_asymptotic, filtrate_exact, filtrate_with_signs, first_level,
    minimizer_set, next_class_function, order_sums, primitive_direction, sums_vanish_at, ChainLevel,
    ClassFunctionLevel, Direction, FiltrationMode, FiltrationResult,
};
pub use signs::{classify_signs, declared_pattern, sign_profile, ClassSign, SignProfile};

pub const JSON_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("order {order} contributes nothing at this level")]
    DegenerateLevel { order: u32 },
    #[error("class {class} has no sign period within the measured window")]
    AperiodicClass {
        class: String,
        /// The chain up to the level that needed the class.
        partial: Option<Box<FiltrationResult>>,
    },
    #[error("sign window [{lo}, {hi}] is too short")]
    InsufficientWindow { lo: i64, hi: i64 },
    #[error("class {class} has sign period {period}, which does not divide the modulus {modulus}")]
    Modulus { class: String, period: u64, modulus: u64 },
    #[error("{what} has length {got}, expected {want}")]
    Length { what: &'static str, got: usize, want: usize },
    #[error("input multiplicity of {irrep} is negative: {value}")]
    NegativeInput { irrep: String, value: i128 },
    #[error("table has no class {0}")]
    MissingClass(String),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Coefficient(#[from] RademacherError),
}

/// Decomposes grade `n` and filtrates it with the signs of its coefficients.
pub fn filtrate_grade(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    n: i64,
) -> Result<(decomp::MultiplicityVector, FiltrationResult), FiltrationError> {
    let coeffs = decomp::class_coefficients(table, provider, n)?;
    let mv = decomp::multiplicities(table, &coeffs, n, decomp::DEFAULT_TOLERANCE)?;
    let values: Vec<i128> = coeffs.iter().map(|c| c.value).collect();
    let result = filtrate_exact(&mv, table, &exact_signs(&values))?;
    Ok((mv, result))
}

fn name_list(result: &FiltrationResult, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| Value::String(result.irreps[i].clone())).collect())
}

impl FiltrationResult {
    /// `{schema, group, mode, n | (n0, N), chain, residual, order_blocks, …}`
    /// with keys in this fixed order.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(JSON_SCHEMA));
        m.insert("group".into(), json!(self.group));
        match self.mode {
            FiltrationMode::Exact { n } => {
                m.insert("mode".into(), json!("exact"));
                m.insert("n".into(), json!(n));
            }
            FiltrationMode::Asymptotic { n0, modulus } => {
                m.insert("mode".into(), json!("asymptotic"));
                m.insert("n0".into(), json!(n0));
                m.insert("N".into(), json!(modulus));
            }
        }
        let chain: Vec<Value> = self
            .chain
            .iter()
            .map(|l| {
                let mut c = Map::new();
                c.insert("level".into(), json!(l.level));
                c.insert("level_order".into(), json!(l.level_order));
                c.insert("r".into(), l.r.map_or(Value::Null, |r| json!(r.to_string())));
                let mut dir = Map::new();
                for &i in &l.support {
                    let v = match &l.direction {
                        Some(d) => json!(d[i].to_string()),
                        None => json!(l.normalized[i]),
                    };
                    dir.insert(self.irreps[i].clone(), v);
                }
                c.insert("direction".into(), Value::Object(dir));
                c.insert("J".into(), name_list(self, &l.removed));
                c.insert("J_order".into(), l.decided_at.map_or(Value::Null, |e| json!(e)));
                Value::Object(c)
            })
            .collect();
        m.insert("chain".into(), Value::Array(chain));
        let residual = match &self.residual {
            Some(r) => {
                let mut o = Map::new();
                for (name, v) in self.irreps.iter().zip(r) {
                    o.insert(name.clone(), json!(v.to_string()));
                }
                Value::Object(o)
            }
            None => Value::Null,
        };
        m.insert("residual".into(), residual);
        m.insert(
            "order_blocks".into(),
            Value::Array(self.order_blocks.iter().map(|b| name_list(self, b)).collect()),
        );
        m.insert("degenerate_orders".into(), json!(self.degenerate_orders));
        m.insert("approximate".into(), json!(self.approximate));
        if let Some((lo, hi)) = self.sign_window {
            m.insert("sign_window".into(), json!([lo, hi]));
        }
        m.insert("violations".into(), json!(self.violations));
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab;
    use crate::decomp::MultiplicityVector;

    fn a5_signs(n: i64) -> Vec<Option<i8>> {
        // 1A, 2A, 3A, 5A, 5B; 3A vanishes for n ≡ 1 (mod 3).
        let s2 = if n % 2 == 0 { 1 } else { -1 };
        let s3 = [1, 0, -1][(n % 3) as usize];
        let s5 = [1, 0, 1, 0, -1][(n % 5) as usize];
        vec![Some(1), Some(s2), Some(s3), Some(s5), Some(s5)]
    }

    #[test]
    fn a5_level_one_minimizer() {
        let t = chartab::a5();
        let level = first_level(t);
        let lambda = direction_vector(t, &level, &a5_signs(10)).unwrap().raw;
        assert_eq!(minimizer_set(t, &a5_signs(10), 2, &level, &lambda).unwrap(), vec![1, 2]);
        assert_eq!(minimizer_set(t, &a5_signs(11), 2, &level, &lambda).unwrap(), vec![0]);
    }

    #[test]
    fn a5_level_two_values_and_direction() {
        let t = chartab::a5();
        let signs = a5_signs(10);
        let l1 = first_level(t);
        let d1 = direction_vector(t, &l1, &signs).unwrap();
        assert_eq!(d1.canonical, Some(vec![1, 3, 3, 4, 5]));
        let l2 = next_class_function(&l1, &d1.raw, &[1, 2], 1, 2);
        assert_eq!(l2.active, vec![0, 3, 4]);
        for &i in &l2.active {
            assert!(l2.values[i][0].is_zero());
        }
        let at_2a: Vec<f64> = [0, 3, 4].iter().map(|&i| l2.values[i][1].real_f64()).collect();
        assert_eq!(at_2a, vec![4.0, 4.0, 8.0]);
        let d2 = direction_vector(t, &l2, &signs).unwrap();
        assert_eq!(d2.canonical, Some(vec![1, 0, 0, 1, 2]));
        assert!(sums_vanish_at(t, &l2, &signs, &[1]));
    }

    #[test]
    fn a5_asymptotic_blocks() {
        let t = chartab::a5();
        let r = filtrate_with_signs(t, &a5_signs(10), FiltrationMode::Asymptotic { n0: 10, modulus: 30 }).unwrap();
        assert_eq!(r.chain.len(), 3);
        assert_eq!(r.block_names(), vec![vec!["3a", "3b"], vec!["4"], vec!["1", "5"]]);
        assert_eq!(r.degenerate_orders, vec![3]);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn regular_plus_trivial() {
        let t = chartab::a5();
        let mv = MultiplicityVector::new("A5", 10, vec![2, 3, 3, 4, 5]);
        let r = filtrate_exact(&mv, t, &a5_signs(10)).unwrap();
        assert_eq!(r.chain[0].r, Some(1));
        assert_eq!(r.residual, Some(vec![1, 0, 0, 0, 0]));
        assert_eq!(r.reconstruct(), Some(mv.m.clone()));
        let mv = MultiplicityVector::new("A5", 10, vec![3, 9, 9, 12, 15]);
        let r = filtrate_exact(&mv, t, &a5_signs(10)).unwrap();
        assert_eq!(r.r_values(), vec![3, 0, 0]);
        assert_eq!(r.residual, Some(vec![0; 5]));
    }

    #[test]
    fn scaling_leaves_minimizer_and_direction() {
        let t = chartab::a5();
        let signs = a5_signs(10);
        let l1 = first_level(t);
        let d1 = direction_vector(t, &l1, &signs).unwrap();
        let l2 = next_class_function(&l1, &d1.raw, &[1, 2], 1, 2);
        let k = chartab::RadicalSum::integer(7);
        let mut scaled = l2.clone();
        for &i in &scaled.active.clone() {
            scaled.values[i] = scaled.values[i].iter().map(|v| v * &k).collect();
        }
        let a = direction_vector(t, &l2, &signs).unwrap();
        let b = direction_vector(t, &scaled, &signs).unwrap();
        assert_eq!(a.canonical, b.canonical);
        assert_eq!(
            minimizer_set(t, &signs, 5, &l2, &a.raw).unwrap(),
            minimizer_set(t, &signs, 5, &scaled, &b.raw).unwrap()
        );
    }

    #[test]
    fn json_keys_are_ordered() {
        let t = chartab::a5();
        let r = filtrate_with_signs(t, &a5_signs(10), FiltrationMode::Asymptotic { n0: 10, modulus: 30 }).unwrap();
        let s = serde_json::to_string(&r.to_json()).unwrap();
        let pos = |k: &str| s.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("schema") < pos("mode") && pos("mode") < pos("chain") && pos("chain") < pos("order_blocks"));
    }
}
