//! Character tables with exact quadratic values, their validation, and the
//! bundled `M₂₄` and `A₅` data.

mod fusion;
mod quadratic;
mod table;

use std::sync::OnceLock;

use thiserror::Error;

pub use fusion::{check_fusion, fuse_subgroup, FusedProvider};
pub use quadratic::{is_squarefree, QuadraticValue, RadicalSum};
pub use table::{distinct_orders, load_table, CharacterTable, ConjugacyClass, Irreducible, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("malformed table: {0}")]
    Structure(String),
    #[error("bad character value of {irrep} at {class}: {message}")]
    Value { irrep: String, class: String, message: String },
    #[error("class sizes sum to {sum}, not |G| = {order}")]
    ClassSizeSum { sum: u64, order: u64 },
    #[error("squared dimensions sum to {sum}, not |G| = {order}")]
    DimensionSquares { sum: u128, order: u64 },
    #[error("{kind} orthogonality fails for ({first}, {second}): sum is {value}")]
    Orthogonality {
        kind: &'static str,
        first: String,
        second: String,
        value: String,
    },
    #[error("fusion: {0}")]
    Fusion(String),
}

pub const M24_TABLE: &str = include_str!("../../../../data/m24.table");
pub const A5_TABLE: &str = include_str!("../../../../data/a5.table");

/// The bundled `M₂₄` table, validated on first use.
pub fn m24() -> &'static CharacterTable {
    static T: OnceLock<CharacterTable> = OnceLock::new();
    T.get_or_init(|| CharacterTable::from_json(M24_TABLE).expect("bundled M24 table is valid"))
}

/// The bundled `A₅` table with its fusion into `M₂₄`.
pub fn a5() -> &'static CharacterTable {
    static T: OnceLock<CharacterTable> = OnceLock::new();
    T.get_or_init(|| CharacterTable::from_json(A5_TABLE).expect("bundled A5 table is valid"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    use super::*;
    use crate::provider::{CoefficientProvider, CoefficientValue};
    use crate::rademacher::RademacherError;

    #[test]
    fn bundled_tables_validate() {
        let r = m24().validate().unwrap();
        assert_eq!((r.classes, r.row_pairs_checked, r.column_pairs_checked), (26, 351, 351));
        assert_eq!(r.distinct_orders, vec![1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 14, 15, 21, 23]);
        let r = a5().validate().unwrap();
        assert!(r.has_fusion);
        assert_eq!(a5().dims(), vec![1, 3, 3, 4, 5]);
        check_fusion(a5(), m24()).unwrap();
    }

    fn perturbed(f: impl FnOnce(&mut serde_json::Value)) -> Result<CharacterTable, TableError> {
        let mut v: serde_json::Value = serde_json::from_str(M24_TABLE).unwrap();
        f(&mut v);
        CharacterTable::from_json(&v.to_string())
    }

    #[test]
    fn perturbed_value_breaks_orthogonality() {
        let e = perturbed(|v| v["irreps"][1]["values"][1]["a"] = 16.into()).unwrap_err();
        assert!(matches!(e, TableError::Orthogonality { .. }), "{e}");
    }

    #[test]
    fn structural_errors() {
        let e = perturbed(|v| v["classes"][3]["size"] = 1.into()).unwrap_err();
        assert!(matches!(e, TableError::ClassSizeSum { .. } | TableError::Structure(_)), "{e}");
        let e = perturbed(|v| {
            v["irreps"][1]["dim"] = 24.into();
            v["irreps"][1]["values"][0]["a"] = 48.into();
        })
        .unwrap_err();
        assert!(matches!(e, TableError::DimensionSquares { .. }), "{e}");
        let e = perturbed(|v| v["irreps"][2]["values"][11]["d"] = (-28).into()).unwrap_err();
        assert!(matches!(e, TableError::Value { .. }), "{e}");
        let e = perturbed(|v| v["classes"][0]["colour"] = "red".into()).unwrap_err();
        assert!(matches!(e, TableError::Parse { .. }), "{e}");
    }

    #[test]
    fn partial_fusion_is_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(A5_TABLE).unwrap();
        v["classes"][2].as_object_mut().unwrap().remove("fusion_target");
        match CharacterTable::from_json(&v.to_string()) {
            Err(TableError::Fusion(m)) => assert!(m.contains("3A"), "{m}"),
            other => panic!("{other:?}"),
        }
        let mut v: serde_json::Value = serde_json::from_str(A5_TABLE).unwrap();
        v["classes"][2]["fusion_target"] = "3B".into();
        let t = CharacterTable::from_json(&v.to_string()).unwrap();
        match check_fusion(&t, m24()) {
            Err(TableError::Fusion(m)) => assert!(m.contains("3A"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    struct Stub;

    impl CoefficientProvider for Stub {
        fn group_name(&self) -> &str {
            "M24"
        }
        fn has_class(&self, class: &str) -> bool {
            class != "5A"
        }
        fn coefficient(&self, _: &str, n: i64) -> Result<CoefficientValue, RademacherError> {
            Ok(CoefficientValue { value: n as i128, residual: 0.0 })
        }
    }

    #[test]
    fn fused_provider_maps_classes() {
        let err = fuse_subgroup(a5(), Arc::new(Stub)).err().expect("5A is missing");
        assert!(err.to_string().contains("5A"));

        struct All;
        impl CoefficientProvider for All {
            fn group_name(&self) -> &str {
                "M24"
            }
            fn has_class(&self, _: &str) -> bool {
                true
            }
            fn coefficient(&self, class: &str, n: i64) -> Result<CoefficientValue, RademacherError> {
                Ok(CoefficientValue { value: class.len() as i128 * 100 + n as i128, residual: 0.0 })
            }
        }
        let f = fuse_subgroup(a5(), Arc::new(All)).unwrap();
        assert_eq!(f.ambient_class("5B"), Some("5A"));
        assert_eq!(f.coefficient("5B", 3).unwrap().value, 203);
        assert!(f.coefficient("7A", 3).is_err());
    }

    #[test]
    fn quadratic_encoding_checks() {
        assert!(QuadraticValue { a: -1, b: 1, d: -7 }.check().is_ok());
        assert!(QuadraticValue { a: -1, b: 1, d: -28 }.check().is_err());
        assert!(QuadraticValue { a: 1, b: 0, d: 1 }.check().is_err());
        assert!(QuadraticValue { a: 1, b: 1, d: 3 }.check().is_err());
        assert!(QuadraticValue { a: 2, b: 2, d: 3 }.check().is_ok());
        assert!(QuadraticValue { a: 2, b: 1, d: 1 }.check().is_err());
    }

    #[test]
    fn radical_arithmetic() {
        let b7 = QuadraticValue { a: -1, b: 1, d: -7 }.radical();
        // b7·conj(b7) = (1 + 7)/4 = 2, b7 + conj(b7) = −1.
        assert_eq!(&b7 * &b7.conj(), RadicalSum::integer(2));
        assert_eq!(&b7 + &b7.conj(), RadicalSum::integer(-1));
        let i7 = QuadraticValue { a: 0, b: 2, d: -7 }.radical();
        assert_eq!(&i7 * &i7, RadicalSum::integer(-7));
        let phi = QuadraticValue { a: 1, b: 1, d: 5 }.radical();
        assert_eq!(&(&phi * &phi) - &phi, RadicalSum::integer(1));
        assert_eq!(phi.real_signum(), std::cmp::Ordering::Greater);
        assert_eq!((&RadicalSum::integer(1) - &phi).real_signum(), std::cmp::Ordering::Less);
    }

    fn small_sum() -> impl Strategy<Value = RadicalSum> {
        prop::collection::vec((prop::sample::select(vec![1i64, 5, -7, -15, -23, 2]), -20i64..20, 1i64..5), 0..4)
            .prop_map(|terms| {
                let mut s = RadicalSum::zero();
                for (k, num, den) in terms {
                    let q = BigRational::new(BigInt::from(num), BigInt::from(den));
                    let t = if k == 1 {
                        RadicalSum::rational(q)
                    } else {
                        QuadraticValue { a: 0, b: 2, d: k }.radical().scale(&q)
                    };
                    s = &s + &t;
                }
                s
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_sum(), b in small_sum(), c in small_sum()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            let z = (&a * &b).to_complex();
            let w = a.to_complex() * b.to_complex();
            prop_assert!((z - w).norm() < 1e-9 * (1.0 + w.norm()));
        }

        #[test]
        fn conjugation_is_multiplicative(a in small_sum(), b in small_sum()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }
    }
}
