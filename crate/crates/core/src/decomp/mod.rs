//! Multiplicities of irreducibles in each graded piece, from the per-class
//! coefficients by character orthogonality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::{CharacterTable, RadicalSum};
use crate::provider::{CoefficientProvider, CoefficientValue};
use crate::rademacher::RademacherError;

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("{count} coefficients supplied for {classes} classes")]
    Length { count: usize, classes: usize },
    #[error("no coefficient for class {class} at n = {n}")]
    MissingClass { class: String, n: i64 },
    #[error("multiplicity of {irrep} at n = {n} has irrational part: {value}")]
    Irrational { irrep: String, n: i64, value: String },
    #[error("multiplicity of {irrep} at n = {n} is {value}, not an integer (distance {residual:.3e})")]
    NonIntegral {
        irrep: String,
        n: i64,
        value: String,
        residual: f64,
    },
    #[error("multiplicity of {irrep} at n = {n} is negative: {value}")]
    NegativeMultiplicity { irrep: String, n: i64, value: i128 },
    #[error("multiplicity of {irrep} at n = {n} does not fit in 128 bits")]
    Overflow { irrep: String, n: i64 },
    #[error("reconstruction fails at class {class}, n = {n}: {got} vs {expected}")]
    Reconstruction {
        class: String,
        n: i64,
        got: String,
        expected: i128,
    },
    #[error("grade {n} is outside the ratio profile domain n >= 1")]
    Grade { n: i64 },
    #[error(transparent)]
    Coefficient(#[from] RademacherError),
}

/// `m_i(n)` parallel to the irreducibles of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityVector {
    pub group: String,
    pub n: i64,
    pub m: Vec<i128>,
    /// Distance of the exact orthogonality sum from `m_i`; zero whenever the
    /// inputs are consistent, since integral coefficients make the sum exact.
    pub residuals: Vec<f64>,
    /// The coefficient residuals carried through the same sum: how far the
    /// unrounded series values would put `m_i` from the integer.
    pub propagated: Vec<f64>,
}

impl MultiplicityVector {
    pub fn new(group: impl Into<String>, n: i64, m: Vec<i128>) -> Self {
        let k = m.len();
        MultiplicityVector {
            group: group.into(),
            n,
            m,
            residuals: vec![0.0; k],
            propagated: vec![0.0; k],
        }
    }

    /// `Σ m_i·dim χ_i`.
    pub fn dimension(&self, table: &CharacterTable) -> i128 {
        self.m.iter().zip(table.dims()).map(|(m, d)| m * d as i128).sum()
    }
}

/// Tolerance on the distance of an orthogonality sum from an integer,
/// relative to `max(1, Σ_g |[g]|·|χ_i(g)|·|c_g|/|G|)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// `m_i(n) = (1/|G|) Σ_g |[g]| χ_i(g) c_g(n)`, evaluated exactly.
pub fn multiplicities(
    table: &CharacterTable,
    coeffs: &[CoefficientValue],
    n: i64,
    tolerance: f64,
) -> Result<MultiplicityVector, DecompError> {
    let k = table.classes.len();
    if coeffs.len() != k {
        return Err(DecompError::Length {
            count: coeffs.len(),
            classes: k,
        });
    }
    let order = BigRational::from_integer(BigInt::from(table.group_order));
    let g = table.group_order as f64;
    let mut out = MultiplicityVector::new(table.group_name.clone(), n, Vec::with_capacity(k));
    out.residuals.clear();
    out.propagated.clear();
    for (i, irrep) in table.irreps.iter().enumerate() {
        let mut sum = RadicalSum::zero();
        let mut magnitude = 0.0;
        let mut propagated = 0.0;
        for (c, class) in table.classes.iter().enumerate() {
            let weight = BigInt::from(class.size) * BigInt::from(coeffs[c].value);
            let chi = table.value(i, c);
            sum = &sum + &chi.scale_int(&weight);
            let z = irrep.values[c].to_complex();
            magnitude += class.size as f64 * z.norm() * (coeffs[c].value as f64).abs() / g;
            propagated += class.size as f64 * z.re * coeffs[c].residual / g;
        }
        let raw = sum.scale(&(BigRational::from_integer(BigInt::from(1)) / &order));
        // Complex-conjugate classes carry equal coefficients, so the imaginary
        // part cancels; real irrational parts cancel between Galois-conjugate
        // values. Anything left over means inconsistent input.
        let Some(q) = raw.as_rational() else {
            return Err(DecompError::Irrational {
                irrep: irrep.name.clone(),
                n,
                value: raw.to_string(),
            });
        };
        let (floor, frac) = q.numer().div_mod_floor(q.denom());
        let frac = BigRational::new(frac, q.denom().clone());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let (nearest, dist) = if frac > half {
            (floor + 1, BigRational::from_integer(BigInt::from(1)) - &frac)
        } else {
            (floor, frac)
        };
        let dist = dist.abs().to_f64().unwrap_or(f64::INFINITY);
        if dist > tolerance * magnitude.max(1.0) {
            return Err(DecompError::NonIntegral {
                irrep: irrep.name.clone(),
                n,
                value: q.to_string(),
                residual: dist,
            });
        }
        let m = nearest.to_i128().ok_or_else(|| DecompError::Overflow {
            irrep: irrep.name.clone(),
            n,
        })?;
        if n >= 1 && m < 0 {
            return Err(DecompError::NegativeMultiplicity {
                irrep: irrep.name.clone(),
                n,
                value: m,
            });
        }
        out.m.push(m);
        out.residuals.push(dist);
        out.propagated.push(propagated);
    }
    Ok(out)
}

/// Fetches every class coefficient at grade `n` from `provider` and decomposes.
pub fn decompose(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    n: i64,
) -> Result<MultiplicityVector, DecompError> {
    let coeffs = class_coefficients(table, provider, n)?;
    multiplicities(table, &coeffs, n, DEFAULT_TOLERANCE)
}

/// Decomposes a list of grades after warming the provider with `jobs` workers.
pub fn decompose_grades(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    grades: &[i64],
    jobs: usize,
) -> Result<Vec<MultiplicityVector>, DecompError> {
    let classes: Vec<String> = table.classes.iter().map(|c| c.name.clone()).collect();
    let positive: Vec<i64> = grades.iter().copied().filter(|&n| n >= 1).collect();
    provider.prefetch(&classes, &positive, jobs)?;
    grades.iter().map(|&n| decompose(table, provider, n)).collect()
}

pub fn class_coefficients(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    n: i64,
) -> Result<Vec<CoefficientValue>, DecompError> {
    table
        .classes
        .iter()
        .map(|c| {
            if !provider.has_class(&c.name) {
                return Err(DecompError::MissingClass {
                    class: c.name.clone(),
                    n,
                });
            }
            Ok(provider.coefficient(&c.name, n)?)
        })
        .collect()
}

/// `Σ_i m_i χ_i(g)` for every class.
pub fn reconstruct(mv: &MultiplicityVector, table: &CharacterTable) -> Vec<RadicalSum> {
    (0..table.classes.len())
        .map(|c| {
            let mut s = RadicalSum::zero();
            for (i, m) in mv.m.iter().enumerate() {
                s = &s + &table.value(i, c).scale_int(&BigInt::from(*m));
            }
            s
        })
        .collect()
}

/// Checks `Σ_i m_i χ_i(g) = c_g(n)` exactly at every class.
pub fn check_reconstruction(
    mv: &MultiplicityVector,
    table: &CharacterTable,
    coeffs: &[CoefficientValue],
) -> Result<(), DecompError> {
    for (c, got) in reconstruct(mv, table).into_iter().enumerate() {
        if got != RadicalSum::integer(coeffs[c].value) {
            return Err(DecompError::Reconstruction {
                class: table.classes[c].name.clone(),
                n: mv.n,
                got: got.to_string(),
                expected: coeffs[c].value,
            });
        }
    }
    Ok(())
}

/// Largest multiple of the regular representation inside `mv`, and what is left.
pub fn free_part_split(mv: &MultiplicityVector, table: &CharacterTable) -> (i128, MultiplicityVector) {
    let dims = table.dims();
    let r1 = mv
        .m
        .iter()
        .zip(&dims)
        .map(|(m, &d)| Integer::div_floor(m, &(d as i128)))
        .min()
        .unwrap_or(0);
    let mut rest = mv.clone();
    for (m, &d) in rest.m.iter_mut().zip(&dims) {
        *m -= r1 * d as i128;
    }
    (r1, rest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: i64,
    /// `m_i/Σ_j m_j`.
    pub ratios: Vec<f64>,
    /// `dim χ_i/Σ_j dim χ_j`.
    pub limits: Vec<f64>,
    pub max_deviation: f64,
}

/// Limits of `m_i/Σ m_j` as the grade grows.
pub fn limit_ratios(table: &CharacterTable) -> Vec<f64> {
    let dims = table.dims();
    let total: u64 = dims.iter().sum();
    dims.iter().map(|&d| d as f64 / total as f64).collect()
}

pub fn ratio_row(mv: &MultiplicityVector, table: &CharacterTable) -> RatioRow {
    let limits = limit_ratios(table);
    let total: i128 = mv.m.iter().sum();
    let ratios: Vec<f64> = mv.m.iter().map(|&m| m as f64 / total as f64).collect();
    let max_deviation = ratios
        .iter()
        .zip(&limits)
        .map(|(r, l)| (r - l).abs())
        .fold(0.0, f64::max);
    RatioRow {
        n: mv.n,
        ratios,
        limits,
        max_deviation,
    }
}

pub fn ratio_profile(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    grades: &[i64],
    jobs: usize,
) -> Result<Vec<RatioRow>, DecompError> {
    if let Some(&n) = grades.iter().find(|&&n| n < 1) {
        return Err(DecompError::Grade { n });
    }
    Ok(decompose_grades(table, provider, grades, jobs)?
        .iter()
        .map(|mv| ratio_row(mv, table))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab;

    fn exact(v: i128) -> CoefficientValue {
        CoefficientValue { value: v, residual: 0.0 }
    }

    #[test]
    fn polar_grade_is_minus_two_trivial() {
        let t = chartab::m24();
        let coeffs = vec![exact(-2); t.classes.len()];
        let mv = multiplicities(t, &coeffs, -1, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(mv.m[0], -2);
        assert!(mv.m[1..].iter().all(|&m| m == 0));
    }

    #[test]
    fn identity_spike_gives_regular_representation() {
        for t in [chartab::m24(), chartab::a5()] {
            let mut coeffs = vec![exact(0); t.classes.len()];
            coeffs[0] = exact(t.group_order as i128);
            let mv = multiplicities(t, &coeffs, 3, DEFAULT_TOLERANCE).unwrap();
            let dims: Vec<i128> = t.dims().iter().map(|&d| d as i128).collect();
            assert_eq!(mv.m, dims);
            let (r1, rest) = free_part_split(&mv, t);
            assert_eq!(r1, 1);
            assert!(rest.m.iter().all(|&m| m == 0));
            assert_eq!(ratio_row(&mv, t).max_deviation, 0.0);
        }
    }

    #[test]
    fn free_part_examples() {
        let t = chartab::a5();
        let (r1, rest) = free_part_split(&MultiplicityVector::new("A5", 1, vec![2, 6, 6, 8, 10]), t);
        assert_eq!((r1, rest.m), (2, vec![0, 0, 0, 0, 0]));
        let (r1, rest) = free_part_split(&MultiplicityVector::new("A5", 1, vec![3, 6, 6, 8, 10]), t);
        assert_eq!((r1, rest.m), (2, vec![1, 0, 0, 0, 0]));
        let (r1, rest) = free_part_split(&MultiplicityVector::new("A5", 1, vec![5, 2, 9, 9, 9]), t);
        assert_eq!((r1, rest.m), (0, vec![5, 2, 9, 9, 9]));
    }

    #[test]
    fn a5_limits() {
        let l = limit_ratios(chartab::a5());
        let want = [1.0, 3.0, 3.0, 4.0, 5.0].map(|d| d / 16.0);
        assert_eq!(l, want.to_vec());
    }

    #[test]
    fn inconsistent_coefficients_are_rejected() {
        let t = chartab::a5();
        // c = (1, 0, 0, 0, 0) is |G|^{-1} times the regular character.
        let mut coeffs = vec![exact(0); 5];
        coeffs[0] = exact(1);
        assert!(matches!(
            multiplicities(t, &coeffs, 2, 0.0),
            Err(DecompError::NonIntegral { .. })
        ));
        // Different values on 5A and 5B leave a √5 behind.
        let coeffs = vec![exact(60), exact(0), exact(0), exact(5), exact(0)];
        assert!(matches!(
            multiplicities(t, &coeffs, 2, DEFAULT_TOLERANCE),
            Err(DecompError::Irrational { .. })
        ));
    }

    #[test]
    fn negative_multiplicity_is_an_error_above_the_polar_grade() {
        let t = chartab::a5();
        let coeffs = vec![exact(-2); 5];
        assert!(matches!(
            multiplicities(t, &coeffs, 1, DEFAULT_TOLERANCE),
            Err(DecompError::NegativeMultiplicity { .. })
        ));
    }

    #[test]
    fn reconstruction_round_trip() {
        let t = chartab::a5();
        let coeffs = vec![exact(60 * 3), exact(0), exact(0), exact(0), exact(0)];
        let mut mv = multiplicities(t, &coeffs, 2, DEFAULT_TOLERANCE).unwrap();
        check_reconstruction(&mv, t, &coeffs).unwrap();
        mv.m[4] += 1;
        assert!(check_reconstruction(&mv, t, &coeffs).is_err());
    }
}
