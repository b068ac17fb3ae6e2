use astro_float::BigFloat;

use super::hp;
use super::NumericsError;

/// `I_{1/2}(x) = √(2/(πx))·sinh x` for `x > 0`.
pub fn bessel_i_half(x: f64) -> Result<f64, NumericsError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(NumericsError::Domain(format!("I_1/2 needs x > 0, got {x}")));
    }
    let v = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
    if !v.is_finite() {
        return Err(NumericsError::PrecisionLoss(format!(
            "I_1/2({x}) overflows f64; use the high-precision variant"
        )));
    }
    Ok(v)
}

pub fn bessel_i_half_hp(x: &BigFloat, p: usize) -> Result<BigFloat, NumericsError> {
    if x.is_negative() || x.is_zero() || x.is_nan() {
        return Err(NumericsError::Domain("I_1/2 needs x > 0".into()));
    }
    let two = hp::int(2, p);
    let q = two.div(&hp::pi(p).mul(x, p, hp::RM), p, hp::RM).sqrt(p, hp::RM);
    Ok(q.mul(&hp::sinh(x, p), p, hp::RM))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use statrs::function::gamma::gamma;

    /// `Σ_k (x/2)^{2k+1/2}/(k!·Γ(k+3/2))`.
    fn series(x: f64) -> f64 {
        let mut acc = 0.0;
        let mut fact = 1.0;
        for k in 0..80 {
            if k > 0 {
                fact *= k as f64;
            }
            acc += (x / 2.0).powf(2.0 * k as f64 + 0.5) / (fact * gamma(k as f64 + 1.5));
        }
        acc
    }

    #[test]
    fn domain() {
        assert!(bessel_i_half(0.0).is_err());
        assert!(bessel_i_half(-1.0).is_err());
        assert!(matches!(bessel_i_half(800.0), Err(NumericsError::PrecisionLoss(_))));
    }

    proptest! {
        #[test]
        fn matches_power_series(x in 1e-6f64..30.0) {
            let a = bessel_i_half(x).unwrap();
            let b = series(x);
            prop_assert!((a - b).abs() <= 1e-12 * b, "{} vs {}", a, b);
        }

        #[test]
        fn high_precision_agrees(x in 1e-3f64..200.0) {
            let a = bessel_i_half(x).unwrap();
            let b = hp::to_f64(&bessel_i_half_hp(&hp::from_f64(x, 256), 256).unwrap());
            prop_assert!((a - b).abs() <= 1e-13 * b);
        }
    }
}
