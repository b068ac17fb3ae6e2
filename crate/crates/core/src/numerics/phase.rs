use astro_float::BigFloat;
use num_complex::Complex64;

use super::hp;
use super::NumericsError;

/// Reduces `num/den` into `[−1/2, 1/2)` so the angle handed to `sin_cos`
/// stays small.
fn reduce(num: i128, den: i128) -> (i128, i128) {
    let den_abs = den.abs();
    let num = if den < 0 { -num } else { num };
    let mut r = num.rem_euclid(den_abs);
    if 2 * r >= den_abs {
        r -= den_abs;
    }
    (r, den_abs)
}

/// `e(num/den) = exp(2πi·num/den)`.
pub fn unit_exp(num: i128, den: i128) -> Result<Complex64, NumericsError> {
    if den == 0 {
        return Err(NumericsError::Domain("unit_exp with zero denominator".into()));
    }
    let (r, q) = reduce(num, den);
    // Quarter turns are returned exactly.
    if r == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if 4 * r == q {
        return Ok(Complex64::new(0.0, 1.0));
    }
    if 4 * r == -q {
        return Ok(Complex64::new(0.0, -1.0));
    }
    if 2 * r == -q {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    let theta = std::f64::consts::TAU * (r as f64 / q as f64);
    let (s, c) = theta.sin_cos();
    Ok(Complex64::new(c, s))
}

pub fn unit_exp_real(x: f64) -> Result<Complex64, NumericsError> {
    if !x.is_finite() {
        return Err(NumericsError::Domain(format!("unit_exp of non-finite {x}")));
    }
    let f = x - x.round();
    let (s, c) = (std::f64::consts::TAU * f).sin_cos();
    Ok(Complex64::new(c, s))
}

/// `e(num/den)` at `p` bits, as `(cos, sin)`.
pub fn unit_exp_hp(num: i128, den: i128, p: usize) -> Result<(BigFloat, BigFloat), NumericsError> {
    if den == 0 {
        return Err(NumericsError::Domain("unit_exp with zero denominator".into()));
    }
    let (r, q) = reduce(num, den);
    let theta = hp::pi(p)
        .mul(&hp::from_i128(2 * r, p), p, hp::RM)
        .div(&hp::from_i128(q, p), p, hp::RM);
    Ok((hp::cos(&theta, p), hp::sin(&theta, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(unit_exp(0, 5).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(unit_exp(1, 4).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(unit_exp(-3, 4).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(unit_exp(5, 10).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_exp(3, -4).unwrap(), Complex64::new(0.0, 1.0));
        assert!(unit_exp(1, 0).is_err());
    }

    proptest! {
        #[test]
        fn matches_direct_angle(num in -1_000_000i128..1_000_000, den in 1i128..100_000) {
            let z = unit_exp(num, den).unwrap();
            let w = unit_exp_real(num as f64 / den as f64).unwrap();
            prop_assert!((z - w).norm() < 1e-9);
            prop_assert!((z.norm() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn high_precision_agrees(num in -10_000i128..10_000, den in 1i128..1000) {
            let z = unit_exp(num, den).unwrap();
            let (c, s) = unit_exp_hp(num, den, 200).unwrap();
            prop_assert!((hp::to_f64(&c) - z.re).abs() < 1e-14);
            prop_assert!((hp::to_f64(&s) - z.im).abs() < 1e-14);
        }
    }
}
