//! Thin helpers over `astro_float::BigFloat`.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

pub const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
}

pub fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

pub fn bits_for_digits(digits: u32) -> usize {
    // log2(10) < 3.33; round up to a whole word.
    let bits = (digits as usize * 333).div_ceil(100) + 64;
    bits.div_ceil(64) * 64
}

pub fn pi(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(p, RM))
}

pub fn int(v: i64, p: usize) -> BigFloat {
    let mut x = BigFloat::from_i64(v, 64.max(p));
    x.set_precision(p, RM).expect("precision change");
    x
}

pub fn from_i128(v: i128, p: usize) -> BigFloat {
    let hi = BigFloat::from_i64((v >> 64) as i64, p);
    let lo = BigFloat::from_u64(v as u64, p);
    let shift = BigFloat::from_u64(1 << 32, p);
    let shift = shift.mul(&shift, p, RM);
    hi.mul(&shift, p, RM).add(&lo, p, RM)
}

pub fn ratio(num: i64, den: i64, p: usize) -> BigFloat {
    int(num, p).div(&int(den, p), p, RM)
}

pub fn from_f64(v: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(v, p)
}

pub fn sin(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.sin(p, RM, cc))
}

pub fn cos(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.cos(p, RM, cc))
}

pub fn sinh(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.sinh(p, RM, cc))
}

pub fn exp(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.exp(p, RM, cc))
}

pub fn ln(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.ln(p, RM, cc))
}

/// Nearest `f64`. NaN for NaN, signed infinities past the `f64` range.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    match x.as_raw_parts() {
        None => f64::NAN,
        Some((m, _, sign, e, _)) => {
            if x.is_zero() {
                return 0.0;
            }
            let top = m[m.len() - 1] as f64;
            let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
            let mant = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
            let v = mant * 2f64.powi(e);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
    }
}

/// Exact conversion of an integral value, `None` if it does not fit.
pub fn to_i128(x: &BigFloat) -> Option<i128> {
    if x.is_zero() {
        return Some(0);
    }
    let (m, _, sign, e, _) = x.as_raw_parts()?;
    if e <= 0 || e > 127 {
        return None;
    }
    let top = m[m.len() - 1] as u128;
    let next = if m.len() > 1 { m[m.len() - 2] as u128 } else { 0 };
    let bits = (top << 64) | next;
    let mag = (bits >> (128 - e as u32)) as i128;
    Some(if sign == Sign::Neg { -mag } else { mag })
}

pub fn round_to_int(x: &BigFloat) -> BigFloat {
    x.round(0, RM)
}

/// Decimal rendering with `digits` significant digits.
/// Scientific notation with the mantissa truncated to `digits` significant digits.
pub fn to_decimal(x: &BigFloat, digits: u32) -> String {
    let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".to_string());
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s.as_str(), None),
    };
    let mut kept = String::new();
    let mut count = 0;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        kept.push(ch);
    }
    let kept = if kept.contains('.') {
        kept.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        kept
    };
    match exp {
        Some(e) => format!("{kept}e{e}"),
        None => kept,
    }
}

pub fn parse(s: &str, p: usize) -> BigFloat {
    with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc))
}
