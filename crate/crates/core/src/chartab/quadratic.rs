//! Exact arithmetic for character values.
//!
//! A [`QuadraticValue`] is `(a + b√d)/2`. Products and sums of values from
//! different quadratic fields are kept as a [`RadicalSum`], a finite sum
//! `Σ q_k·√k` over squarefree `k` with rational `q_k`, where `√k` for `k < 0`
//! means `i√|k|`. Distinct squarefree radicals are linearly independent over
//! `Q`, so a sum is zero exactly when every coefficient is.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::numerics::hp;

/// `(a + b√d)/2`, `d` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticValue {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

impl QuadraticValue {
    pub fn integer(k: i64) -> Self {
        QuadraticValue { a: 2 * k, b: 0, d: 1 }
    }

    /// Problems with the encoding, if any.
    pub fn check(&self) -> Result<(), String> {
        if !is_squarefree(self.d) {
            return Err(format!("radicand {} is not squarefree", self.d));
        }
        if self.d == 1 && self.b != 0 {
            return Err("d = 1 requires b = 0".into());
        }
        // Algebraic integer: a ≡ b (mod 2) when d ≡ 1 (mod 4), both even otherwise.
        let ok = if self.b == 0 {
            self.a % 2 == 0
        } else if self.d.rem_euclid(4) == 1 {
            (self.a - self.b) % 2 == 0
        } else {
            self.a % 2 == 0 && self.b % 2 == 0
        };
        if !ok {
            return Err(format!("({} + {}√{})/2 is not an algebraic integer", self.a, self.b, self.d));
        }
        Ok(())
    }

    pub fn conj(&self) -> Self {
        if self.d < 0 {
            QuadraticValue { b: -self.b, ..*self }
        } else {
            *self
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = (self.d.unsigned_abs() as f64).sqrt() * self.b as f64 / 2.0;
        if self.d < 0 {
            Complex64::new(self.a as f64 / 2.0, r)
        } else {
            Complex64::new(self.a as f64 / 2.0 + r, 0.0)
        }
    }

    pub fn radical(&self) -> RadicalSum {
        let half = |v: i64| BigRational::new(BigInt::from(v), BigInt::from(2));
        let mut s = RadicalSum::rational(half(self.a));
        if self.b != 0 {
            s.add_term(self.d, half(self.b));
        }
        s
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.radical().fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct RadicalSum {
    terms: BTreeMap<i64, BigRational>,
}

/// `√a·√b` for squarefree `a, b` as `(factor, squarefree radicand)`.
fn radical_product(a: i64, b: i64) -> (i64, i64) {
    let g = a.abs().gcd(&b.abs());
    let k = (a / g) * (b / g);
    let sign = if a < 0 && b < 0 { -1 } else { 1 };
    (sign * g, k)
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(1, q);
        s
    }

    pub fn integer(v: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }

    fn add_term(&mut self, radicand: i64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(k, q)| (*k, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 1)
    }

    /// No imaginary radicals.
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|&k| k > 0)
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational_part())
    }

    pub fn conj(&self) -> Self {
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|(&k, q)| (k, if k < 0 { -q.clone() } else { q.clone() }))
                .collect(),
        }
    }

    pub fn real_part(&self) -> Self {
        RadicalSum {
            terms: self.terms.iter().filter(|(&k, _)| k > 0).map(|(&k, q)| (k, q.clone())).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalSum {
            terms: self.terms.iter().map(|(&k, v)| (k, v * q)).collect(),
        }
    }

    pub fn scale_int(&self, v: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(v.clone()))
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (&k, q) in &self.terms {
            let r = (k.unsigned_abs() as f64).sqrt() * q.to_f64().unwrap_or(f64::NAN);
            if k < 0 {
                z.im += r;
            } else {
                z.re += r;
            }
        }
        z
    }

    /// Real part at 256 bits.
    fn real_hp(&self) -> astro_float::BigFloat {
        let p = 256;
        let mut acc = hp::int(0, p);
        for (&k, q) in self.terms.iter().filter(|(&k, _)| k > 0) {
            let num = hp::parse(&q.numer().to_string(), p);
            let den = hp::parse(&q.denom().to_string(), p);
            let root = hp::int(k, p).sqrt(p, hp::RM);
            acc = acc.add(&num.mul(&root, p, hp::RM).div(&den, p, hp::RM), p, hp::RM);
        }
        acc
    }

    /// Sign of the real part. Exact for rational sums and for zero; otherwise
    /// decided at 256 bits, far beyond the separation of the integers involved.
    pub fn real_signum(&self) -> Ordering {
        let re = self.real_part();
        if re.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = re.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let v = re.real_hp();
        if v.is_zero() {
            Ordering::Equal
        } else if v.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Order of the real parts of `self` and `other`.
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        (self - other).real_signum()
    }

    pub fn real_f64(&self) -> f64 {
        if let Some(q) = self.real_part().as_rational() {
            return q.to_f64().unwrap_or(f64::NAN);
        }
        hp::to_f64(&self.real_part().real_hp())
    }
}

impl<'a> Add<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (&k, q) in &rhs.terms {
            out.add_term(k, q.clone());
        }
        out
    }
}

impl<'a> Sub<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (&k, q) in &rhs.terms {
            out.add_term(k, -q.clone());
        }
        out
    }
}

impl<'a> Mul<&'a RadicalSum> for &'a RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (&a, qa) in &self.terms {
            for (&b, qb) in &rhs.terms {
                let (f, k) = radical_product(a, b);
                out.add_term(k, qa * qb * BigRational::from_integer(BigInt::from(f)));
            }
        }
        out
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        self.scale(&-BigRational::one())
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: RadicalSum) -> RadicalSum {
        &self + &rhs
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        &self - &rhs
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, q) in &self.terms {
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "√{k}")?;
            } else {
                write!(f, "{mag}·√{k}")?;
            }
        }
        Ok(())
    }
}
