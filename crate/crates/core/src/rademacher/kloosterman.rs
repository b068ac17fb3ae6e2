//! The twisted Kloosterman sums `K_c(n) = Σ_d e(nd/c − 3s(d,c)/2)·e(−cd/(n_g h_g))`.
//!
//! Two routes: the direct sum over `d` (any mode, any `c`) and, for the
//! classical mode with an integral twist shift, a Salié-type closed form that
//! only visits the square roots of `1 − 8m` modulo `8c`.

use std::sync::RwLock;

use astro_float::BigFloat;
use num_complex::Complex64;
use num_integer::Integer;

use super::Multiplier;
use crate::numerics::{hp, twelve_k_dedekind, unit_exp, unit_exp_hp, DedekindMode, NumericsError};

/// Numerator `P` with `3s(d,c)/2 = P/(8c)`.
fn dedekind_phase_numerator(d: i64, c: i64, mode: DedekindMode) -> i128 {
    let f = twelve_k_dedekind(d, c) as i128;
    match mode {
        DedekindMode::Classical => f,
        DedekindMode::PaperLiteral => {
            // 6c·s_lit = d(c−1)(2c−1) − 6c·s − 3c(c−1), and P = 2·(6c·s_lit)
            let (d, c) = (d as i128, c as i128);
            2 * (d * (c - 1) * (2 * c - 1) - f / 2 - 3 * c * (c - 1))
        }
    }
}

/// Phase of the `d`-th term as `num / (8cN)`, `N = n_g h_g`.
fn term_phase(n: i64, c: i64, d: i64, big_n: i64, mode: DedekindMode) -> (i128, i128) {
    let (n128, c128, d128, bn) = (n as i128, c as i128, d as i128, big_n as i128);
    let p = dedekind_phase_numerator(d, c, mode);
    let num = 8 * n128 * d128 * bn - p * bn - 8 * c128 * c128 * d128;
    (num, 8 * c128 * bn)
}

/// Direct evaluation in `f64`.
pub fn partial_kloosterman(
    n: i64,
    c: i64,
    mult: Multiplier,
    mode: DedekindMode,
) -> Result<Complex64, NumericsError> {
    if c < 1 {
        return Err(NumericsError::Domain(format!("Kloosterman modulus must be positive, got {c}")));
    }
    let big_n = mult.ng as i64 * mult.hg as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 0..c {
        if d.gcd(&c) != 1 {
            continue;
        }
        let (num, den) = term_phase(n, c, d, big_n, mode);
        acc += unit_exp(num, den)?;
    }
    Ok(acc)
}

/// Direct evaluation at `p` bits, returned as `(re, im)`.
pub fn partial_kloosterman_hp(
    n: i64,
    c: i64,
    mult: Multiplier,
    mode: DedekindMode,
    p: usize,
) -> Result<(BigFloat, BigFloat), NumericsError> {
    if c < 1 {
        return Err(NumericsError::Domain(format!("Kloosterman modulus must be positive, got {c}")));
    }
    let big_n = mult.ng as i64 * mult.hg as i64;
    let mut re = hp::int(0, p);
    let mut im = hp::int(0, p);
    for d in 0..c {
        if d.gcd(&c) != 1 {
            continue;
        }
        let (num, den) = term_phase(n, c, d, big_n, mode);
        let (cr, ci) = unit_exp_hp(num, den, p)?;
        re = re.add(&cr, p, hp::RM);
        im = im.add(&ci, p, hp::RM);
    }
    Ok((re, im))
}

/// The twist `e(−cd/(n_g h_g))` folded into `n`: with `c = n_g k`,
/// `K_c(n) = K_c(n − c²/(n_g h_g); 1, 1)` whenever the shift is integral.
pub fn twisted_shift(n: i64, c: i64, mult: Multiplier) -> Option<i64> {
    let big_n = mult.ng as i64 * mult.hg as i64;
    let c2 = c.checked_mul(c)?;
    if c2 % big_n != 0 {
        return None;
    }
    n.checked_sub(c2 / big_n)
}

/// Smallest-prime-factor table, grown on demand and shared between threads.
static SPF: RwLock<Vec<u32>> = RwLock::new(Vec::new());

fn ensure_sieve(limit: usize) {
    if SPF.read().expect("sieve lock").len() > limit {
        return;
    }
    let mut guard = SPF.write().expect("sieve lock");
    if guard.len() > limit {
        return;
    }
    let size = (limit + 1).next_power_of_two().max(1 << 16);
    let mut spf = vec![0u32; size];
    for i in 2..size {
        if spf[i] == 0 {
            let mut j = i;
            while j < size {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    *guard = spf;
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64| match out.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => out.push((p, 1)),
    };
    ensure_sieve(n as usize);
    let spf = SPF.read().expect("sieve lock");
    while n > 1 {
        let p = spf[n as usize] as u64;
        push(p);
        n /= p;
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Square roots of `a` modulo an odd prime `p` (Tonelli–Shanks), or modulo 2.
fn sqrt_mod_prime(a: u64, p: u64) -> Vec<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return vec![a];
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return vec![];
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    if r == p - r {
        vec![r]
    } else {
        vec![r, p - r]
    }
}

/// All square roots of `a` modulo `p^e`, lifted one power at a time over
/// every candidate (this also covers `p = 2` and `p | a`).
fn sqrt_mod_prime_power(a: i64, p: u64, e: u32) -> Vec<u64> {
    let mut roots = sqrt_mod_prime(a.rem_euclid(p as i64) as u64, p);
    let mut pk = p;
    for _ in 1..e {
        let next = pk * p;
        let target = a.rem_euclid(next as i64) as u64;
        let mut lifted = Vec::with_capacity(roots.len() * 2);
        for &r in &roots {
            for t in 0..p {
                let y = r + t * pk;
                if mul_mod(y, y, next) == target {
                    lifted.push(y);
                }
            }
        }
        roots = lifted;
        pk = next;
        if roots.is_empty() {
            break;
        }
    }
    roots
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// `K(m, c) = Σ_{d mod c, (d,c)=1} e((8md − 12c·s(d,c))/(8c))` through
/// `K(m, c) = (√c/2)·Σ χ₋₄(y)·sin(πy/(2c))`, `y mod 4c`, `y² ≡ 1 − 8m (mod 8c)`.
pub fn kloosterman_salie(m: i64, c: i64) -> f64 {
    debug_assert!(c >= 1);
    let target = 1 - 8 * m;
    let mut roots: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    let mut parts = factor(c as u64);
    match parts.first_mut() {
        Some((2, e)) => *e += 3,
        _ => parts.insert(0, (2, 3)),
    }
    for (p, e) in parts {
        let pe = p.pow(e);
        let local = sqrt_mod_prime_power(target, p, e);
        if local.is_empty() {
            return 0.0;
        }
        let inv = inverse_mod(modulus % pe, pe);
        let mut combined = Vec::with_capacity(roots.len() * local.len());
        for &r0 in &roots {
            for &r1 in &local {
                let diff = (r1 + pe - r0 % pe) % pe;
                combined.push(r0 + modulus * mul_mod(diff, inv, pe));
            }
        }
        roots = combined;
        modulus *= pe;
    }
    let four_c = 4 * c as u64;
    let mut s = 0.0;
    for y in roots {
        if y >= four_c {
            continue;
        }
        let chi = match y % 4 {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
        if chi != 0.0 {
            s += chi * (std::f64::consts::PI * y as f64 / (2 * c) as f64).sin();
        }
    }
    (c as f64).sqrt() / 2.0 * s
}

/// Real part of `K_c(n)` by the fastest route valid for the inputs.
pub fn kloosterman_real(n: i64, c: i64, mult: Multiplier, mode: DedekindMode) -> Result<f64, NumericsError> {
    if mode == DedekindMode::Classical {
        if let Some(m) = twisted_shift(n, c, mult) {
            return Ok(kloosterman_salie(m, c));
        }
    }
    Ok(partial_kloosterman(n, c, mult, mode)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ONE: Multiplier = Multiplier { ng: 1, hg: 1 };

    #[test]
    fn first_moduli() {
        // c = 1 has the single term d = 0 with s(0, 1) = 0.
        let k = partial_kloosterman(1, 1, ONE, DedekindMode::Classical).unwrap();
        assert!((k - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((kloosterman_salie(1, 1) - 1.0).abs() < 1e-12);
        // c = 2: d = 1, 12·2·s(1,2) = 0, phase (8n − 16)/16 = n/2 − 1.
        let k = partial_kloosterman(3, 2, ONE, DedekindMode::Classical).unwrap();
        assert!((k - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn modular_square_roots() {
        for (a, p, e) in [(1i64, 2u64, 5u32), (17, 2, 6), (-7, 2, 7), (4, 3, 3), (2, 7, 2), (9, 3, 4), (0, 5, 2)] {
            let pe = p.pow(e);
            let mut brute: Vec<u64> = (0..pe).filter(|&y| mul_mod(y, y, pe) == a.rem_euclid(pe as i64) as u64).collect();
            let mut got = sqrt_mod_prime_power(a, p, e);
            brute.sort_unstable();
            got.sort_unstable();
            got.dedup();
            assert_eq!(got, brute, "a={a} p^e={p}^{e}");
        }
    }

    proptest! {
        #[test]
        fn salie_matches_direct(m in -400i64..400, c in 1i64..300) {
            let direct = partial_kloosterman(m, c, ONE, DedekindMode::Classical).unwrap();
            let closed = kloosterman_salie(m, c);
            prop_assert!((direct.re - closed).abs() < 1e-8 * (c as f64).max(1.0), "m={} c={}: {} vs {}", m, c, direct.re, closed);
        }

        #[test]
        fn twist_folds_into_shift(n in 1i64..60, k in 1i64..40, level in prop::sample::select(vec![(2u32, 1u32), (2, 2), (3, 1), (3, 3), (4, 2), (6, 6), (23, 1)])) {
            let mult = Multiplier { ng: level.0, hg: level.1 };
            let c = level.0 as i64 * k;
            if let Some(m) = twisted_shift(n, c, mult) {
                let twisted = partial_kloosterman(n, c, mult, DedekindMode::Classical).unwrap();
                let shifted = partial_kloosterman(m, c, ONE, DedekindMode::Classical).unwrap();
                prop_assert!((twisted - shifted).norm() < 1e-8 * c as f64);
                prop_assert!((kloosterman_real(n, c, mult, DedekindMode::Classical).unwrap() - twisted.re).abs() < 1e-8 * c as f64);
            }
        }

        #[test]
        fn high_precision_direct_agrees(n in 1i64..30, c in 1i64..60) {
            let z = partial_kloosterman(n, c, ONE, DedekindMode::PaperLiteral).unwrap();
            let (re, im) = partial_kloosterman_hp(n, c, ONE, DedekindMode::PaperLiteral, 160).unwrap();
            prop_assert!((hp::to_f64(&re) - z.re).abs() < 1e-10);
            prop_assert!((hp::to_f64(&im) - z.im).abs() < 1e-10);
        }
    }
}
