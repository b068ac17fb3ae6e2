use num_integer::Integer;
use num_rational::Ratio;

use super::{DedekindMode, NumericsError};

/// `12k·s(h,k)` for the classical sum, by reciprocity. Always an integer.
pub fn twelve_k_dedekind(h: i64, k: i64) -> i64 {
    debug_assert!(k >= 1);
    let h = h.rem_euclid(k);
    if h == 0 || k == 1 {
        return 0;
    }
    if h == 1 {
        return (k - 1) * (k - 2);
    }
    // 12hk(s(h,k) + s(k,h)) = h² + k² + 1 − 3hk
    let inner = twelve_k_dedekind(k % h, h);
    (h * h + k * k + 1 - 3 * h * k - k * inner) / h
}

fn check_args(d: i64, c: i64) -> Result<(), NumericsError> {
    if c < 1 {
        return Err(NumericsError::Domain(format!("Dedekind sum needs c >= 1, got {c}")));
    }
    if d.gcd(&c) != 1 {
        return Err(NumericsError::Domain(format!("Dedekind sum needs gcd(d,c) = 1, got ({d},{c})")));
    }
    Ok(())
}

/// Exact `s(d, c)` in the requested mode, via reciprocity.
pub fn dedekind_sum(d: i64, c: i64, mode: DedekindMode) -> Result<Ratio<i64>, NumericsError> {
    check_args(d, c)?;
    let classical = Ratio::new(twelve_k_dedekind(d, c), 12 * c);
    Ok(match mode {
        DedekindMode::Classical => classical,
        DedekindMode::PaperLiteral => {
            // Σ (m/c)(⌊md/c⌋ − 1/2) = d(c−1)(2c−1)/(6c) − s(d,c) − (c−1)/2
            Ratio::new(d * (c - 1) * (2 * c - 1), 6 * c) - classical - Ratio::new(c - 1, 2)
        }
    })
}

/// `s(d, c)` summed term by term from the definition; O(c).
pub fn dedekind_sum_direct(d: i64, c: i64, mode: DedekindMode) -> Result<Ratio<i64>, NumericsError> {
    check_args(d, c)?;
    let mut acc = Ratio::from_integer(0);
    for m in 1..c {
        let (q, r) = (m * d).div_mod_floor(&c);
        if r == 0 {
            continue;
        }
        let term = match mode {
            // ((m/c))·((md/c))
            DedekindMode::Classical => {
                Ratio::new(2 * m - c, 2 * c) * Ratio::new(2 * r - c, 2 * c)
            }
            // (m/c)·(⌊md/c⌋ − 1/2)
            DedekindMode::PaperLiteral => Ratio::new(m, c) * Ratio::new(2 * q - 1, 2),
        };
        acc += term;
    }
    Ok(acc)
}
