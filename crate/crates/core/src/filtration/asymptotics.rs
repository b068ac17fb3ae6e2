use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::chain::{direction_vector, first_level, minimizer_set};
use super::FiltrationError;
use crate::chartab::{CharacterTable, RadicalSum};
use crate::rademacher::{asymptotic_leading, Multiplier};

/// Leading-order prediction for the non-free multiplicities `m_i′(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonfreePrediction {
    pub n: i64,
    /// `e_2`, the least non-identity order.
    pub order: u32,
    /// The level-1 minimizer `j′` (smallest index of the minimizing set).
    pub j_prime: usize,
    /// `C_{n,h}·exp(D_n/e_2)` for a class `h` of order `e_2`.
    pub amplitude: f64,
    /// `Σ_{[g] of order e_2} |[g]|·f_i′(g)·sgn c_g(n)`, exact up to the final
    /// conversion.
    pub weighted: Vec<f64>,
    /// `amplitude·weighted/|G|`.
    pub predicted: Vec<f64>,
}

/// `m_i′(n) ~ (C_{n,h} e^{D_n/e_2}/|G|)·Σ_{[g] of order e_2} |[g]| f_i′(g) sgn c_g(n)`
/// with `f_i′ = χ_i − (dim χ_i/dim χ_{j′})·χ_{j′}`.
pub fn nonfree_asymptotic(
    table: &CharacterTable,
    signs: &[Option<i8>],
    n: i64,
) -> Result<NonfreePrediction, FiltrationError> {
    let orders = table.distinct_orders();
    let Some(&e2) = orders.get(1) else {
        return Err(FiltrationError::DegenerateLevel { order: 1 });
    };
    let level = first_level(table);
    let lambda = direction_vector(table, &level, signs)?.raw;
    let js = minimizer_set(table, signs, e2, &level, &lambda)?;
    let jp = js[0];
    let h = table
        .classes
        .iter()
        .find(|c| c.element_order == e2)
        .expect("order comes from the table");
    let amplitude = asymptotic_leading(Multiplier { ng: h.ng, hg: h.hg }, n);
    let dims = table.dims();
    let mut weighted = Vec::with_capacity(dims.len());
    for i in 0..dims.len() {
        // dim_{j′}·f_i′ keeps everything integral; divide once at the end.
        let mut s = RadicalSum::zero();
        for (c, class) in table.classes.iter().enumerate() {
            if class.element_order != e2 {
                continue;
            }
            let sgn = match signs[c] {
                Some(v) => v,
                None => {
                    return Err(FiltrationError::AperiodicClass {
                        class: class.name.clone(),
                        partial: None,
                    })
                }
            };
            let f = &table.value(i, c).scale_int(&BigInt::from(dims[jp]))
                - &table.value(jp, c).scale_int(&BigInt::from(dims[i]));
            s = &s + &f.scale_int(&BigInt::from(class.size as i64 * sgn as i64));
        }
        weighted.push(s.real_f64() / dims[jp] as f64);
    }
    let g = table.group_order as f64;
    let predicted = weighted.iter().map(|w| amplitude * w / g).collect();
    Ok(NonfreePrediction {
        n,
        order: e2,
        j_prime: jp,
        amplitude,
        weighted,
        predicted,
    })
}

/// The `M₂₄` closed form with a free constant `k`:
/// `(−1)^{n+1}·k·e^{(π/4)√(8n−1)}/√(8n−1)·(|2A|/|G|·f_i′(2A) − |2B|/|G|·f_i′(2B))`,
/// `j′ = 1` for even `n` and `2` for odd `n` (as indices, 0 and 1).
pub fn m24_corollary_shape(table: &CharacterTable, n: i64, k: f64) -> Result<Vec<f64>, FiltrationError> {
    let a = table.class_index("2A").ok_or_else(|| FiltrationError::MissingClass("2A".into()))?;
    let b = table.class_index("2B").ok_or_else(|| FiltrationError::MissingClass("2B".into()))?;
    let jp = if n % 2 == 0 { 0 } else { 1 };
    let dims = table.dims();
    let g = table.group_order as f64;
    let r = ((8 * n - 1) as f64).sqrt();
    let pref = if n % 2 == 0 { -1.0 } else { 1.0 } * k * (std::f64::consts::PI / 4.0 * r).exp() / r;
    let f = |i: usize, c: usize| {
        table.irreps[i].values[c].to_complex().re
            - table.irreps[jp].values[c].to_complex().re * dims[i] as f64 / dims[jp] as f64
    };
    let sa = table.classes[a].size as f64 / g;
    let sb = table.classes[b].size as f64 / g;
    Ok((0..dims.len()).map(|i| pref * (sa * f(i, a) - sb * f(i, b))).collect())
}

/// Least-squares `k` in `observed ≈ shape(k = 1)·k` over all supplied grades.
pub fn fit_constant(samples: &[(Vec<f64>, Vec<f64>)]) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (obs, shape) in samples {
        for (o, s) in obs.iter().zip(shape) {
            num += o * s;
            den += s * s;
        }
    }
    (den > 0.0).then(|| num / den)
}
