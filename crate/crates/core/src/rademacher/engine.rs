//! Truncated Rademacher series for `c_g(n)`.
//!
//! `c_g(n) = 4π Σ_c K_c(n)·I_{1/2}(π√(8n−1)/(2c)) / (c·(8n−1)^{1/4})`, summed
//! over `c` in the level progression. The sign in front is the one that makes
//! `c_{1A}(n)` the (positive) graded dimension: the constant phases of `ε^{-3}`
//! and of the weight factor multiply to −1 and are absorbed here.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use super::kloosterman::{kloosterman_real, partial_kloosterman, partial_kloosterman_hp};
use super::{ClassParams, Multiplier, RademacherError};
use crate::numerics::{bessel_i_half, bessel_i_half_hp, hp, DedekindMode, PrecisionContext};

/// Terms with `π√(8n−1)/(2c)` above this are summed at high precision.
const HP_ARGUMENT: f64 = 8.0;
/// Smoothing weights are exactly 1 below this many widths, and the sum stops
/// this many widths above the centre.
const PLATEAU_Z: f64 = -6.0;
const CUTOFF_Z: f64 = 6.0;

/// Which moduli `c` enter the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRestriction {
    /// `c ≡ 0 (mod n_g)`: the cusp-at-infinity cosets of `Γ₀(n_g)`.
    MultiplesOfLevel,
    AllModuli,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Smoothing {
    /// Plain partial sums over `c ≤ c_max`.
    Sharp,
    /// Weights `½·erfc(ln(c/X)/(w√2))` with `X = c_max·e^{−6w}`: a smooth
    /// cutoff in `log c` that damps the oscillating tail of the
    /// conditionally convergent series.
    LogGaussian { width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// First cutoff, in units of the level: the sum starts at `c_max = c_max_initial·n_g`.
    pub c_max_initial: u64,
    /// Last cutoff, same units.
    pub c_max_limit: u64,
    pub growth_factor: u64,
    pub residual_tolerance: f64,
    pub stability_window: usize,
    /// Residuals above this are logged even when accepted.
    pub warn_residual: f64,
    pub smoothing: Smoothing,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            c_max_initial: 2048,
            c_max_limit: 65536,
            growth_factor: 2,
            residual_tolerance: 0.25,
            stability_window: 3,
            warn_residual: 0.1,
            smoothing: Smoothing::LogGaussian { width: 0.4 },
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), RademacherError> {
        let bad = |m: &str| Err(RademacherError::InvalidPolicy(m.to_string()));
        if self.c_max_initial == 0 || self.c_max_initial > self.c_max_limit {
            return bad("need 0 < c_max_initial <= c_max_limit");
        }
        if self.growth_factor < 2 {
            return bad("growth_factor must be at least 2");
        }
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance < 0.5) {
            return bad("residual_tolerance must lie in (0, 0.5)");
        }
        if self.stability_window == 0 {
            return bad("stability_window must be positive");
        }
        if let Smoothing::LogGaussian { width } = self.smoothing {
            if !(width > 0.0 && width.is_finite()) {
                return bad("smoothing width must be positive");
            }
        }
        Ok(())
    }

    /// The cutoffs visited, in actual moduli.
    pub fn schedule(&self, ng: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut c = self.c_max_initial;
        loop {
            out.push(c * ng);
            if c >= self.c_max_limit {
                break;
            }
            c = (c * self.growth_factor).min(self.c_max_limit);
        }
        out
    }
}

/// Dedekind mode and modulus range, fixed once per process by the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub mode: DedekindMode,
    pub restriction: LevelRestriction,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            mode: DedekindMode::Classical,
            restriction: LevelRestriction::MultiplesOfLevel,
        }
    }
}

pub(crate) mod value_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
pub(crate) use value_string as i128_string;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub class_name: String,
    pub n: i64,
    #[serde(with = "value_string")]
    pub value: i128,
    /// `raw_sum − value`.
    pub residual: f64,
    pub c_max_used: u64,
    pub dedekind_mode_used: DedekindMode,
    /// Decimal rendering of the accepted partial sum.
    pub raw_sum: String,
}

/// Unsigned leading magnitude `C_{n,g}·exp(D_n/n_g)`,
/// `C_{n,g} = 4/(√n_g·√(8n−1))`, `D_n = π√(8n−1)/2`.
pub fn asymptotic_leading(mult: Multiplier, n: i64) -> f64 {
    let r = ((8 * n - 1) as f64).sqrt();
    let ng = mult.ng as f64;
    4.0 / (ng.sqrt() * r) * (std::f64::consts::PI * r / (2.0 * ng)).exp()
}

/// The `q^{−1/8}` coefficient, the same for every class.
pub fn polar_coefficient(_params: &ClassParams) -> i128 {
    -2
}

struct Tail {
    /// Moduli and real term values for the `f64` part of the sum.
    terms: Vec<(u64, f64)>,
    imag: f64,
    next_k: u64,
}

/// Everything an accepted or failed evaluation reports.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    pub value: i128,
    pub residual: f64,
    pub raw: BigFloat,
    pub raw_digits: u32,
    pub c_max: u64,
    pub converged: bool,
    pub history: Vec<i128>,
}

fn weight(smoothing: Smoothing, c: u64, c_max: u64) -> f64 {
    match smoothing {
        Smoothing::Sharp => {
            if c <= c_max {
                1.0
            } else {
                0.0
            }
        }
        Smoothing::LogGaussian { width } => {
            let x = c_max as f64 * (-CUTOFF_Z * width).exp();
            let z = (c as f64 / x).ln() / width;
            if z < PLATEAU_Z {
                1.0
            } else if z > CUTOFF_Z {
                0.0
            } else {
                0.5 * statrs::function::erf::erfc(z / std::f64::consts::SQRT_2)
            }
        }
    }
}

/// Smallest cutoff that keeps the first `c_hp` moduli on the weight plateau.
fn plateau_cutoff(smoothing: Smoothing, c_hp: u64) -> u64 {
    match smoothing {
        Smoothing::Sharp => c_hp,
        Smoothing::LogGaussian { width } => {
            (c_hp as f64 * ((CUTOFF_Z - PLATEAU_Z) * width).exp()).ceil() as u64
        }
    }
}

/// Runs the cutoff schedule for one class and grade and reports the first
/// accepted step, or the last one if none was accepted.
pub(crate) fn evaluate(
    class_name: &str,
    mult: Multiplier,
    n: i64,
    policy: &TruncationPolicy,
    ctx: &PrecisionContext,
    conv: Conventions,
) -> Result<Evaluation, RademacherError> {
    if n < 1 {
        return Err(RademacherError::GradeOutOfRange { n });
    }
    policy.validate()?;
    let step = match conv.restriction {
        LevelRestriction::MultiplesOfLevel => mult.ng as u64,
        LevelRestriction::AllModuli => 1,
    };
    let p = ctx.bits_for_grade(n);
    let digits = ctx.digits_for_grade(n);
    let eight_n = (8 * n - 1) as f64;
    let d_n = std::f64::consts::PI * eight_n.sqrt() / 2.0;

    // High-precision head: the first modulus and any with a large Bessel argument.
    let mut c_hp = step;
    while ((c_hp + step) as f64) < d_n / HP_ARGUMENT {
        c_hp += step;
    }
    let pi = hp::pi(p);
    let sqrt8 = hp::int(8 * n - 1, p).sqrt(p, hp::RM);
    let quarter = sqrt8.sqrt(p, hp::RM);
    let four_pi = pi.mul(&hp::int(4, p), p, hp::RM);
    let mut head_re = hp::int(0, p);
    let mut head_im = hp::int(0, p);
    let mut c = step;
    while c <= c_hp {
        let (kr, ki) = partial_kloosterman_hp(n, c as i64, mult, conv.mode, p)?;
        let x = pi.mul(&sqrt8, p, hp::RM).div(&hp::int(2 * c as i64, p), p, hp::RM);
        let bes = bessel_i_half_hp(&x, p)?;
        let scale = four_pi
            .mul(&bes, p, hp::RM)
            .div(&hp::int(c as i64, p).mul(&quarter, p, hp::RM), p, hp::RM);
        head_re = head_re.add(&kr.mul(&scale, p, hp::RM), p, hp::RM);
        head_im = head_im.add(&ki.mul(&scale, p, hp::RM), p, hp::RM);
        c += step;
    }
    let head_imag = hp::to_f64(&head_im);

    let mut tail = Tail {
        terms: Vec::new(),
        imag: 0.0,
        next_k: c_hp / step + 1,
    };
    let prefactor = 4.0 * std::f64::consts::PI / eight_n.powf(0.25);
    let extend = |tail: &mut Tail, c_max: u64| -> Result<(), RademacherError> {
        loop {
            let c = tail.next_k * step;
            if c > c_max {
                return Ok(());
            }
            let x = d_n / c as f64;
            let bes = bessel_i_half(x)?;
            let k_re = if conv.mode == DedekindMode::Classical {
                kloosterman_real(n, c as i64, mult, conv.mode)?
            } else {
                let k = partial_kloosterman(n, c as i64, mult, conv.mode)?;
                tail.imag += prefactor * k.im * bes / c as f64;
                k.re
            };
            tail.terms.push((c, prefactor * k_re * bes / c as f64));
            tail.next_k += 1;
        }
    };

    let mut schedule = policy.schedule(step);
    let floor = plateau_cutoff(policy.smoothing, c_hp);
    if schedule[0] < floor {
        schedule.retain(|&c| c > floor);
        schedule.insert(0, floor);
    }
    let mut history: Vec<i128> = Vec::new();
    let mut last: Option<Evaluation> = None;
    for &c_max in &schedule {
        extend(&mut tail, c_max)?;
        let tail_sum: f64 = tail
            .terms
            .iter()
            .map(|&(c, t)| weight(policy.smoothing, c, c_max) * t)
            .sum();
        let raw = head_re.add(&hp::from_f64(tail_sum, p), p, hp::RM);
        let rounded = hp::round_to_int(&raw);
        let value = hp::to_i128(&rounded).ok_or(RademacherError::Overflow { n })?;
        let residual = hp::to_f64(&raw.sub(&rounded, p, hp::RM));
        let imag = head_imag + tail.imag;
        let magnitude = hp::to_f64(&raw).abs().max(1.0);
        if imag.abs() > 1e-10 * magnitude {
            return Err(RademacherError::NonReal {
                class: class_name.to_string(),
                n,
                imag,
            });
        }
        history.push(value);
        let stable = history.len() >= policy.stability_window
            && history[history.len() - policy.stability_window..]
                .iter()
                .all(|&v| v == value);
        let converged = stable && residual.abs() <= policy.residual_tolerance;
        let eval = Evaluation {
            value,
            residual,
            raw,
            raw_digits: digits,
            c_max,
            converged,
            history: history.clone(),
        };
        if converged {
            return Ok(eval);
        }
        last = Some(eval);
    }
    Ok(last.expect("schedule is never empty"))
}

pub(crate) fn record_from(class_name: &str, n: i64, eval: &Evaluation, mode: DedekindMode) -> CoefficientRecord {
    CoefficientRecord {
        class_name: class_name.to_string(),
        n,
        value: eval.value,
        residual: eval.residual,
        c_max_used: eval.c_max,
        dedekind_mode_used: mode,
        raw_sum: hp::to_decimal(&eval.raw, eval.raw_digits),
    }
}

/// `c_g(n)` under fixed conventions; fails with `NonConvergent` when the
/// schedule ends without a stable, tolerance-meeting value.
pub fn coefficient_with(
    params: &ClassParams,
    n: i64,
    policy: &TruncationPolicy,
    ctx: &PrecisionContext,
    conv: Conventions,
) -> Result<CoefficientRecord, RademacherError> {
    let eval = evaluate(&params.class_name, params.multiplier(), n, policy, ctx, conv)?;
    if !eval.converged {
        return Err(RademacherError::NonConvergent {
            class: params.class_name.clone(),
            n,
            raw: hp::to_decimal(&eval.raw, 30),
            residual: eval.residual,
            c_max: eval.c_max,
            history: eval.history,
        });
    }
    Ok(record_from(&params.class_name, n, &eval, conv.mode))
}
