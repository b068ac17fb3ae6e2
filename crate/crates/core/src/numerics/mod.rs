//! Exact and high-precision primitives: unit-circle exponentials, the
//! Bessel factor `I_{1/2}`, Dedekind sums, and the precision context that
//! sizes every high-precision evaluation.

mod bessel;
mod dedekind;
pub mod hp;
mod phase;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bessel::{bessel_i_half, bessel_i_half_hp};
pub use dedekind::{dedekind_sum, dedekind_sum_direct, twelve_k_dedekind};
pub use phase::{unit_exp, unit_exp_hp, unit_exp_real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
}

/// How the Dedekind sum inside the multiplier phase is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedekindMode {
    /// `Σ (m/c)·ω(md/c)` with `ω(x) = ⌊x⌋ − 1/2` off the integers.
    PaperLiteral,
    /// `Σ ((m/c))·((md/c))` with the sawtooth `((x))`.
    Classical,
}

/// A Dedekind mode, or a request to let the integrality gate pick one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSelection {
    #[default]
    Auto,
    PaperLiteral,
    Classical,
}

impl ModeSelection {
    pub fn fixed(self) -> Option<DedekindMode> {
        match self {
            ModeSelection::Auto => None,
            ModeSelection::PaperLiteral => Some(DedekindMode::PaperLiteral),
            ModeSelection::Classical => Some(DedekindMode::Classical),
        }
    }
}

pub const MIN_WORKING_DIGITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_digits: u32,
    pub guard_digits: u32,
    pub dedekind_mode: ModeSelection,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            working_digits: 80,
            guard_digits: 20,
            dedekind_mode: ModeSelection::Auto,
        }
    }
}

impl PrecisionContext {
    pub fn new(working_digits: u32) -> Result<Self, NumericsError> {
        if working_digits < MIN_WORKING_DIGITS {
            return Err(NumericsError::Domain(format!(
                "working precision {working_digits} is below the minimum of {MIN_WORKING_DIGITS} digits"
            )));
        }
        Ok(PrecisionContext {
            working_digits,
            ..Default::default()
        })
    }

    /// Decimal digits needed at grade `n`: the leading term of `c_g(n)` has
    /// about `D_n / ln 10` digits, `D_n = π√(8n−1)/2`, and 40 more are kept
    /// below the units digit.
    pub fn digits_for_grade(&self, n: i64) -> u32 {
        let d_n = std::f64::consts::PI * ((8 * n - 1).max(1) as f64).sqrt() / 2.0;
        let needed = (d_n / std::f64::consts::LN_10).ceil() as u32 + 40;
        self.working_digits.max(needed) + self.guard_digits
    }

    pub fn bits_for_grade(&self, n: i64) -> usize {
        hp::bits_for_digits(self.digits_for_grade(n))
    }
}
