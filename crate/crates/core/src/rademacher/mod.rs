//! Fourier coefficients `c_g(n)` of the `M₂₄` mock modular forms `H_g`, from
//! the truncated Rademacher series, with an integrality gate, adaptive
//! truncation and a persistent cache.

mod cache;
mod engine;
mod gate;
mod kloosterman;
mod provider;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::NumericsError;

pub use cache::{CacheEntry, CacheStats, CoefficientCache};
pub use engine::{
    asymptotic_leading, coefficient_with, polar_coefficient, CoefficientRecord, Conventions, LevelRestriction,
    Smoothing, TruncationPolicy,
};
pub use gate::{resolve_conventions, GateReport, GateTrial};
pub use kloosterman::{
    kloosterman_real, kloosterman_salie, partial_kloosterman, partial_kloosterman_hp, twisted_shift,
};
pub use provider::{coefficient, coefficient_range, RademacherProvider};

pub(crate) use engine::i128_string;

/// The multiplier data `(n_g, h_g)` of a class: level and twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multiplier {
    pub ng: u32,
    pub hg: u32,
}

impl Multiplier {
    pub const IDENTITY: Multiplier = Multiplier { ng: 1, hg: 1 };
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassParams {
    pub class_name: String,
    pub ng: u32,
    pub hg: u32,
}

impl ClassParams {
    pub fn new(class_name: impl Into<String>, ng: u32, hg: u32) -> Self {
        ClassParams {
            class_name: class_name.into(),
            ng,
            hg,
        }
    }

    pub fn multiplier(&self) -> Multiplier {
        Multiplier { ng: self.ng, hg: self.hg }
    }
}

#[derive(Debug, Error)]
pub enum RademacherError {
    #[error("grade {n} is outside the series range (n >= 1)")]
    GradeOutOfRange { n: i64 },
    #[error(
        "class {class}, n = {n}: no stable value by c_max = {c_max} (raw sum {raw}, residual {residual:.3e}, rounded values {history:?})"
    )]
    NonConvergent {
        class: String,
        n: i64,
        raw: String,
        residual: f64,
        c_max: u64,
        history: Vec<i128>,
    },
    #[error("class {class}, n = {n}: raw sum is not real (imaginary part {imag:.3e})")]
    NonReal { class: String, n: i64, imag: f64 },
    #[error("coefficient at n = {n} does not fit in 128 bits")]
    Overflow { n: i64 },
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("no convention passes the integrality gate: {0}")]
    GateFailed(String),
    #[error("coefficient cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
