//! Shared fixtures for the benches.

use std::sync::Arc;

use moonshine_core::chartab;
use moonshine_core::decomp;
use moonshine_core::rademacher::{CoefficientCache, RademacherProvider, TruncationPolicy};
use moonshine_core::{CoefficientValue, PrecisionContext};

/// An M24 provider backed by an in-memory cache.
pub fn m24_provider() -> RademacherProvider {
    RademacherProvider::new(
        chartab::m24(),
        TruncationPolicy::default(),
        PrecisionContext::default(),
        Arc::new(CoefficientCache::in_memory()),
    )
    .expect("gate passes")
}

/// Certified class coefficients of M24 at grade `n`.
pub fn m24_coefficients(provider: &RademacherProvider, n: i64) -> Vec<CoefficientValue> {
    decomp::class_coefficients(chartab::m24(), provider, n).expect("coefficients converge")
}
