//! One-time choice of the Dedekind mode and the modulus range.
//!
//! Integrality decides: the mode is the one whose `1A` sums at `n = 1..5`
//! land on integers, the range is the one whose sums for a few `n_g > 1`
//! classes do. The gate always runs under the default truncation policy so
//! its outcome does not depend on the caller's tolerances.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::engine::{evaluate, Conventions, LevelRestriction, TruncationPolicy};
use super::{Multiplier, RademacherError};
use crate::numerics::{DedekindMode, ModeSelection, PrecisionContext};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTrial {
    pub conventions: Conventions,
    pub passed: bool,
    /// Largest |residual| over the probes that produced a value.
    pub max_residual: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub conventions: Conventions,
    pub trials: Vec<GateTrial>,
}

const MODE_PROBES: [(Multiplier, &str); 1] = [(Multiplier::IDENTITY, "1A")];
const LEVEL_PROBES: [(Multiplier, &str); 4] = [
    (Multiplier { ng: 2, hg: 1 }, "2A"),
    (Multiplier { ng: 2, hg: 2 }, "2B"),
    (Multiplier { ng: 3, hg: 1 }, "3A"),
    (Multiplier { ng: 3, hg: 3 }, "3B"),
];

fn trial(
    conv: Conventions,
    probes: &[(Multiplier, &str)],
    grades: std::ops::RangeInclusive<i64>,
    ctx: &PrecisionContext,
) -> GateTrial {
    let policy = TruncationPolicy::default();
    let mut max_residual: f64 = 0.0;
    for &(mult, name) in probes {
        for n in grades.clone() {
            match evaluate(name, mult, n, &policy, ctx, conv) {
                Ok(e) if e.converged && (mult != Multiplier::IDENTITY || e.value > 0) => {
                    max_residual = max_residual.max(e.residual.abs());
                }
                Ok(e) => {
                    return GateTrial {
                        conventions: conv,
                        passed: false,
                        max_residual: max_residual.max(e.residual.abs()),
                        note: if e.converged {
                            format!("{name} n={n}: graded dimension {} is not positive", e.value)
                        } else {
                            format!("{name} n={n}: unstable, residual {:.3e}", e.residual)
                        },
                    }
                }
                Err(err) => {
                    return GateTrial {
                        conventions: conv,
                        passed: false,
                        max_residual,
                        note: err.to_string(),
                    }
                }
            }
        }
    }
    GateTrial {
        conventions: conv,
        passed: true,
        max_residual,
        note: String::new(),
    }
}

static RESOLVED: Mutex<Option<HashMap<ModeSelection, GateReport>>> = Mutex::new(None);

/// Resolves the conventions for `ctx.dedekind_mode`, once per process.
pub fn resolve_conventions(ctx: &PrecisionContext) -> Result<GateReport, RademacherError> {
    let key = ctx.dedekind_mode;
    if let Some(r) = RESOLVED.lock().expect("gate lock").as_ref().and_then(|m| m.get(&key)) {
        return Ok(r.clone());
    }
    let mut trials = Vec::new();
    let modes: Vec<DedekindMode> = match key.fixed() {
        Some(m) => vec![m],
        None => vec![DedekindMode::Classical, DedekindMode::PaperLiteral],
    };
    let mut mode = None;
    for m in modes {
        let conv = Conventions {
            mode: m,
            restriction: LevelRestriction::MultiplesOfLevel,
        };
        let t = trial(conv, &MODE_PROBES, 1..=5, ctx);
        let ok = t.passed;
        trials.push(t);
        if ok {
            mode = Some(m);
            break;
        }
    }
    let Some(mode) = mode else {
        return Err(RademacherError::GateFailed(summary(&trials)));
    };
    let mut chosen = None;
    for restriction in [LevelRestriction::MultiplesOfLevel, LevelRestriction::AllModuli] {
        let conv = Conventions { mode, restriction };
        let t = trial(conv, &LEVEL_PROBES, 1..=3, ctx);
        let ok = t.passed;
        trials.push(t);
        if ok {
            chosen = Some(conv);
            break;
        }
    }
    let Some(conventions) = chosen else {
        return Err(RademacherError::GateFailed(summary(&trials)));
    };
    let report = GateReport { conventions, trials };
    RESOLVED
        .lock()
        .expect("gate lock")
        .get_or_insert_with(HashMap::new)
        .insert(key, report.clone());
    Ok(report)
}

fn summary(trials: &[GateTrial]) -> String {
    trials
        .iter()
        .map(|t| format!("{:?}/{:?}: {}", t.conventions.mode, t.conventions.restriction, t.note))
        .collect::<Vec<_>>()
        .join("; ")
}
