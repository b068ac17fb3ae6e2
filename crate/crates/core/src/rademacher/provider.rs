use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use super::cache::{CacheEntry, CoefficientCache};
use super::engine::{coefficient_with, polar_coefficient, CoefficientRecord, Conventions, TruncationPolicy};
use super::gate::{resolve_conventions, GateReport};
use super::{ClassParams, Multiplier, RademacherError};
use crate::chartab::CharacterTable;
use crate::numerics::{hp, PrecisionContext};
use crate::provider::{CoefficientProvider, CoefficientValue};

/// `c_g(n)` with the gate-resolved conventions.
pub fn coefficient(
    params: &ClassParams,
    n: i64,
    policy: &TruncationPolicy,
    ctx: &PrecisionContext,
) -> Result<CoefficientRecord, RademacherError> {
    let gate = resolve_conventions(ctx)?;
    coefficient_with(params, n, policy, ctx, gate.conventions)
}

fn exact_record(params: &ClassParams, n: i64, value: i128, conv: Conventions) -> CoefficientRecord {
    CoefficientRecord {
        class_name: params.class_name.clone(),
        n,
        value,
        residual: 0.0,
        c_max_used: 0,
        dedekind_mode_used: conv.mode,
        raw_sum: value.to_string(),
    }
}

/// `value + residual` to 40 digits. Fresh and cached records both use this, so
/// output does not depend on whether the cache was warm.
fn raw_rendering(value: i128, residual: f64) -> String {
    let p = hp::bits_for_digits(60);
    let raw = hp::from_i128(value, p).add(&hp::from_f64(residual, p), p, hp::RM);
    hp::to_decimal(&raw, 40)
}

fn from_cache(e: &CacheEntry) -> CoefficientRecord {
    CoefficientRecord {
        class_name: e.class.clone(),
        n: e.n,
        value: e.value,
        residual: e.residual,
        c_max_used: e.c_max_used,
        dedekind_mode_used: e.mode,
        raw_sum: raw_rendering(e.value, e.residual),
    }
}

type Memo = RwLock<HashMap<(Multiplier, i64), CoefficientRecord>>;

#[allow(clippy::too_many_arguments)]
fn certified(
    group: &str,
    params: &ClassParams,
    n: i64,
    policy: &TruncationPolicy,
    ctx: &PrecisionContext,
    conv: Conventions,
    cache: &CoefficientCache,
    memo: Option<&Memo>,
) -> Result<CoefficientRecord, RademacherError> {
    match n {
        i64::MIN..=-2 => return Err(RademacherError::GradeOutOfRange { n }),
        -1 => return Ok(exact_record(params, n, polar_coefficient(params), conv)),
        // The series has no term with q-exponent between the polar −1/8 and 7/8.
        0 => return Ok(exact_record(params, n, 0, conv)),
        _ => {}
    }
    if let Some(e) = cache.lookup(group, &params.class_name, n, policy.residual_tolerance) {
        return Ok(from_cache(&e));
    }
    let key = (params.multiplier(), n);
    let shared = memo.and_then(|m| m.read().expect("memo lock").get(&key).cloned());
    let rec = match shared {
        Some(r) => CoefficientRecord {
            class_name: params.class_name.clone(),
            ..r
        },
        None => {
            let mut r = coefficient_with(params, n, policy, ctx, conv)?;
            r.raw_sum = raw_rendering(r.value, r.residual);
            if r.residual.abs() > policy.warn_residual {
                log::warn!(
                    "{} n={n}: accepted value {} with residual {:.3} at c_max={}",
                    r.class_name,
                    r.value,
                    r.residual,
                    r.c_max_used
                );
            }
            r
        }
    };
    if let Some(m) = memo {
        m.write().expect("memo lock").insert(key, rec.clone());
    }
    cache.insert(CacheEntry {
        group: group.to_string(),
        class: params.class_name.clone(),
        n,
        value: rec.value,
        residual: rec.residual,
        c_max_used: rec.c_max_used,
        mode: rec.dedekind_mode_used,
    })?;
    Ok(rec)
}

/// Cache-first evaluation of `n_lo..=n_hi`; `n = −1` is the polar term.
pub fn coefficient_range(
    group: &str,
    params: &ClassParams,
    grades: std::ops::RangeInclusive<i64>,
    policy: &TruncationPolicy,
    ctx: &PrecisionContext,
    cache: &CoefficientCache,
) -> Result<Vec<CoefficientRecord>, RademacherError> {
    if *grades.start() < -1 {
        return Err(RademacherError::GradeOutOfRange { n: *grades.start() });
    }
    let conv = resolve_conventions(ctx)?.conventions;
    grades
        .map(|n| certified(group, params, n, policy, ctx, conv, cache, None))
        .collect()
}

/// Coefficients for every class of a table with `(n_g, h_g)` data.
pub struct RademacherProvider {
    group: String,
    classes: HashMap<String, ClassParams>,
    policy: TruncationPolicy,
    ctx: PrecisionContext,
    gate: GateReport,
    cache: Arc<CoefficientCache>,
    memo: Memo,
}

impl RademacherProvider {
    pub fn new(
        table: &CharacterTable,
        policy: TruncationPolicy,
        ctx: PrecisionContext,
        cache: Arc<CoefficientCache>,
    ) -> Result<Self, RademacherError> {
        policy.validate()?;
        let gate = resolve_conventions(&ctx)?;
        Ok(Self::assemble(table, policy, ctx, cache, gate))
    }

    /// Skips the gate and uses `conv` as given.
    pub fn with_conventions(
        table: &CharacterTable,
        policy: TruncationPolicy,
        ctx: PrecisionContext,
        cache: Arc<CoefficientCache>,
        conv: Conventions,
    ) -> Self {
        let gate = GateReport {
            conventions: conv,
            trials: Vec::new(),
        };
        Self::assemble(table, policy, ctx, cache, gate)
    }

    fn assemble(
        table: &CharacterTable,
        policy: TruncationPolicy,
        ctx: PrecisionContext,
        cache: Arc<CoefficientCache>,
        gate: GateReport,
    ) -> Self {
        let classes = table
            .classes
            .iter()
            .map(|c| (c.name.clone(), ClassParams::new(&c.name, c.ng, c.hg)))
            .collect();
        RademacherProvider {
            group: table.group_name.clone(),
            classes,
            policy,
            ctx,
            gate,
            cache,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn gate(&self) -> &GateReport {
        &self.gate
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn cache(&self) -> &Arc<CoefficientCache> {
        &self.cache
    }

    pub fn params(&self, class: &str) -> Result<&ClassParams, RademacherError> {
        self.classes
            .get(class)
            .ok_or_else(|| RademacherError::UnknownClass(class.to_string()))
    }

    pub fn record(&self, class: &str, n: i64) -> Result<CoefficientRecord, RademacherError> {
        let params = self.params(class)?;
        certified(
            &self.group,
            params,
            n,
            &self.policy,
            &self.ctx,
            self.gate.conventions,
            &self.cache,
            Some(&self.memo),
        )
    }

    pub fn records(
        &self,
        class: &str,
        grades: std::ops::RangeInclusive<i64>,
    ) -> Result<Vec<CoefficientRecord>, RademacherError> {
        grades.map(|n| self.record(class, n)).collect()
    }
}

impl CoefficientProvider for RademacherProvider {
    fn group_name(&self) -> &str {
        &self.group
    }

    fn has_class(&self, class: &str) -> bool {
        self.classes.contains_key(class)
    }

    fn coefficient(&self, class: &str, n: i64) -> Result<CoefficientValue, RademacherError> {
        let r = self.record(class, n)?;
        Ok(CoefficientValue {
            value: r.value,
            residual: r.residual,
        })
    }

    /// Evaluates every `(class, n)` pair on `jobs` threads. Classes sharing
    /// `(n_g, h_g)` are computed once.
    fn prefetch(&self, classes: &[String], grades: &[i64], jobs: usize) -> Result<(), RademacherError> {
        let mut seen = std::collections::HashSet::new();
        let mut work = Vec::new();
        for class in classes {
            let m = self.params(class)?.multiplier();
            for &n in grades {
                if seen.insert((m, n)) {
                    work.push((class.clone(), n));
                }
            }
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| RademacherError::Cache(format!("thread pool: {e}")))?;
        pool.install(|| {
            work.par_iter()
                .map(|(class, n)| self.record(class, *n).map(|_| ()))
                .collect::<Result<Vec<()>, _>>()
        })?;
        Ok(())
    }
}
