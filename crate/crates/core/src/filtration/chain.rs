use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::FiltrationError;
use crate::chartab::{CharacterTable, RadicalSum};
use crate::decomp::MultiplicityVector;

/// The class functions whose order-`e_l` signed sums give the level-`l`
/// direction: `χ` itself at level 1, then one elimination step per level.
/// So the values at level `l ≥ 2` are the functions written `f^{(l−1)}`,
/// and they vanish at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunctionLevel {
    pub level: usize,
    /// `e_l`.
    pub order: u32,
    /// `values[i][g]`; rows outside `active` are not maintained.
    pub values: Vec<Vec<RadicalSum>>,
    /// Irreducibles not yet removed.
    pub active: Vec<usize>,
}

/// The first level: `χ_i` on every class, all irreducibles active.
pub fn first_level(table: &CharacterTable) -> ClassFunctionLevel {
    let k = table.classes.len();
    ClassFunctionLevel {
        level: 1,
        order: 1,
        values: (0..k).map(|i| (0..k).map(|c| table.value(i, c)).collect()).collect(),
        active: (0..k).collect(),
    }
}

/// `Σ_{[g] of order e} |[g]|·f_i(g)·sgn c_g` for each `i` in `rows`; zero elsewhere.
pub fn order_sums(
    table: &CharacterTable,
    values: &[Vec<RadicalSum>],
    rows: &[usize],
    signs: &[Option<i8>],
    order: u32,
) -> Result<Vec<RadicalSum>, FiltrationError> {
    let mut out = vec![RadicalSum::zero(); values.len()];
    for (c, class) in table.classes.iter().enumerate() {
        if class.element_order != order {
            continue;
        }
        let s = match signs[c] {
            Some(s) => s,
            None if rows.iter().all(|&i| values[i][c].is_zero()) => continue,
            None => {
                return Err(FiltrationError::AperiodicClass {
                    class: class.name.clone(),
                    partial: None,
                })
            }
        };
        if s == 0 {
            continue;
        }
        let w = BigInt::from(class.size as i64 * s as i64);
        for &i in rows {
            out[i] = &out[i] + &values[i][c].scale_int(&w);
        }
    }
    Ok(out)
}

/// A level direction: the raw signed sums and, when they are commensurable,
/// the primitive nonnegative integer vector along them.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub raw: Vec<RadicalSum>,
    /// `raw` scaled so its smallest positive entry is 1.
    pub normalized: Vec<f64>,
    pub canonical: Option<Vec<i128>>,
    /// Active entries with negative raw value; zeroed in the direction.
    pub negative: Vec<usize>,
}

impl Direction {
    pub fn support(&self) -> Vec<usize> {
        (0..self.raw.len())
            .filter(|&i| !self.negative.contains(&i) && self.raw[i].real_signum() == Ordering::Greater)
            .collect()
    }
}

/// Primitive integer vector with the same direction as a rational vector
/// with nonnegative entries.
pub fn primitive_direction(v: &[BigRational]) -> Vec<i128> {
    let lcm = v.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    ints.iter()
        .map(|x| if g.is_zero() { 0 } else { (x / &g).to_i128().expect("direction entry fits in 128 bits") })
        .collect()
}

/// The level-`l` direction over the active irreducibles.
pub fn direction_vector(
    table: &CharacterTable,
    level: &ClassFunctionLevel,
    signs: &[Option<i8>],
) -> Result<Direction, FiltrationError> {
    let raw = order_sums(table, &level.values, &level.active, signs, level.order)?;
    if level.active.iter().all(|&i| raw[i].is_zero()) {
        return Err(FiltrationError::DegenerateLevel { order: level.order });
    }
    let negative: Vec<usize> = level
        .active
        .iter()
        .copied()
        .filter(|&i| raw[i].real_signum() == Ordering::Less)
        .collect();
    let kept: Vec<RadicalSum> = raw
        .iter()
        .enumerate()
        .map(|(i, v)| if negative.contains(&i) { RadicalSum::zero() } else { v.real_part() })
        .collect();
    let min_pos = kept
        .iter()
        .map(RadicalSum::real_f64)
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let normalized = kept
        .iter()
        .map(|v| if min_pos.is_finite() { v.real_f64() / min_pos } else { 0.0 })
        .collect();
    let canonical = kept
        .iter()
        .map(RadicalSum::as_rational)
        .collect::<Option<Vec<_>>>()
        .map(|q| primitive_direction(&q));
    Ok(Direction {
        raw,
        normalized,
        canonical,
        negative,
    })
}

/// The irreducibles among `candidates` minimizing `μ_j/λ_j`, where `μ` are the
/// order-`order` signed sums of `level` and `λ` the current direction.
/// `DegenerateLevel` when the order contributes nothing.
pub fn minimizer_set(
    table: &CharacterTable,
    signs: &[Option<i8>],
    order: u32,
    level: &ClassFunctionLevel,
    lambda: &[RadicalSum],
) -> Result<Vec<usize>, FiltrationError> {
    let candidates: Vec<usize> = level
        .active
        .iter()
        .copied()
        .filter(|&i| lambda[i].real_signum() == Ordering::Greater)
        .collect();
    if candidates.is_empty() {
        return Err(FiltrationError::DegenerateLevel { order: level.order });
    }
    let mu = order_sums(table, &level.values, &candidates, signs, order)?;
    if candidates.iter().all(|&i| mu[i].real_part().is_zero()) {
        return Err(FiltrationError::DegenerateLevel { order });
    }
    // μ_a/λ_a < μ_b/λ_b  ⇔  μ_a·λ_b < μ_b·λ_a for positive λ.
    let cmp = |a: usize, b: usize| (&mu[a] * &lambda[b]).cmp_real(&(&mu[b] * &lambda[a]));
    let mut best = vec![candidates[0]];
    for &i in &candidates[1..] {
        match cmp(i, best[0]) {
            Ordering::Less => best = vec![i],
            Ordering::Equal => best.push(i),
            Ordering::Greater => {}
        }
    }
    Ok(best)
}

/// One elimination step: `f_i ← λ_j·f_i − λ_i·f_j` on the irreducibles left
/// after removing `removed`, with the representative `j`.
pub fn next_class_function(
    level: &ClassFunctionLevel,
    lambda: &[RadicalSum],
    removed: &[usize],
    j: usize,
    next_order: u32,
) -> ClassFunctionLevel {
    let active: Vec<usize> = level.active.iter().copied().filter(|i| !removed.contains(i)).collect();
    let mut values = vec![Vec::new(); level.values.len()];
    for &i in &active {
        values[i] = level.values[i]
            .iter()
            .zip(&level.values[j])
            .map(|(fi, fj)| &(fi * &lambda[j]) - &(fj * &lambda[i]))
            .collect();
    }
    ClassFunctionLevel {
        level: level.level + 1,
        order: next_order,
        values,
        active,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiltrationMode {
    Exact { n: i64 },
    Asymptotic { n0: i64, modulus: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub level: usize,
    pub level_order: u32,
    /// Exact mode only.
    pub r: Option<i128>,
    /// Canonical integer direction over all irreducibles; absent when the
    /// signed sums are not commensurable.
    pub direction: Option<Vec<i128>>,
    /// The direction scaled so its smallest positive entry is 1.
    pub normalized: Vec<f64>,
    /// `X_l`.
    pub support: Vec<usize>,
    /// `J_l`: removed after this level.
    pub removed: Vec<usize>,
    /// Order at which `J_l` was decided; `None` when no later order separates
    /// the support and it is removed whole.
    pub decided_at: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationResult {
    pub group: String,
    pub irreps: Vec<String>,
    pub mode: FiltrationMode,
    pub chain: Vec<ChainLevel>,
    /// `L_ε` (exact mode).
    pub residual: Option<Vec<i128>>,
    /// `X_l \ X_{l+1}`, nonempty ones in chain order.
    pub order_blocks: Vec<Vec<usize>>,
    pub degenerate_orders: Vec<u32>,
    /// Some direction was irrational: later `r` and `L_ε` come from rounding.
    pub approximate: bool,
    pub violations: Vec<String>,
    /// Measurement window of the sign data, asymptotic mode.
    pub sign_window: Option<(i64, i64)>,
}

impl FiltrationResult {
    pub fn block_names(&self) -> Vec<Vec<&str>> {
        self.order_blocks
            .iter()
            .map(|b| b.iter().map(|&i| self.irreps[i].as_str()).collect())
            .collect()
    }

    /// `Σ_l r_l·L_l + L_ε` (exact mode with integer directions).
    pub fn reconstruct(&self) -> Option<Vec<i128>> {
        let mut v = self.residual.clone()?;
        for level in &self.chain {
            let d = level.direction.as_ref()?;
            let r = level.r?;
            for (x, &di) in v.iter_mut().zip(d) {
                *x += r * di;
            }
        }
        Some(v)
    }

    pub fn r_values(&self) -> Vec<i128> {
        self.chain.iter().filter_map(|l| l.r).collect()
    }
}

fn names(table: &CharacterTable, idx: &[usize]) -> String {
    let v: Vec<&str> = idx.iter().map(|&i| table.irreps[i].name.as_str()).collect();
    format!("{{{}}}", v.join(", "))
}

/// The chain. With `input`, the greedy exact decomposition of that vector;
/// without, the symbolic chain of directions and removed sets only.
fn run_chain(
    table: &CharacterTable,
    signs: &[Option<i8>],
    input: Option<&[i128]>,
    mode: FiltrationMode,
) -> Result<FiltrationResult, FiltrationError> {
    let orders = table.distinct_orders();
    let mut result = FiltrationResult {
        group: table.group_name.clone(),
        irreps: table.irreps.iter().map(|r| r.name.clone()).collect(),
        mode,
        chain: Vec::new(),
        residual: input.map(<[i128]>::to_vec),
        order_blocks: Vec::new(),
        degenerate_orders: Vec::new(),
        approximate: false,
        violations: Vec::new(),
        sign_window: None,
    };
    let mut level = first_level(table);

    loop {
        let dir = match direction_vector(table, &level, signs) {
            Ok(d) => d,
            Err(FiltrationError::DegenerateLevel { order }) => {
                result.degenerate_orders.push(order);
                match orders.iter().find(|&&e| e > level.order) {
                    Some(&e) => {
                        level.order = e;
                        continue;
                    }
                    None => break,
                }
            }
            Err(e) => return Err(with_partial(e, result)),
        };
        if !dir.negative.is_empty() {
            result.violations.push(format!(
                "level {} (order {}): negative direction entries at {}, excluded from the support",
                level.level,
                level.order,
                names(table, &dir.negative)
            ));
        }
        if dir.canonical.is_none() && !result.approximate {
            result.approximate = true;
            result.violations.push(format!(
                "level {} (order {}): direction entries are not commensurable; chain is approximate from here",
                level.level, level.order
            ));
        }

        let lambda: Vec<RadicalSum> = dir
            .raw
            .iter()
            .enumerate()
            .map(|(i, v)| if dir.negative.contains(&i) { RadicalSum::zero() } else { v.clone() })
            .collect();

        // J_l: decided by the first later order that separates anything.
        let mut removed = None;
        let mut decided_at = None;
        for &e in orders.iter().filter(|&&e| e > level.order) {
            match minimizer_set(table, signs, e, &level, &lambda) {
                Ok(js) => {
                    removed = Some(js);
                    decided_at = Some(e);
                    break;
                }
                Err(FiltrationError::DegenerateLevel { order }) => result.degenerate_orders.push(order),
                Err(e) => return Err(with_partial(e, result)),
            }
        }
        let support = dir.support();
        let removed = removed.unwrap_or_else(|| support.clone());

        let r = match result.residual.as_mut() {
            Some(m) => Some(take_multiple(m, &dir, &support)),
            None => None,
        };
        result.chain.push(ChainLevel {
            level: level.level,
            level_order: level.order,
            r,
            direction: dir.canonical.clone(),
            normalized: dir.normalized.clone(),
            support,
            removed: removed.clone(),
            decided_at,
        });

        let Some(next_order) = decided_at else { break };
        let j = removed[0];
        let next = next_class_function(&level, &lambda, &removed, j, next_order);
        if next.active.is_empty() {
            break;
        }
        if removed.len() > 1 {
            // Any member of J_l must lead to the same next direction.
            let alt = *removed.last().expect("nonempty");
            let other = next_class_function(&level, &lambda, &removed, alt, next_order);
            let a = direction_vector(table, &next, signs).ok().map(|d| d.canonical);
            let b = direction_vector(table, &other, signs).ok().map(|d| d.canonical);
            if a != b {
                result.violations.push(format!(
                    "level {}: representatives {} and {} give different directions",
                    next.level, table.irreps[j].name, table.irreps[alt].name
                ));
            }
        }
        level = next;
    }

    finish(table, &mut result, input);
    Ok(result)
}

/// Greedy step: the largest `r` with `m − r·L ≥ 0` on the support, subtracted.
fn take_multiple(m: &mut [i128], dir: &Direction, support: &[usize]) -> i128 {
    match &dir.canonical {
        Some(d) => {
            let r = support
                .iter()
                .filter(|&&i| d[i] > 0)
                .map(|&i| Integer::div_floor(&m[i], &d[i]))
                .min()
                .unwrap_or(0)
                .max(0);
            for (x, &di) in m.iter_mut().zip(d) {
                *x -= r * di;
            }
            r
        }
        None => {
            let d = &dir.normalized;
            let r = support
                .iter()
                .filter(|&&i| d[i] > 0.0)
                .map(|&i| (m[i] as f64 / d[i]).floor())
                .fold(f64::INFINITY, f64::min);
            let r = if r.is_finite() { r.max(0.0) } else { 0.0 };
            for (x, &di) in m.iter_mut().zip(d) {
                *x -= (r * di).round() as i128;
            }
            r as i128
        }
    }
}

fn finish(table: &CharacterTable, result: &mut FiltrationResult, input: Option<&[i128]>) {
    let supports: Vec<&Vec<usize>> = result.chain.iter().map(|l| &l.support).collect();
    for (k, s) in supports.iter().enumerate() {
        let next: &[usize] = supports.get(k + 1).map(|v| v.as_slice()).unwrap_or(&[]);
        if let Some(extra) = next.iter().find(|i| !s.contains(i)) {
            result.violations.push(format!(
                "support of level {} contains {} outside level {}",
                k + 2,
                table.irreps[*extra].name,
                k + 1
            ));
        }
        if k + 1 < supports.len() && k >= 1 && next.len() == s.len() {
            result
                .violations
                .push(format!("support does not shrink from level {} to {}", k + 1, k + 2));
        }
        let block: Vec<usize> = s.iter().copied().filter(|i| !next.contains(i)).collect();
        if !block.is_empty() {
            result.order_blocks.push(block);
        }
    }
    result.degenerate_orders.sort_unstable();
    result.degenerate_orders.dedup();

    if let (Some(input), Some(rest)) = (input, result.residual.as_ref()) {
        if let Some(i) = rest.iter().position(|&x| x < 0) {
            result
                .violations
                .push(format!("residual entry at {} is negative", table.irreps[i].name));
        }
        if !result.approximate && result.reconstruct().as_deref() != Some(input) {
            result.violations.push("chain does not reconstruct the input".into());
        }
    }
}

fn with_partial(e: FiltrationError, partial: FiltrationResult) -> FiltrationError {
    match e {
        FiltrationError::AperiodicClass { class, .. } => FiltrationError::AperiodicClass {
            class,
            partial: Some(Box::new(partial)),
        },
        other => other,
    }
}

/// Signs of actual coefficients, in table class order.
pub fn exact_signs(values: &[i128]) -> Vec<Option<i8>> {
    values.iter().map(|v| Some(v.signum() as i8)).collect()
}

/// Greedy filtration of one multiplicity vector, with the signs of the
/// coefficients at that grade.
pub fn filtrate_exact(
    mv: &MultiplicityVector,
    table: &CharacterTable,
    signs: &[Option<i8>],
) -> Result<FiltrationResult, FiltrationError> {
    check_lengths(table, signs)?;
    if mv.m.len() != table.irreps.len() {
        return Err(FiltrationError::Length {
            what: "multiplicity vector",
            got: mv.m.len(),
            want: table.irreps.len(),
        });
    }
    if let Some(i) = mv.m.iter().position(|&x| x < 0) {
        return Err(FiltrationError::NegativeInput {
            irrep: table.irreps[i].name.clone(),
            value: mv.m[i],
        });
    }
    run_chain(table, signs, Some(&mv.m), FiltrationMode::Exact { n: mv.n })
}

/// Symbolic chain for `n ≡ n0 (mod modulus)` from periodic sign data.
pub fn filtrate_asymptotic(
    table: &CharacterTable,
    profile: &super::SignProfile,
    n0: i64,
    modulus: u64,
) -> Result<FiltrationResult, FiltrationError> {
    let signs = profile.at_residue(n0, modulus)?;
    let mode = FiltrationMode::Asymptotic {
        n0: n0.rem_euclid(modulus as i64),
        modulus,
    };
    let mut out = filtrate_with_signs(table, &signs, mode).map_err(|e| match e {
        FiltrationError::AperiodicClass { class, partial } => FiltrationError::AperiodicClass {
            class,
            partial: partial.map(|mut p| {
                p.sign_window = Some(profile.window);
                p
            }),
        },
        other => other,
    })?;
    out.sign_window = Some(profile.window);
    Ok(out)
}

/// Symbolic chain for explicit per-class signs.
pub fn filtrate_with_signs(
    table: &CharacterTable,
    signs: &[Option<i8>],
    mode: FiltrationMode,
) -> Result<FiltrationResult, FiltrationError> {
    check_lengths(table, signs)?;
    run_chain(table, signs, None, mode)
}

fn check_lengths(table: &CharacterTable, signs: &[Option<i8>]) -> Result<(), FiltrationError> {
    if signs.len() != table.classes.len() {
        return Err(FiltrationError::Length {
            what: "sign vector",
            got: signs.len(),
            want: table.classes.len(),
        });
    }
    Ok(())
}

/// Whether the signed sums of a level's functions vanish at each of `orders`
/// for the active irreducibles. Holds for the orders of all earlier levels.
pub fn sums_vanish_at(
    table: &CharacterTable,
    level: &ClassFunctionLevel,
    signs: &[Option<i8>],
    orders: &[u32],
) -> bool {
    orders
        .iter()
        .all(|&e| match order_sums(table, &level.values, &level.active, signs, e) {
            Ok(s) => level.active.iter().all(|&i| s[i].is_zero()),
            Err(_) => false,
        })
}
