use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::FiltrationError;
use crate::chartab::CharacterTable;
use crate::provider::CoefficientProvider;

/// How the sign of `c_g(n)` behaves as a function of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassSign {
    /// Known pattern, `pattern[n mod p]`; `confirmed` is whether the
    /// measured window agreed with it.
    Declared { pattern: Vec<i8>, confirmed: bool },
    /// Smallest period seen over the window, repeating at least three times.
    Empirical { pattern: Vec<i8>, window: (i64, i64) },
    /// No period up to a third of the window.
    Aperiodic { window: (i64, i64), observed: Vec<i8> },
}

impl ClassSign {
    pub fn period(&self) -> Option<u64> {
        match self {
            ClassSign::Declared { pattern, .. } | ClassSign::Empirical { pattern, .. } => Some(pattern.len() as u64),
            ClassSign::Aperiodic { .. } => None,
        }
    }

    pub fn at(&self, n: i64) -> Option<i8> {
        match self {
            ClassSign::Declared { pattern, .. } | ClassSign::Empirical { pattern, .. } => {
                Some(pattern[n.rem_euclid(pattern.len() as i64) as usize])
            }
            ClassSign::Aperiodic { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignProfile {
    pub group: String,
    pub classes: Vec<String>,
    pub signs: Vec<ClassSign>,
    /// `lcm` of the periods of the periodic classes.
    pub modulus: u64,
    pub window: (i64, i64),
}

/// Signs known in advance for `M₂₄` (or a subgroup fused into it):
/// `sgn c_{2A}(n) = (−1)^n`, `sgn c_{2B}(n) = (−1)^{n+1}`.
pub fn declared_pattern(table: &CharacterTable, class: usize) -> Option<Vec<i8>> {
    let c = &table.classes[class];
    let name = if table.is_subgroup_table() {
        c.fusion_target.as_deref()?
    } else if table.group_name == "M24" {
        c.name.as_str()
    } else {
        return None;
    };
    match name {
        "2A" => Some(vec![1, -1]),
        "2B" => Some(vec![-1, 1]),
        _ => None,
    }
}

fn smallest_period(s: &[i8]) -> Option<usize> {
    (1..=s.len() / 3).find(|&p| (0..s.len() - p).all(|k| s[k] == s[k + p]))
}

/// Rotates a pattern measured from `start` so that index `k` is `n ≡ k (mod p)`.
fn align(s: &[i8], start: i64, p: usize) -> Vec<i8> {
    (0..p)
        .map(|k| {
            let off = (k as i64 - start).rem_euclid(p as i64) as usize;
            s[off]
        })
        .collect()
}

/// Classifies the sign of every class from observed signs `observed[class][n − lo]`.
pub fn classify_signs(
    table: &CharacterTable,
    observed: &[Vec<i8>],
    window: (i64, i64),
) -> Result<SignProfile, FiltrationError> {
    let (lo, hi) = window;
    let len = (hi - lo + 1).max(0) as usize;
    if len < 3 {
        return Err(FiltrationError::InsufficientWindow { lo, hi });
    }
    if len < 30 {
        log::warn!("sign window [{lo}, {hi}] is shorter than 30 grades");
    }
    let mut signs = Vec::with_capacity(table.classes.len());
    for (c, s) in observed.iter().enumerate() {
        let sign = match declared_pattern(table, c) {
            Some(pattern) => {
                let p = pattern.len() as i64;
                let confirmed = s
                    .iter()
                    .enumerate()
                    .all(|(k, &v)| pattern[(lo + k as i64).rem_euclid(p) as usize] == v);
                if !confirmed {
                    log::warn!("class {}: declared sign pattern not seen over the window", table.classes[c].name);
                }
                ClassSign::Declared { pattern, confirmed }
            }
            None => match smallest_period(s) {
                Some(p) => ClassSign::Empirical {
                    pattern: align(s, lo, p),
                    window,
                },
                None => ClassSign::Aperiodic {
                    window,
                    observed: s.clone(),
                },
            },
        };
        signs.push(sign);
    }
    let modulus = signs.iter().filter_map(ClassSign::period).fold(1u64, |a, p| a.lcm(&p));
    Ok(SignProfile {
        group: table.group_name.clone(),
        classes: table.classes.iter().map(|c| c.name.clone()).collect(),
        signs,
        modulus,
        window,
    })
}

/// Measures signs over `window` with coefficients from `provider`.
pub fn sign_profile(
    table: &CharacterTable,
    provider: &dyn CoefficientProvider,
    window: (i64, i64),
    jobs: usize,
) -> Result<SignProfile, FiltrationError> {
    let (lo, hi) = window;
    if hi - lo + 1 < 3 {
        return Err(FiltrationError::InsufficientWindow { lo, hi });
    }
    let classes: Vec<String> = table.classes.iter().map(|c| c.name.clone()).collect();
    let grades: Vec<i64> = (lo..=hi).collect();
    provider.prefetch(&classes, &grades, jobs)?;
    let mut observed = vec![Vec::with_capacity(grades.len()); classes.len()];
    for (c, name) in classes.iter().enumerate() {
        for &n in &grades {
            observed[c].push(provider.coefficient(name, n)?.value.signum() as i8);
        }
    }
    classify_signs(table, &observed, window)
}

impl SignProfile {
    /// Per-class signs on the residue class `n0 mod modulus`; `None` for classes
    /// without a period. Every known period must divide `modulus`.
    pub fn at_residue(&self, n0: i64, modulus: u64) -> Result<Vec<Option<i8>>, FiltrationError> {
        for (name, s) in self.classes.iter().zip(&self.signs) {
            if let Some(p) = s.period() {
                if modulus % p != 0 {
                    return Err(FiltrationError::Modulus {
                        class: name.clone(),
                        period: p,
                        modulus,
                    });
                }
            }
        }
        Ok(self.signs.iter().map(|s| s.at(n0)).collect())
    }

    pub fn aperiodic(&self) -> Vec<&str> {
        self.classes
            .iter()
            .zip(&self.signs)
            .filter(|(_, s)| matches!(s, ClassSign::Aperiodic { .. }))
            .map(|(c, _)| c.as_str())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_detection() {
        assert_eq!(smallest_period(&[1, 1, 1, 1]), Some(1));
        assert_eq!(smallest_period(&[1, -1, 1, -1, 1, -1]), Some(2));
        assert_eq!(smallest_period(&[1, -1, 1, -1, 1]), None);
        assert_eq!(smallest_period(&[0, -1, 1, 0, -1, 1, 0, -1, 1]), Some(3));
        assert_eq!(smallest_period(&[1, 1, -1, 1, 1, 1, 1, 1, 1]), None);
    }

    #[test]
    fn alignment_is_by_residue() {
        // Observed from n = 4: n≡1 → 0, n≡2 → −1, n≡0 → +1.
        let s = [0, -1, 1, 0, -1, 1];
        assert_eq!(align(&s, 4, 3), vec![1, 0, -1]);
    }
}
