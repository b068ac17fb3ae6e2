//! Small synthetic groups, coefficient providers of the growth-model form, and
//! a direct re-implementation of the filtration recursion used as an oracle.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use moonshine_core::{CharacterTable, CoefficientProvider, CoefficientValue, RademacherError};

fn class_json(name: &str, size: u64, order: u32) -> String {
    format!(r#"{{"name": "{name}", "size": {size}, "element_order": {order}, "ng": {order}, "hg": 1}}"#)
}

fn irrep_json(name: &str, values: &[i64]) -> String {
    let vals: Vec<String> = values.iter().map(|v| format!(r#"{{"a": {}, "b": 0, "d": 1}}"#, 2 * v)).collect();
    format!(r#"{{"name": "{name}", "dim": {}, "values": [{}]}}"#, values[0], vals.join(", "))
}

fn table(name: &str, order: u64, classes: &[(&str, u64, u32)], irreps: &[(&str, &[i64])]) -> CharacterTable {
    let cs: Vec<String> = classes.iter().map(|&(n, s, o)| class_json(n, s, o)).collect();
    let rs: Vec<String> = irreps.iter().map(|&(n, v)| irrep_json(n, v)).collect();
    let text = format!(
        r#"{{"group_name": "{name}", "group_order": {order}, "classes": [{}], "irreps": [{}]}}"#,
        cs.join(", "),
        rs.join(", ")
    );
    CharacterTable::from_json(&text).expect("synthetic table is valid")
}

pub fn c2() -> CharacterTable {
    table("C2", 2, &[("1A", 1, 1), ("2A", 1, 2)], &[("triv", &[1, 1]), ("sgn", &[1, -1])])
}

pub fn s3() -> CharacterTable {
    table(
        "S3",
        6,
        &[("1A", 1, 1), ("2A", 3, 2), ("3A", 2, 3)],
        &[("triv", &[1, 1, 1]), ("sgn", &[1, -1, 1]), ("std", &[2, 0, -1])],
    )
}

/// `c_g(n)` shaped like `sgn_g(n)·A_g·exp(D_n/ord g)` with periodic signs:
/// the targets are decomposed, the multiplicities rounded to nonnegative
/// integers, and the coefficients rebuilt from them so everything is
/// consistent.
pub struct GrowthProvider {
    pub table: CharacterTable,
    /// `patterns[class][n mod p]`.
    pub patterns: Vec<Vec<i8>>,
    pub amplitudes: Vec<f64>,
}

impl GrowthProvider {
    pub fn c2() -> Self {
        GrowthProvider {
            table: c2(),
            patterns: vec![vec![1], vec![1, -1]],
            amplitudes: vec![1.0, 0.8],
        }
    }

    /// A zero in a pattern would not survive the rounding, so 3A has a
    /// nonzero period-3 sign.
    pub fn s3() -> Self {
        GrowthProvider {
            table: s3(),
            patterns: vec![vec![1], vec![-1, 1], vec![1, 1, -1]],
            amplitudes: vec![1.0, 1.3, 2.1],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.patterns.iter().fold(1u64, |a, p| a.lcm(&(p.len() as u64)))
    }

    pub fn sign(&self, class: usize, n: i64) -> i8 {
        let p = &self.patterns[class];
        p[n.rem_euclid(p.len() as i64) as usize]
    }

    pub fn multiplicities(&self, n: i64) -> Vec<i128> {
        let t = &self.table;
        let d = std::f64::consts::PI / 4.0 * ((8 * n - 1) as f64).sqrt();
        let target: Vec<f64> = t
            .classes
            .iter()
            .enumerate()
            .map(|(c, class)| {
                self.sign(c, n) as f64 * self.amplitudes[c] * (d / class.element_order as f64).exp()
            })
            .collect();
        t.irreps
            .iter()
            .map(|r| {
                let s: f64 = t
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(c, class)| class.size as f64 * r.values[c].to_complex().re * target[c])
                    .sum();
                ((s / t.group_order as f64).round() as i128).max(0)
            })
            .collect()
    }

    pub fn coefficients(&self, n: i64) -> Vec<i128> {
        let m = self.multiplicities(n);
        (0..self.table.classes.len())
            .map(|c| {
                self.table
                    .irreps
                    .iter()
                    .zip(&m)
                    .map(|(r, &k)| k * (r.values[c].a / 2) as i128)
                    .sum()
            })
            .collect()
    }
}

impl CoefficientProvider for GrowthProvider {
    fn group_name(&self) -> &str {
        &self.table.group_name
    }

    fn has_class(&self, class: &str) -> bool {
        self.table.class_index(class).is_some()
    }

    fn coefficient(&self, class: &str, n: i64) -> Result<CoefficientValue, RademacherError> {
        let c = self
            .table
            .class_index(class)
            .ok_or_else(|| RademacherError::UnknownClass(class.to_string()))?;
        if n < 1 {
            return Err(RademacherError::GradeOutOfRange { n });
        }
        Ok(CoefficientValue {
            value: self.coefficients(n)[c],
            residual: 0.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleLevel {
    pub order: u32,
    pub r: Option<i128>,
    pub direction: Vec<i128>,
    pub support: Vec<usize>,
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleChain {
    pub levels: Vec<OracleLevel>,
    pub residual: Option<Vec<i128>>,
    pub blocks: Vec<Vec<usize>>,
    pub degenerate: Vec<u32>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Divide by the smallest positive entry, clear denominators, divide by the gcd.
fn canonical(lam: &[BigRational]) -> Vec<i128> {
    let Some(min) = lam.iter().filter(|x| x.is_positive()).min().cloned() else {
        return vec![0; lam.len()];
    };
    let scaled: Vec<BigRational> = lam.iter().map(|x| x / &min).collect();
    let mut den = BigInt::from(1);
    for x in &scaled {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = scaled.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.iter().map(|x| (x / &g).to_i128().unwrap()).collect()
}

/// The recursion written out directly: level functions as rationals, the
/// paper's division form of the elimination step, rational argmin.
/// With `m`, also the greedy multiples and the remainder.
pub fn direct_chain(table: &CharacterTable, signs: &[i8], m: Option<&[i128]>) -> OracleChain {
    let k = table.classes.len();
    let mut orders: Vec<u32> = table.classes.iter().map(|c| c.element_order).collect();
    orders.sort();
    orders.dedup();
    let signed_sum = |f: &[BigRational], e: u32| -> BigRational {
        let mut s = BigRational::zero();
        for (c, class) in table.classes.iter().enumerate() {
            if class.element_order == e {
                s += &f[c] * q(class.size as i64 * signs[c] as i64);
            }
        }
        s
    };

    let mut f: Vec<Vec<BigRational>> = table
        .irreps
        .iter()
        .map(|r| r.values.iter().map(|v| BigRational::new(BigInt::from(v.a), BigInt::from(2))).collect())
        .collect();
    let mut active: Vec<usize> = (0..k).collect();
    let mut order = 1u32;
    let mut rest = m.map(|m| m.to_vec());
    let mut levels = Vec::new();
    let mut degenerate = Vec::new();

    loop {
        let mut lam = vec![BigRational::zero(); k];
        for &i in &active {
            lam[i] = signed_sum(&f[i], order);
        }
        if active.iter().all(|&i| lam[i].is_zero()) {
            degenerate.push(order);
            match orders.iter().find(|&&e| e > order) {
                Some(&e) => {
                    order = e;
                    continue;
                }
                None => break,
            }
        }
        for x in lam.iter_mut() {
            if x.is_negative() {
                *x = BigRational::zero();
            }
        }
        let support: Vec<usize> = active.iter().copied().filter(|&i| lam[i].is_positive()).collect();
        let direction = canonical(&lam);

        let r = rest.as_mut().map(|m| {
            let r = support
                .iter()
                .map(|&i| Integer::div_floor(&m[i], &direction[i]))
                .min()
                .unwrap_or(0)
                .max(0);
            for i in 0..k {
                m[i] -= r * direction[i];
            }
            r
        });

        let mut removed = None;
        let mut decided = None;
        for &e in orders.iter().filter(|&&e| e > order) {
            let ratios: Vec<(usize, BigRational)> =
                support.iter().map(|&i| (i, signed_sum(&f[i], e) / &lam[i])).collect();
            if ratios.iter().all(|(_, x)| x.is_zero()) {
                degenerate.push(e);
                continue;
            }
            let best = ratios.iter().map(|(_, x)| x).min().unwrap().clone();
            removed = Some(ratios.iter().filter(|(_, x)| *x == best).map(|(i, _)| *i).collect::<Vec<_>>());
            decided = Some(e);
            break;
        }
        let removed = removed.unwrap_or_else(|| support.clone());
        levels.push(OracleLevel {
            order,
            r,
            direction,
            support,
            removed: removed.clone(),
        });
        let Some(next) = decided else { break };

        let j = removed[0];
        let fj = f[j].clone();
        active.retain(|i| !removed.contains(i));
        for &i in &active {
            let ratio = &lam[i] / &lam[j];
            f[i] = (0..k).map(|c| (&f[i][c] - &ratio * &fj[c]) * &lam[j]).collect();
        }
        if active.is_empty() {
            break;
        }
        order = next;
    }

    let mut blocks = Vec::new();
    for (a, l) in levels.iter().enumerate() {
        let next: &[usize] = levels.get(a + 1).map(|l| l.support.as_slice()).unwrap_or(&[]);
        let b: Vec<usize> = l.support.iter().copied().filter(|i| !next.contains(i)).collect();
        if !b.is_empty() {
            blocks.push(b);
        }
    }
    degenerate.sort();
    degenerate.dedup();
    OracleChain {
        levels,
        residual: rest,
        blocks,
        degenerate,
    }
}

/// Multiplicities from coefficients by the orthogonality sum, rationally.
pub fn direct_multiplicities(table: &CharacterTable, c: &[i128]) -> Vec<i128> {
    table
        .irreps
        .iter()
        .map(|r| {
            let mut s = BigRational::zero();
            for (g, class) in table.classes.iter().enumerate() {
                s += BigRational::new(BigInt::from(r.values[g].a), BigInt::from(2))
                    * BigRational::from_integer(BigInt::from(class.size) * BigInt::from(c[g]));
            }
            let m = s / q(table.group_order as i64);
            assert!(m.is_integer());
            m.to_integer().to_i128().unwrap()
        })
        .collect()
}

/// Compares a library result with the oracle; `Err` describes the first difference.
pub fn compare(res: &moonshine_core::FiltrationResult, oracle: &OracleChain) -> Result<(), String> {
    if res.chain.len() != oracle.levels.len() {
        return Err(format!("chain length {} vs oracle {}", res.chain.len(), oracle.levels.len()));
    }
    for (a, b) in res.chain.iter().zip(&oracle.levels) {
        let got = (a.level_order, a.r, a.direction.clone(), &a.support, &a.removed);
        let want = (b.order, b.r, Some(b.direction.clone()), &b.support, &b.removed);
        if got != want {
            return Err(format!("level {}: {got:?} vs oracle {want:?}", a.level));
        }
    }
    if res.residual != oracle.residual {
        return Err(format!("residual {:?} vs oracle {:?}", res.residual, oracle.residual));
    }
    if res.order_blocks != oracle.blocks {
        return Err(format!("blocks {:?} vs oracle {:?}", res.order_blocks, oracle.blocks));
    }
    if res.degenerate_orders != oracle.degenerate {
        return Err(format!(
            "degenerate orders {:?} vs oracle {:?}",
            res.degenerate_orders, oracle.degenerate
        ));
    }
    Ok(())
}
