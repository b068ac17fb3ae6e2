use std::sync::Arc;

use moonshine_core::chartab::{self, fuse_subgroup};
use moonshine_core::rademacher::{coefficient_with, resolve_conventions, LevelRestriction};
use moonshine_core::*;

fn provider() -> RademacherProvider {
    RademacherProvider::new(
        chartab::m24(),
        TruncationPolicy::default(),
        PrecisionContext::default(),
        Arc::new(CoefficientCache::in_memory()),
    )
    .unwrap()
}

#[test]
fn graded_dimensions() {
    let p = provider();
    let want = [90, 462, 1540, 4554, 11592, 27830, 61686, 131100];
    for (n, w) in (1..).zip(want) {
        assert_eq!(p.coefficient("1A", n).unwrap().value, w, "n = {n}");
    }
}

#[test]
fn order_two_classes() {
    let p = provider();
    let a = [-6, 14, -28, 42, -56, 86, -138, 188, -238, 336, -478, 616];
    for (n, w) in (1..).zip(a) {
        assert_eq!(p.coefficient("2A", n).unwrap().value, w, "2A n = {n}");
    }
}

/// The first five graded pieces are 45⊕45̄, 231⊕231̄, 770⊕770̄, 2277⊕2277 and
/// 5796⊕5796, so `c_g(n) = 2·Re χ(g)` for those irreducibles.
#[test]
fn low_grades_match_known_modules() {
    let t = chartab::m24();
    let p = provider();
    for (n, irrep) in [(1, "45a"), (2, "231a"), (3, "770a"), (4, "2277"), (5, "5796")] {
        let i = t.irrep_index(irrep).unwrap();
        for (c, class) in t.classes.iter().enumerate() {
            let want = 2.0 * t.irreps[i].values[c].to_complex().re;
            let got = p.coefficient(&class.name, n).unwrap().value;
            assert_eq!(got as f64, want, "{} n = {n}", class.name);
        }
    }
}

#[test]
fn polar_and_constant_terms() {
    let p = provider();
    for class in ["1A", "2B", "23A"] {
        assert_eq!(p.coefficient(class, -1).unwrap().value, -2);
        let z = p.coefficient(class, 0).unwrap();
        assert_eq!((z.value, z.residual), (0, 0.0));
    }
    assert!(matches!(p.coefficient("1A", -2), Err(RademacherError::GradeOutOfRange { n: -2 })));
    assert!(matches!(p.coefficient("99Z", 1), Err(RademacherError::UnknownClass(_))));
}

#[test]
fn gate_picks_classical_and_level_multiples() {
    let r = resolve_conventions(&PrecisionContext::default()).unwrap();
    assert_eq!(r.conventions.mode, DedekindMode::Classical);
    assert_eq!(r.conventions.restriction, LevelRestriction::MultiplesOfLevel);
    assert!(r.trials.iter().any(|t| t.passed));
}

#[test]
fn other_conventions_do_not_give_integers() {
    let ctx = PrecisionContext::default();
    // These never settle, so keep the cutoff schedule short.
    let policy = TruncationPolicy {
        c_max_initial: 256,
        c_max_limit: 1024,
        ..Default::default()
    };
    let literal = Conventions {
        mode: DedekindMode::PaperLiteral,
        restriction: LevelRestriction::MultiplesOfLevel,
    };
    let r = coefficient_with(&ClassParams::new("1A", 1, 1), 1, &policy, &ctx, literal);
    assert!(r.map(|r| r.value != 90).unwrap_or(true));
    let all = Conventions {
        mode: DedekindMode::Classical,
        restriction: LevelRestriction::AllModuli,
    };
    let r = coefficient_with(&ClassParams::new("2A", 2, 1), 1, &policy, &ctx, all);
    assert!(r.map(|r| r.value != -6).unwrap_or(true));
}

#[test]
fn records_carry_provenance() {
    let p = provider();
    let r = p.record("3A", 2).unwrap();
    assert_eq!(r.value, -6);
    assert!(r.residual.abs() <= p.policy().residual_tolerance);
    assert!(r.c_max_used >= 3 * p.policy().c_max_initial);
    assert_eq!(r.dedekind_mode_used, DedekindMode::Classical);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["value"], "-6");
    let back: CoefficientRecord = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn cache_serves_repeat_requests() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(CoefficientCache::open(dir.path().join("c.jsonl")).unwrap());
    let p = RademacherProvider::new(
        chartab::m24(),
        TruncationPolicy::default(),
        PrecisionContext::default(),
        cache.clone(),
    )
    .unwrap();
    let first = p.coefficient("5A", 7).unwrap();
    let second = p.coefficient("5A", 7).unwrap();
    assert_eq!(first.value, second.value);
    assert!(cache.stats().hits >= 1);
    let reopened = CoefficientCache::open(dir.path().join("c.jsonl")).unwrap();
    assert_eq!(reopened.lookup("M24", "5A", 7, 0.25).unwrap().value, first.value);
}

#[test]
fn prefetch_fills_every_class() {
    let p = provider();
    let classes: Vec<String> = ["7A", "7B", "14A"].iter().map(|s| s.to_string()).collect();
    p.prefetch(&classes, &[3, 4], 2).unwrap();
    // 7A and 7B share a multiplier.
    assert_eq!(p.coefficient("7A", 4).unwrap(), p.coefficient("7B", 4).unwrap());
}

#[test]
fn a5_reads_through_fusion() {
    let m = Arc::new(provider());
    let f = fuse_subgroup(chartab::a5(), m.clone()).unwrap();
    for n in 1..4 {
        assert_eq!(f.coefficient("5B", n).unwrap(), m.coefficient("5A", n).unwrap());
        assert_eq!(f.coefficient("2A", n).unwrap(), m.coefficient("2A", n).unwrap());
    }
}

#[test]
fn policy_validation() {
    let bad = TruncationPolicy {
        growth_factor: 1,
        ..Default::default()
    };
    assert!(matches!(bad.validate(), Err(RademacherError::InvalidPolicy(_))));
    let bad = TruncationPolicy {
        c_max_initial: 10,
        c_max_limit: 5,
        ..Default::default()
    };
    assert!(bad.validate().is_err());
    assert_eq!(TruncationPolicy::default().schedule(3).first(), Some(&(2048 * 3)));
}

#[test]
fn leading_asymptotic_tracks_the_coefficients() {
    let p = provider();
    for (class, ng) in [("1A", 1u32), ("2A", 2)] {
        let n = 40;
        let c = p.coefficient(class, n).unwrap().value as f64;
        let lead = rademacher::asymptotic_leading(Multiplier { ng, hg: 1 }, n);
        assert!((c.abs() / lead - 1.0).abs() < 0.01, "{class}: {c} vs {lead}");
    }
}
