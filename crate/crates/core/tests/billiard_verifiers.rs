mod common;

use proptest::prelude::*;
use wright_core::billiard::{run, BilliardProblem};
use wright_core::bounds::*;
use wright_core::interval::with_outward_rounding_disabled;
use wright_core::verifiers::*;
use wright_core::Interval;

// 2.15b runs its full derivative grid; the acceptance suite covers it.
const QUICK: [LemmaId; 7] = [
    LemmaId::L2_15a,
    LemmaId::L2_15c,
    LemmaId::L2_15d,
    LemmaId::L4_8,
    LemmaId::L4_18,
    LemmaId::Remark2_18,
    LemmaId::Appendix1,
];

#[test]
fn default_verifiers_hold_with_increasing_trajectories() {
    let cfg = VerifyConfig::default();
    for id in QUICK {
        let v = verify(id, &cfg);
        assert!(v.holds, "{id} failed: {:#?}", v.evidence);
        for b in &v.evidence.billiards {
            let t = &b.outcome.trajectory;
            assert!(
                t.windows(2).all(|w| w[0] < w[1]),
                "{id}: {} not increasing",
                b.name
            );
            assert!(*t.last().unwrap() > b.outcome.t_end);
        }
    }
}

#[test]
fn one_extra_ulp_per_step_still_separates() {
    let base = VerifyConfig::default();
    let shaved = VerifyConfig {
        extra_down_ulps: 1,
        ..base
    };
    for id in [
        LemmaId::L2_15a,
        LemmaId::L2_15c,
        LemmaId::L2_15d,
        LemmaId::L4_8,
        LemmaId::L4_18,
    ] {
        let (v0, v1) = (verify(id, &base), verify(id, &shaved));
        for (b0, b1) in v0.evidence.billiards.iter().zip(&v1.evidence.billiards) {
            assert!(
                b1.outcome.separated,
                "{id}: {} no longer separates",
                b1.name
            );
            assert!(
                b1.outcome.steps <= 2 * b0.outcome.steps,
                "{id}: {} vs {}",
                b1.outcome.steps,
                b0.outcome.steps
            );
        }
    }
}

fn dense(lo: f64, hi: f64, gap: impl Fn(f64) -> f64) {
    for i in 0..=10_000 {
        let t = lo + (hi - lo) * i as f64 / 10_000.0;
        let g = gap(t);
        assert!(g > 0.0, "gap {g:e} at t = {t}");
    }
}

#[test]
fn dense_samples_agree_with_separations() {
    let a = a_critical();
    let l = |bm: f64, m: f64| {
        l_value(&BoundParams::points(a, bm, m).unwrap())
            .unwrap()
            .mid()
    };
    let c = |m: f64| {
        let am = big_a(Interval::point(m), a).unwrap();
        l_value(&BoundParams::new(a, am, Interval::point(m)).unwrap())
            .unwrap()
            .mid()
    };
    dense(-0.61, -0.009, |t| l(-t, t) - t);
    dense(0.009, 1.0 / 9.0, |t| -c(-t) - t);
    dense(-0.61, -0.25, |t| c(t) - t);
    let d = DConfig::default();
    // The closed form of Sigma needs beta~ < 0, which fails near the top of
    // this range; the quadrature oracle does not.
    dense(0.0093, 0.26, |t| {
        let dl = d_enclosure(&BoundParams::points(a, t, -t).unwrap(), Mode::Lower, &d).unwrap();
        common::sigma_quad(t, -t, common::A_CRIT, dl) - t
    });
    let h = a_three_halves();
    let z = |bm: f64, m: f64| {
        d_enclosure(&BoundParams::points(h, bm, m).unwrap(), Mode::Lower, &d).unwrap() / 2.25
    };
    let p = |t: f64| t / (2.0 * (1.0 - t).powi(2));
    dense(0.0093, 0.2343, |t| z(t, -t) - p(t));
    dense(0.21, 0.25, |t| z(0.27, -t) - p(t));
}

#[test]
fn verdicts_are_deterministic() {
    let cfg = VerifyConfig::default();
    for id in QUICK {
        let (x, y) = (verify(id, &cfg), verify(id, &cfg));
        assert_eq!(
            serde_json::to_string(&x.evidence).unwrap(),
            serde_json::to_string(&y.evidence).unwrap(),
            "{id}"
        );
        assert_eq!(x.holds, y.holds);
    }
}

#[test]
fn plain_rounding_never_rescues_a_failure() {
    let base = VerifyConfig::default();
    let configs = [
        base,
        VerifyConfig {
            max_steps: 8,
            ..base
        },
        VerifyConfig {
            a: Interval::point(-1.9),
            ..base
        },
        VerifyConfig {
            a: Interval::point(-1.2),
            ..base
        },
    ];
    let mut failures = 0;
    for cfg in configs {
        for id in QUICK {
            let rigorous = verify(id, &cfg);
            if rigorous.holds {
                continue;
            }
            failures += 1;
            let plain = with_outward_rounding_disabled(|| verify(id, &cfg));
            assert!(
                !plain.holds,
                "{id} at {cfg:?}: fails rigorously but holds without outward rounding"
            );
        }
    }
    assert!(failures >= 5, "only {failures} failing verdicts exercised");
}

#[test]
fn p_inverse_round_trips() {
    for i in 1..1000 {
        let t = i as f64 / 1000.0;
        let y = t / (2.0 * (1.0 - t).powi(2));
        let back = p_inverse_4_8(y).unwrap();
        assert!((back.mid() - t).abs() < 1e-12, "{t}: {back}");
    }
}

proptest! {
    #[test]
    fn positive_gaps_separate(gap in 1e-3f64..0.5, lo in -2.0f64..0.0, len in 0.01f64..3.0) {
        let pb = BilliardProblem::identity(move |t| Ok(Interval::point(t) + gap + 0.1 * t.abs()), lo, lo + len);
        let out = run(&pb);
        prop_assert!(out.separated);
        prop_assert!(out.trajectory.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(out.steps as f64 <= (len / gap).ceil() + 2.0);
    }
}
