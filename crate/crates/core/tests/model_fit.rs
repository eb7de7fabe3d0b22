use lexnet::growthcurve::{CheckpointSchedule, CurveMode, CurveSample, GrowthCurve};
use lexnet::model::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn truth() -> ModelParams {
    ModelParams::new(2.0, 0.4, 30.0, 2.5)
}

fn grid() -> Vec<usize> {
    CheckpointSchedule::default_for(100_000).points().to_vec()
}

/// Box–Muller standard normal.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check_close(p: &ModelParams, q: &ModelParams, tol: f64) {
    assert!(rel(p.c0, q.c0) < tol, "{p:?}");
    assert!(rel(p.growth_alpha, q.growth_alpha) < tol, "{p:?}");
    assert!(rel(p.n0, q.n0) < tol, "{p:?}");
    assert!(rel(p.theta, q.theta) < tol, "{p:?}");
}

#[test]
fn noiseless_round_trip() {
    let t = truth();
    let pts: Vec<(f64, f64)> = grid().iter().map(|&n| (n as f64, t.l_fit(n as f64).unwrap())).collect();
    let f = fit_points(&pts, None).unwrap();
    check_close(&f.params, &t, 5e-5);
    assert!(f.residual < 1e-6);
    assert!(f.delta_l_end.abs() < 1e-6);
    assert!(f.converged);
}

#[test]
fn noisy_round_trip() {
    let t = truth();
    for seed in [1, 2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = grid()
            .iter()
            .map(|&n| (n as f64, t.l_fit(n as f64).unwrap() + 0.01 * normal(&mut rng)))
            .collect();
        let f = fit_points(&pts, None).unwrap();
        check_close(&f.params, &t, 0.05);
        assert!((f.residual - 0.01).abs() < 0.003, "{f:?}");
    }
}

#[test]
fn fit_ignores_sample_order() {
    let t = truth();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pts: Vec<(f64, f64)> = grid()
        .iter()
        .map(|&n| (n as f64, t.l_fit(n as f64).unwrap() + 0.02 * normal(&mut rng)))
        .collect();
    let a = fit_points(&pts, None).unwrap();
    pts.shuffle(&mut rng);
    let b = fit_points(&pts, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fit_from_curve_matches_points() {
    let t = truth();
    let samples = grid()
        .iter()
        .map(|&n| CurveSample { n, mean_l: t.l_fit(n as f64).unwrap(), realizations: 1, std_l: 0.0 })
        .collect();
    let curve = GrowthCurve { text_id: "m".into(), mode: CurveMode::Synthetic, samples };
    let f = fit(&curve, None).unwrap();
    check_close(&f.params, &t, 5e-5);
}

#[test]
fn asymptote_approach_is_monotone_for_fitted_parameters() {
    let t = truth();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<(f64, f64)> = grid()
        .iter()
        .map(|&n| (n as f64, t.l_fit(n as f64).unwrap() + 0.01 * normal(&mut rng)))
        .collect();
    let p = fit_points(&pts, None).unwrap().params;
    let mut prev = f64::INFINITY;
    for i in 0..=90 {
        let n = 10f64.powf(3.0 + i as f64 / 10.0);
        let gap = (l_rand(n, p.c0, p.growth_alpha).unwrap() - 1.0 / p.growth_alpha).abs();
        assert!(gap < prev, "N = {n}");
        prev = gap;
    }
}

proptest! {
    #[test]
    fn asymptote_gap_shrinks(c0 in 1.05f64..20.0, alpha in 0.05f64..1.5) {
        // Stay clear of the pole over the whole range.
        prop_assume!((c0 / (alpha + 1.0)).ln() + alpha * 1e3f64.ln() > 0.1);
        let mut prev = f64::INFINITY;
        for i in 0..=90 {
            let n = 10f64.powf(3.0 + i as f64 / 10.0);
            let gap = (l_rand(n, c0, alpha).unwrap() - 1.0 / alpha).abs();
            prop_assert!(gap <= prev);
            prev = gap;
        }
    }

    #[test]
    fn l_fit_between_regimes(c0 in 1.5f64..5.0, alpha in 0.2f64..0.8, n0 in 5.0f64..200.0, theta in 0.5f64..5.0, n in 2.0f64..1e6) {
        let p = ModelParams::new(c0, alpha, n0, theta);
        let chain = l_chain(n);
        let rand = l_rand(n, c0, alpha).unwrap();
        let v = p.l_fit(n).unwrap();
        prop_assert!(v >= chain.min(rand) - 1e-9 && v <= chain.max(rand) + 1e-9);
    }
}
