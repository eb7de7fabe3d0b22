use lexnet::growthcurve::{group_average, CheckpointSchedule, GrowthCurve};
use lexnet::metrics::heaps_fit;
use lexnet::synth::*;

fn cfg(steps: u64) -> SynthConfig {
    SynthConfig { steps, ..SynthConfig::default() }
}

fn variance(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

#[test]
fn disjoint_seed_sets_agree() {
    let c = cfg(10_000);
    let cp = CheckpointSchedule::default_for(1_000);
    let a: Vec<u64> = (0..20).collect();
    let b: Vec<u64> = (1_000..1_020).collect();
    let ca = synth_curve_with_seeds(&c, &cp, &a).unwrap();
    let cb = synth_curve_with_seeds(&c, &cp, &b).unwrap();
    let mut outside_two = 0;
    for (x, y) in ca.samples.iter().zip(&cb.samples) {
        let se = (x.stderr().powi(2) + y.stderr().powi(2)).sqrt();
        let diff = (x.mean_l - y.mean_l).abs();
        if diff > 2.0 * se {
            outside_two += 1;
        }
        assert!(diff <= 4.0 * se + 1e-12, "N = {}: {diff} vs se {se}", x.n);
    }
    // About 5% of points fall outside two standard errors by chance.
    assert!(outside_two * 10 <= ca.samples.len(), "{outside_two} of {}", ca.samples.len());
}

#[test]
fn group_mean_has_lower_variance() {
    let c = cfg(5_000);
    let cp = CheckpointSchedule::new(vec![20, 50, 100, 200, 500]).unwrap();
    let singles: Vec<GrowthCurve> =
        (0..50).map(|s| synth_curve_with_seeds(&c, &cp, &[s]).unwrap()).collect();
    let groups: Vec<GrowthCurve> = singles.chunks(5).map(|g| group_average("g", g).unwrap()).collect();
    for i in 0..cp.points().len() {
        let single: Vec<f64> = singles.iter().map(|c| c.samples[i].mean_l).collect();
        let grouped: Vec<f64> = groups.iter().map(|c| c.samples[i].mean_l).collect();
        assert_eq!(groups[0].samples[i].realizations, 5);
        assert!(variance(&grouped) < variance(&single), "N = {}", cp.points()[i]);
    }
}

#[test]
fn node_trajectory_follows_heaps_law() {
    for (delta, seed) in [(0.6, 1), (0.8, 2)] {
        let c = SynthConfig { delta, seed, ..cfg(100_000) };
        let (_, trace) = generate(&c).unwrap();
        let fit = heaps_fit(&trace.heaps_curve());
        assert!((fit.delta - delta).abs() < 0.05, "{delta}: {fit:?}");
    }
}

#[test]
fn curve_independent_of_thread_count() {
    let c = cfg(3_000);
    let cp = CheckpointSchedule::default_for(300);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| synth_curve(&c, &cp, 6).unwrap())
    };
    assert_eq!(run(1), run(4));
}
