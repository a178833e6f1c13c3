use proptest::prelude::*;
use rayon::prelude::*;
use regen_stable::localtime::{local_time_eps, LocalTimeParams};
use regen_stable::regen::{
    intersect_shifted, refine_covering, sample_covering, sample_shift, sample_subordinator_range, CoveringConfig,
    ShiftedFamily,
};
use regen_stable::stats::mean_se;
use regen_stable::streams::stream;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refinement_nests(seed in any::<u64>(), beta in 0.2..0.9f64, ratio in 0.05..0.9f64) {
        let cfg = CoveringConfig::new(beta, 0.02, 1.0).unwrap();
        let mut rng = stream(seed, "nest", 0);
        let coarse = sample_covering(cfg, &mut rng).unwrap();
        let fine = refine_covering(&coarse, 0.02 * ratio, &mut rng).unwrap();
        prop_assert!(fine.uncovered.is_subset_of(&coarse.uncovered));
        prop_assert!(fine.uncovered.contains(0.0));
    }

    #[test]
    fn shifts_lie_in_unit_interval(seed in any::<u64>(), beta in 0.05..0.95f64) {
        let v = sample_shift(beta, &mut stream(seed, "shift", 0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn shifted_coverage_is_stationary() {
    let cfg = CoveringConfig::new(0.6, 1e-3, 1.0).unwrap();
    let (delta, starts) = (0.15, [0.3, 0.55, 0.85]);
    let n = 20_000;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(17, "stationary", i);
            let c = sample_covering(cfg, &mut rng).unwrap();
            let v = sample_shift(cfg.beta, &mut rng).unwrap();
            let s = c.uncovered.shift(v).unwrap();
            starts
                .iter()
                .map(|&a| s.measure_upto(a + delta).unwrap() - s.measure_upto(a).unwrap())
                .collect()
        })
        .collect();
    let stats: Vec<(f64, f64)> = (0..starts.len())
        .map(|j| mean_se(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect();
    for w in stats.windows(2) {
        let z = (w[0].0 - w[1].0) / w[0].1.hypot(w[1].1);
        assert!(z.abs() < 4.0, "window means {stats:?}");
    }
}

// The last zero before 1 of a beta-stable regenerative set has mean beta.
#[test]
fn last_zero_mean_matches_generalized_arcsine() {
    let beta = 0.6;
    let n = 5000;
    let cfg = CoveringConfig::new(beta, 1e-4, 1.0).unwrap();
    let cover: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| sample_covering(cfg, &mut stream(3, "arcsine-cover", i)).unwrap().uncovered.sup().unwrap())
        .collect();
    let sub: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| sample_subordinator_range(beta, 1.0, 2000, &mut stream(3, "arcsine-sub", i)).unwrap().sup().unwrap())
        .collect();
    for (name, xs) in [("covering", cover), ("subordinator", sub)] {
        let (m, se) = mean_se(&xs);
        assert!((m - beta).abs() < 4.0 * se + 0.005, "{name}: mean {m} se {se}");
    }
}

#[test]
fn local_time_has_stationary_increments() {
    let params = LocalTimeParams::new(0.75, 2).unwrap();
    let eps = 1e-3;
    let cfg = CoveringConfig::new(0.75, eps, 1.0).unwrap();
    let n = 20_000;
    let pairs: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let fam = ShiftedFamily::sample(cfg, 2, &mut stream(23, "increments", i)).unwrap();
            let set = intersect_shifted(&fam).unwrap();
            (
                local_time_eps(&set, 0.0, 0.3, eps, &params).unwrap(),
                local_time_eps(&set, 0.5, 0.8, eps, &params).unwrap(),
            )
        })
        .collect();
    for power in [1, 2] {
        let a: Vec<f64> = pairs.iter().map(|p| p.0.powi(power)).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1.powi(power)).collect();
        let ((ma, sa), (mb, sb)) = (mean_se(&a), mean_se(&b));
        let z = (ma - mb) / sa.hypot(sb);
        assert!(z.abs() < 4.0, "moment {power}: {ma} vs {mb}, z {z}");
    }
}
