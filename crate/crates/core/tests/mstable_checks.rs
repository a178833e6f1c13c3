use rayon::prelude::*;
use regen_stable::experiments::z_marginal;
use regen_stable::mstable::{
    c_alpha, c_alpha_quadrature, expected_truncation_tail, poisson_arrivals, sample_z_path, sample_z_path_signed, truncation_diagnostic_given,
    SeriesTruncation, ZParams,
};
use regen_stable::stats::{log_grid, loglog_slope, mean_se, quantile};
use regen_stable::streams::stream;

// Only odd orders: for even p every term carries an even number of signs.
#[test]
fn odd_order_marginals_are_symmetric() {
    for (alpha, beta, p) in [(1.5, 0.8, 1), (0.8, 0.8, 3)] {
        let params = ZParams::new(alpha, beta, p).unwrap();
        let trunc = SeriesTruncation::new(12, 50, p).unwrap();
        let xs = z_marginal(params, trunc, 1e-3, 1.0, 8000, 31, "sym").unwrap();
        let n = xs.len() as f64;
        for q in [0.1, 0.25] {
            // the fraction below minus the (1 - q)-quantile should be q
            let upper = quantile(&xs, 1.0 - q);
            let frac = xs.iter().filter(|&&x| x <= -upper).count() as f64 / n;
            let se = (q * (1.0 - q) / n).sqrt();
            assert!((frac - q).abs() < 4.0 * se, "p {p}, q {q}: {frac}");
        }
    }
}

#[test]
fn even_order_paths_ignore_global_sign() {
    let params = ZParams::new(0.8, 0.75, 2).unwrap();
    let grid = [0.0, 0.5, 1.0];
    for i in 0..20 {
        let up = sample_z_path_signed(params, SeriesTruncation::default(), 1e-3, &grid, 1.0, &mut stream(6, "flip", i));
        let down = sample_z_path_signed(params, SeriesTruncation::default(), 1e-3, &grid, -1.0, &mut stream(6, "flip", i));
        assert_eq!(up.unwrap().values, down.unwrap().values);
    }
}

#[test]
fn median_scales_with_hurst_index() {
    let params = ZParams::new(1.5, 0.8, 1).unwrap();
    let h = params.hurst();
    let trunc = SeriesTruncation::new(12, 50, 1).unwrap();
    let abs_median = |t: f64, tag: &str| {
        let xs: Vec<f64> = z_marginal(params, trunc, 1e-3, t, 4000, 8, tag).unwrap().iter().map(|x| x.abs()).collect();
        quantile(&xs, 0.5)
    };
    let ratio = abs_median(0.25, "med-a") / abs_median(1.0, "med-b");
    let want = 0.25f64.powf(h);
    assert!((ratio / want - 1.0).abs() < 0.1, "ratio {ratio} vs {want}");
}

// Adding the terms with m1 < max I <= m2 changes Z(1) by a sum with
// conditional second moment equal to the diagnostic over those terms.
#[test]
fn truncation_increments_match_diagnostic() {
    let params = ZParams::new(0.8, 0.75, 2).unwrap();
    let (m1, m2, n_arr) = (4, 8, 50);
    let ratios: Vec<f64> = (0..3000u64)
        .into_par_iter()
        .map(|i| {
            let path = |m| {
                let trunc = SeriesTruncation::new(m, n_arr, 2).unwrap();
                sample_z_path(params, trunc, 1e-3, &[1.0], &mut stream(4, "trunc", i)).unwrap().values[0]
            };
            let d = path(m2) - path(m1);
            let gammas = poisson_arrivals(n_arr, &mut stream(4, "trunc", i));
            let partial = SeriesTruncation { m: m1, n_arrivals: m2 };
            d * d / truncation_diagnostic_given(params, partial, &gammas).unwrap()
        })
        .collect();
    let (m, se) = mean_se(&ratios);
    assert!((m - 1.0).abs() < 4.0 * se + 0.05, "mean ratio {m} +- {se}");
}

#[test]
fn diagnostic_decays_at_rate_one_minus_two_over_alpha() {
    for alpha in [0.8, 1.5] {
        let params = ZParams::new(alpha, 0.75, 2).unwrap();
        let ms = log_grid(20.0, 400.0, 8);
        let tails: Vec<f64> = ms
            .iter()
            .map(|&m| expected_truncation_tail(params, SeriesTruncation::new(m.round() as usize, 40_000, 2).unwrap()).unwrap())
            .collect();
        let slope = loglog_slope(&ms, &tails).unwrap();
        assert!((slope - (1.0 - 2.0 / alpha)).abs() < 0.05, "alpha {alpha}: slope {slope}");
    }
}

#[test]
fn c_alpha_quadrature_matches_identity() {
    for alpha in [0.3, 0.8, 1.0, 1.5] {
        let (a, b) = (c_alpha(alpha).unwrap(), c_alpha_quadrature(alpha).unwrap());
        assert!((a - b).abs() <= 1e-6 * a, "alpha {alpha}: {a} vs {b}");
    }
}
