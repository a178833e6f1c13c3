//! Summary statistics, two-sample Kolmogorov-Smirnov tests and log-log fits.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub mean: f64,
    pub std_error: f64,
    pub quantiles: Vec<(f64, f64)>,
    pub ks_statistic: Option<f64>,
    pub n_samples: usize,
}

pub const DEFAULT_QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

impl StatSummary {
    pub fn from_samples(xs: &[f64], qs: &[f64]) -> Self {
        let (mean, std_error) = mean_se(xs);
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut qs = qs.to_vec();
        qs.sort_by(f64::total_cmp);
        let quantiles = qs.iter().map(|&q| (q, quantile_sorted(&sorted, q))).collect();
        StatSummary { mean, std_error, quantiles, ks_statistic: None, n_samples: xs.len() }
    }
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, q)
}

/// `(estimate - target) / std_error`.
pub fn z_score(estimate: f64, target: f64, std_error: f64) -> f64 {
    if std_error == 0.0 {
        return if estimate == target { 0.0 } else { f64::INFINITY.copysign(estimate - target) };
    }
    (estimate - target) / std_error
}

/// Two-sample Kolmogorov-Smirnov distance `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov survival function `Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let term = sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample KS test with the asymptotic p-value and the usual
/// small-sample correction of the scaling.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return invalid("KS test needs two nonempty samples");
    }
    let d = ks_statistic(a, b);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let s = ne.sqrt();
    let p_value = kolmogorov_q((s + 0.12 + 0.11 / s) * d);
    Ok(KsResult { statistic: d, p_value })
}

/// Bootstrap standard error of the KS distance.
pub fn bootstrap_ks_se<R: Rng + ?Sized>(a: &[f64], b: &[f64], n_boot: usize, rng: &mut R) -> f64 {
    let mut stats = Vec::with_capacity(n_boot);
    let mut ra = vec![0.0; a.len()];
    let mut rb = vec![0.0; b.len()];
    for _ in 0..n_boot {
        for x in ra.iter_mut() {
            *x = a[rng.random_range(0..a.len())];
        }
        for x in rb.iter_mut() {
            *x = b[rng.random_range(0..b.len())];
        }
        stats.push(ks_statistic(&ra, &rb));
    }
    let (m, _) = mean_se(&stats);
    let var = stats.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (n_boot.max(2) - 1) as f64;
    var.sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return invalid("log-log fit needs two or more paired points");
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return invalid("log-log fit needs positive data");
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `n` points spaced evenly on a log scale between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::stream;

    #[test]
    fn summary_and_quantiles() {
        let xs: Vec<f64> = (1..=5).map(f64::from).collect();
        let s = StatSummary::from_samples(&xs, &[0.9, 0.5]);
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.quantiles, vec![(0.5, 3.0), (0.9, 4.6)]);
        assert!((s.std_error - (2.5f64 / 5.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ks_identical_and_disjoint() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_statistic(&a, &a), 0.0);
        assert_eq!(ks_statistic(&a, &[4.0, 5.0]), 1.0);
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 1e-3);
    }

    #[test]
    fn ks_same_law_not_rejected() {
        let mut rng = stream(1, "ks", 0);
        let a: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!(r.p_value > 0.01, "{r:?}");
        let c: Vec<f64> = b.iter().map(|x| x * 1.2).collect();
        assert!(ks_two_sample(&a, &c).unwrap().p_value < 1e-6);
        let se = bootstrap_ks_se(&a, &b, 50, &mut rng);
        assert!(se > 0.0 && se < 0.05);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = log_grid(10.0, 1e4, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.25)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 0.25).abs() < 1e-12);
    }
}
