//! Local-time approximants of intersection sets.
//!
//! Two estimators of the local time of a `beta_p`-stable regenerative set are
//! provided: the normalized occupation measure of an `epsilon`-covering
//! intersection, and Kingman's dilation functional at finite `n`. Mittag-Leffler
//! paths (inverse stable subordinators) serve as a reference law.

use rand::Rng;
use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::interval_sets::IntervalSet;
use crate::regen::sample_positive_stable;

/// Default Kingman ladder; the last entry is the reported estimate.
pub const KINGMAN_LADDER: [u64; 3] = [100, 1_000, 10_000];

/// `beta`, `p` and the intersection index `beta_p = p*beta - p + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimeParams {
    pub beta: f64,
    pub p: usize,
    pub beta_p: f64,
}

impl LocalTimeParams {
    pub fn new(beta: f64, p: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return invalid(format!("beta must lie in (0,1), got {beta}"));
        }
        if p == 0 {
            return invalid("p must be at least 1");
        }
        let beta_p = beta_p(beta, p);
        if !(beta_p > 0.0 && beta_p < 1.0) {
            return invalid(format!(
                "beta_p = {beta_p} outside (0,1); need beta in ({}, 1) for p = {p}",
                1.0 - 1.0 / p as f64
            ));
        }
        Ok(LocalTimeParams { beta, p, beta_p })
    }

    /// `(1/Gamma(beta_p)) (epsilon/e)^(beta_p - 1)`.
    pub fn eps_normalization(&self, epsilon: f64) -> f64 {
        (epsilon / std::f64::consts::E).powf(self.beta_p - 1.0) / gamma(self.beta_p)
    }
}

pub fn beta_p(beta: f64, p: usize) -> f64 {
    p as f64 * beta - p as f64 + 1.0
}

/// A nondecreasing path sampled on a sorted grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTimePath {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl LocalTimePath {
    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Linear interpolation; clamps outside the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        let g = &self.grid;
        if g.is_empty() {
            return 0.0;
        }
        if t <= g[0] {
            return self.values[0];
        }
        let k = g.partition_point(|&x| x <= t);
        if k >= g.len() {
            return *self.values.last().unwrap();
        }
        let (t0, t1) = (g[k - 1], g[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// `L_t - L_s` for the `epsilon`-level intersection set.
pub fn local_time_eps(
    set: &IntervalSet,
    s: f64,
    t: f64,
    epsilon: f64,
    params: &LocalTimeParams,
) -> Result<f64> {
    if s > t {
        return invalid(format!("need s <= t, got s = {s}, t = {t}"));
    }
    if epsilon <= 0.0 {
        return invalid(format!("epsilon must be positive, got {epsilon}"));
    }
    let occupied = set.measure_upto(t)? - set.measure_upto(s)?;
    Ok(params.eps_normalization(epsilon) * occupied)
}

/// `t -> L_t` at every grid time, in one sweep over the set.
pub fn local_time_eps_path(
    set: &IntervalSet,
    grid: &[f64],
    epsilon: f64,
    params: &LocalTimeParams,
) -> Result<LocalTimePath> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return invalid("grid must be sorted");
    }
    if grid.iter().any(|&t| t < 0.0 || t > set.window_hi()) {
        return invalid("grid time outside window");
    }
    let norm = params.eps_normalization(epsilon);
    let ivs = set.intervals();
    let mut values = Vec::with_capacity(grid.len());
    let (mut idx, mut done) = (0usize, 0.0f64);
    for &t in grid {
        while idx < ivs.len() && ivs[idx].hi <= t {
            done += ivs[idx].len();
            idx += 1;
        }
        let partial = match ivs.get(idx) {
            Some(iv) if iv.lo < t => t - iv.lo,
            _ => 0.0,
        };
        values.push(norm * (done + partial));
    }
    Ok(LocalTimePath { grid: grid.to_vec(), values })
}

/// Kingman's functional at finite `n`:
/// `Gamma(2 - beta_p) n^(1 - beta_p) * |dilate(set ∩ [0,t], 1/n)|`.
pub fn kingman_estimate(set: &IntervalSet, t: f64, n: u64, params: &LocalTimeParams) -> Result<f64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let r = 1.0 / n as f64;
    let grown = set.restrict_upto(t)?.dilate(r)?;
    let upto = (t + 0.5 * r).min(set.window_hi());
    let lambda = grown.measure_upto(upto)?;
    Ok(gamma(2.0 - params.beta_p) * (n as f64).powf(1.0 - params.beta_p) * lambda)
}

/// Kingman estimates along [`KINGMAN_LADDER`].
pub fn kingman_ladder(set: &IntervalSet, t: f64, params: &LocalTimeParams) -> Result<Vec<(u64, f64)>> {
    KINGMAN_LADDER
        .iter()
        .map(|&n| kingman_estimate(set, t, n, params).map(|v| (n, v)))
        .collect()
}

/// Mittag-Leffler path: the right-continuous inverse of a `beta`-stable
/// subordinator with `E exp(-l sigma_t) = exp(-t l^beta)`.
///
/// The subordinator moves in local-time steps of `horizon / n_steps`; the
/// inverse is reported on the uniform grid of `n_steps + 1` points in `[0, horizon]`.
pub fn sample_mittag_leffler<R: Rng + ?Sized>(
    beta: f64,
    horizon: f64,
    n_steps: usize,
    rng: &mut R,
) -> Result<LocalTimePath> {
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0,1), got {beta}"));
    }
    if !(horizon > 0.0) || n_steps == 0 {
        return invalid("need horizon > 0 and n_steps >= 1");
    }
    let h = horizon / n_steps as f64;
    let scale = h.powf(1.0 / beta);
    let grid: Vec<f64> = (0..=n_steps).map(|j| horizon * j as f64 / n_steps as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    // `next` is the first subordinator value not yet counted.
    let mut next = scale * sample_positive_stable(beta, rng);
    let mut count: u64 = 0;
    for &t in &grid {
        while next <= t {
            count += 1;
            next += scale * sample_positive_stable(beta, rng);
        }
        values.push(h * count as f64);
    }
    Ok(LocalTimePath { grid, values })
}
