//! Stable regenerative sets at resolution `epsilon` via Poisson random covering.
//!
//! A covering is a Poisson process of points `(y, z)` on `[0, horizon] x [epsilon, inf)`
//! with intensity `(1 - beta) dy z^-2 dz`; each point removes the open interval
//! `(y, y + z)`. What is left uncovered approximates a `beta`-stable regenerative
//! set, and lowering `epsilon` refines it monotonically.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{invalid, Result};
use crate::interval_sets::{Interval, IntervalSet};

/// Covering lengths above this multiple of the horizon are clipped.
pub const Z_CAP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringConfig {
    pub beta: f64,
    pub epsilon: f64,
    pub horizon: f64,
}

impl CoveringConfig {
    pub fn new(beta: f64, epsilon: f64, horizon: f64) -> Result<Self> {
        let cfg = CoveringConfig { beta, epsilon, horizon };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return invalid(format!("beta must lie in (0,1), got {}", self.beta));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return invalid(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return invalid(format!("horizon must be positive, got {}", self.horizon));
        }
        Ok(())
    }

    /// Mean number of covering points, `(1 - beta) * horizon / epsilon`.
    pub fn expected_points(&self) -> f64 {
        (1.0 - self.beta) * self.horizon / self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringPoint {
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct CoveringSample {
    pub points: Vec<CoveringPoint>,
    pub uncovered: IntervalSet,
    pub config: CoveringConfig,
}

/// Draws from `[0, 1)` mapped to `(0, 1]`.
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let draw: f64 = Poisson::new(mean).expect("positive finite mean").sample(rng);
    draw as usize
}

fn uncovered_by(points: &[CoveringPoint], horizon: f64) -> IntervalSet {
    let mut covered: Vec<Interval> = points
        .iter()
        .filter(|pt| pt.y < horizon)
        .map(|pt| Interval { lo: pt.y, hi: (pt.y + pt.z).min(horizon) })
        .collect();
    covered.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    IntervalSet::from_sorted_unchecked(covered, horizon).complement()
}

fn draw_layer<R, F>(mean: f64, horizon: f64, mut z_of: F, rng: &mut R) -> Vec<CoveringPoint>
where
    R: Rng + ?Sized,
    F: FnMut(f64) -> f64,
{
    let n = poisson_count(mean, rng);
    let cap = Z_CAP_FACTOR * horizon;
    (0..n)
        .map(|_| {
            let y = horizon * rng.random::<f64>();
            let z = z_of(open_unit(rng)).min(cap);
            CoveringPoint { y, z }
        })
        .collect()
}

/// One covering at resolution `cfg.epsilon` on `[0, cfg.horizon]`.
pub fn sample_covering<R: Rng + ?Sized>(cfg: CoveringConfig, rng: &mut R) -> Result<CoveringSample> {
    cfg.validate()?;
    let eps = cfg.epsilon;
    let points = draw_layer(cfg.expected_points(), cfg.horizon, |u| eps / u, rng);
    let uncovered = uncovered_by(&points, cfg.horizon);
    Ok(CoveringSample { points, uncovered, config: cfg })
}

/// Adds an independent layer with lengths in `[epsilon_new, epsilon)`.
///
/// The returned uncovered set is contained in the input's.
pub fn refine_covering<R: Rng + ?Sized>(
    s: &CoveringSample,
    epsilon_new: f64,
    rng: &mut R,
) -> Result<CoveringSample> {
    let eps = s.config.epsilon;
    if !(epsilon_new > 0.0 && epsilon_new < eps) {
        return invalid(format!("refinement needs 0 < epsilon_new < {eps}, got {epsilon_new}"));
    }
    let horizon = s.config.horizon;
    let (inv_new, inv_old) = (1.0 / epsilon_new, 1.0 / eps);
    let mean = (1.0 - s.config.beta) * horizon * (inv_new - inv_old);
    let layer = draw_layer(mean, horizon, |u| 1.0 / (inv_new - u * (inv_new - inv_old)), rng);
    let uncovered = s.uncovered.intersect(&uncovered_by(&layer, horizon))?;
    let mut points = s.points.clone();
    points.extend(layer);
    let config = CoveringConfig { epsilon: epsilon_new, ..s.config };
    Ok(CoveringSample { points, uncovered, config })
}

/// Inverse CDF of the shift law `P(V <= v) = v^(1 - beta)` on `[0, 1]`.
pub fn shift_from_uniform(beta: f64, u: f64) -> f64 {
    u.powf(1.0 / (1.0 - beta))
}

pub fn sample_shift<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0,1), got {beta}"));
    }
    Ok(shift_from_uniform(beta, open_unit(rng)))
}

/// Coverings paired with their shifts, one per index of `I`.
#[derive(Debug, Clone, Default)]
pub struct ShiftedFamily {
    pub members: Vec<(CoveringSample, f64)>,
}

impl ShiftedFamily {
    pub fn new(members: Vec<(CoveringSample, f64)>) -> Self {
        ShiftedFamily { members }
    }

    /// Draws `p` independent coverings and shifts from one stream.
    pub fn sample<R: Rng + ?Sized>(cfg: CoveringConfig, p: usize, rng: &mut R) -> Result<Self> {
        let mut members = Vec::with_capacity(p);
        for _ in 0..p {
            let v = sample_shift(cfg.beta, rng)?;
            members.push((sample_covering(cfg, rng)?, v));
        }
        Ok(ShiftedFamily { members })
    }
}

/// `⋂ (uncovered_i + v_i)` clipped to the common window.
pub fn intersect_shifted(fam: &ShiftedFamily) -> Result<IntervalSet> {
    let Some((first, _)) = fam.members.first() else {
        return invalid("empty shifted family");
    };
    let horizon = first.config.horizon;
    let mut acc: Option<IntervalSet> = None;
    for (sample, v) in &fam.members {
        if sample.config.horizon != horizon {
            return invalid(format!(
                "horizon mismatch: {} vs {}",
                sample.config.horizon, horizon
            ));
        }
        let shifted = sample.uncovered.shift(*v)?;
        acc = Some(match acc {
            None => shifted,
            Some(a) => a.intersect(&shifted)?,
        });
        if acc.as_ref().is_some_and(IntervalSet::is_empty) {
            break;
        }
    }
    Ok(acc.expect("at least one member"))
}

/// Positive stable variable with `E exp(-l S) = exp(-l^beta)` (Kanter's representation).
pub fn sample_positive_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    use std::f64::consts::PI;
    let u = PI * open_unit(rng).min(1.0 - f64::EPSILON);
    let w = -open_unit(rng).ln();
    let a = (beta * u).sin() / u.sin().powf(1.0 / beta);
    let b = (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    a * b
}

/// Range of a `beta`-stable subordinator on `[0, horizon]`, built from
/// positive-stable increments over `n_steps` steps per unit of local time.
///
/// The range is returned as isolated points. Independent of the covering
/// construction and intended for cross-validation.
pub fn sample_subordinator_range<R: Rng + ?Sized>(
    beta: f64,
    horizon: f64,
    n_steps: usize,
    rng: &mut R,
) -> Result<IntervalSet> {
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0,1), got {beta}"));
    }
    if n_steps == 0 {
        return invalid("n_steps must be positive");
    }
    let scale = (1.0 / n_steps as f64).powf(1.0 / beta);
    let mut level = 0.0;
    let mut pts = vec![Interval { lo: 0.0, hi: 0.0 }];
    loop {
        level += scale * sample_positive_stable(beta, rng);
        if level > horizon {
            break;
        }
        pts.push(Interval { lo: level, hi: level });
    }
    IntervalSet::canonicalize(&pts, horizon)
}
