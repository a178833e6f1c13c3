//! Lévy measures, series representations of multiple stable integrals, and
//! the limit process `Z` of the stable-regenerative model.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::interval_sets::IntervalSet;
use crate::localtime::{local_time_eps_path, LocalTimeParams};
use crate::moments::closed_increment_moment;
use crate::quad::{integrate, wynn_epsilon};
use crate::regen::{sample_covering, sample_shift, CoveringConfig};
use crate::streams::stream;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return invalid(format!("alpha must lie in (0,2), got {alpha}"));
    }
    Ok(())
}

/// `C_alpha = (int_0^inf sin(y) y^-alpha dy)^-1` through the reflection identity.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(2.0 / PI);
    }
    Ok(1.0 / (gamma(1.0 - alpha) * (PI * alpha / 2.0).cos()))
}

/// `C_alpha` by direct quadrature of the oscillatory integral.
///
/// The first half-period is integrated after the substitution `y = pi u^m`,
/// which removes the endpoint singularity; later half-periods are smooth and
/// their alternating partial sums are accelerated with Wynn's epsilon.
pub fn c_alpha_quadrature(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let m = (2.0 / (2.0 - alpha)).ceil().max(2.0);
    let head = integrate(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let y = PI * u.powf(m);
            y.sin() * y.powf(-alpha) * PI * m * u.powf(m - 1.0)
        },
        0.0,
        1.0,
        1e-15,
        1e-13,
    );
    let mut sum = head.value;
    let mut partial = Vec::with_capacity(60);
    for k in 1..=60 {
        let a = k as f64 * PI;
        let piece = integrate(|y: f64| y.sin() * y.powf(-alpha), a, a + PI, 1e-16, 1e-13);
        sum += piece.value;
        partial.push(sum);
    }
    Ok(1.0 / wynn_epsilon(&partial))
}

/// Tail function `x -> rho((x, inf))`.
pub type TailFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum LevyModel {
    /// Symmetric alpha-stable, `rho((x, inf)) = C_alpha x^-alpha / 2`.
    SaS { alpha: f64 },
    /// A nonincreasing tail, regularly varying with index `-alpha` at infinity
    /// and `O(x^-alpha0)` at zero.
    Custom { alpha: f64, alpha0: f64, tail: TailFn },
}

impl fmt::Debug for LevyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevyModel::SaS { alpha } => write!(f, "SaS {{ alpha: {alpha} }}"),
            LevyModel::Custom { alpha, alpha0, .. } => {
                write!(f, "Custom {{ alpha: {alpha}, alpha0: {alpha0} }}")
            }
        }
    }
}

impl LevyModel {
    pub fn sas(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(LevyModel::SaS { alpha })
    }

    pub fn custom(alpha: f64, alpha0: f64, tail: TailFn) -> Result<Self> {
        check_alpha(alpha)?;
        if !(alpha0 > 0.0 && alpha0 < 2.0) {
            return invalid(format!("alpha0 must lie in (0,2), got {alpha0}"));
        }
        Ok(LevyModel::Custom { alpha, alpha0, tail })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            LevyModel::SaS { alpha } | LevyModel::Custom { alpha, .. } => *alpha,
        }
    }

    pub fn tail(&self, x: f64) -> f64 {
        match self {
            LevyModel::SaS { alpha } => c_alpha(*alpha).expect("validated alpha") * x.powf(-alpha) / 2.0,
            LevyModel::Custom { tail, .. } => tail(x),
        }
    }
}

/// `inf{x > 0 : rho((x, inf)) <= y / 2}`.
pub fn rho_inverse(model: &LevyModel, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return invalid(format!("rho_inverse needs y > 0, got {y}"));
    }
    match model {
        LevyModel::SaS { alpha } => Ok((c_alpha(*alpha)? / y).powf(1.0 / alpha)),
        LevyModel::Custom { tail, .. } => {
            let level = y / 2.0;
            let (mut lo, mut hi) = (1.0f64, 1.0f64);
            while tail(hi) > level {
                hi *= 2.0;
                if !hi.is_finite() {
                    return invalid("tail does not fall below the requested level");
                }
            }
            while tail(lo) <= level {
                lo /= 2.0;
                if lo < 1e-300 {
                    return Ok(0.0);
                }
            }
            // geometric bisection keeps relative precision across scales
            for _ in 0..200 {
                let mid = (lo * hi).sqrt();
                if tail(mid) <= level {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi / lo - 1.0 < 1e-15 {
                    break;
                }
            }
            Ok(hi)
        }
    }
}

/// Series cutoffs: the sum runs over index sets with `max I <= m`, while
/// `n_arrivals` Poisson arrivals are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    pub m: usize,
    pub n_arrivals: usize,
}

impl SeriesTruncation {
    pub fn new(m: usize, n_arrivals: usize, p: usize) -> Result<Self> {
        let t = SeriesTruncation { m, n_arrivals };
        t.validate(p)?;
        Ok(t)
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.n_arrivals >= self.m && self.m >= p) {
            return invalid(format!(
                "need n_arrivals >= m >= p, got n_arrivals = {}, m = {}, p = {p}",
                self.n_arrivals, self.m
            ));
        }
        Ok(())
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation { m: 12, n_arrivals: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZParams {
    pub alpha: f64,
    pub beta: f64,
    pub p: usize,
}

impl ZParams {
    pub fn new(alpha: f64, beta: f64, p: usize) -> Result<Self> {
        check_alpha(alpha)?;
        LocalTimeParams::new(beta, p)?;
        Ok(ZParams { alpha, beta, p })
    }

    pub fn hurst(&self) -> f64 {
        hurst_exponent(self.alpha, self.beta, self.p)
    }

    /// `p! C_alpha^(p / alpha)`.
    pub fn series_constant(&self) -> f64 {
        let fact: f64 = (1..=self.p).map(|k| k as f64).product();
        fact * c_alpha(self.alpha).expect("validated alpha").powf(self.p as f64 / self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZPathSample {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: ZParams,
    pub truncation: SeriesTruncation,
}

impl ZPathSample {
    /// Value at the grid point closest to `t`.
    pub fn at(&self, t: f64) -> f64 {
        let k = self
            .grid
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        self.values[k]
    }
}

/// Poisson arrival times `Gamma_1 < ... < Gamma_n`.
pub fn poisson_arrivals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut g = 0.0;
    (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            g += e;
            g
        })
        .collect()
}

/// Visits every `p`-subset of `0..m` in lexicographic order, carrying the
/// running intersection so that empty prefixes are pruned.
fn for_each_intersection<F>(sets: &[IntervalSet], p: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize], &IntervalSet),
{
    fn rec<F: FnMut(&[usize], &IntervalSet)>(
        sets: &[IntervalSet],
        p: usize,
        from: usize,
        idx: &mut Vec<usize>,
        acc: &IntervalSet,
        visit: &mut F,
    ) -> Result<()> {
        if idx.len() == p {
            visit(idx, acc);
            return Ok(());
        }
        for i in from..sets.len() {
            let next = acc.intersect(&sets[i])?;
            if next.is_empty() {
                continue;
            }
            idx.push(i);
            rec(sets, p, i + 1, idx, &next, visit)?;
            idx.pop();
        }
        Ok(())
    }
    let Some(first) = sets.first() else {
        return Ok(());
    };
    let full = IntervalSet::full(first.window_hi())?;
    rec(sets, p, 0, &mut Vec::with_capacity(p), &full, &mut visit)
}

/// One path of the truncated series for `Z` on `grid` (times in `[0, 1]`).
pub fn sample_z_path<R: Rng + ?Sized>(
    params: ZParams,
    trunc: SeriesTruncation,
    epsilon_cover: f64,
    grid: &[f64],
    rng: &mut R,
) -> Result<ZPathSample> {
    sample_z_path_signed(params, trunc, epsilon_cover, grid, 1.0, rng)
}

/// As [`sample_z_path`], with every Rademacher sign multiplied by `sign`.
///
/// The same stream with `sign = -1` gives the path under negated signs.
pub fn sample_z_path_signed<R: Rng + ?Sized>(
    params: ZParams,
    trunc: SeriesTruncation,
    epsilon_cover: f64,
    grid: &[f64],
    sign: f64,
    rng: &mut R,
) -> Result<ZPathSample> {
    let ZParams { alpha, beta, p } = params;
    let lt = LocalTimeParams::new(beta, p)?;
    check_alpha(alpha)?;
    trunc.validate(p)?;
    if grid.iter().any(|t| !(0.0..=1.0).contains(t)) || grid.windows(2).any(|w| w[0] > w[1]) {
        return invalid("grid must be sorted inside [0,1]");
    }
    let cfg = CoveringConfig::new(beta, epsilon_cover, 1.0)?;
    let gammas = poisson_arrivals(trunc.n_arrivals, rng);
    // per-index streams keep index i's draws independent of m
    let base: u64 = rng.random();
    let mut weights = Vec::with_capacity(trunc.m);
    let mut sets = Vec::with_capacity(trunc.m);
    for (i, g) in gammas.iter().take(trunc.m).enumerate() {
        let mut ri = stream(base, "z-index", i as u64);
        let eps_i = if ri.random::<bool>() { sign } else { -sign };
        let v = sample_shift(beta, &mut ri)?;
        let cover = sample_covering(cfg, &mut ri)?;
        weights.push(eps_i * g.powf(-1.0 / alpha));
        sets.push(cover.uncovered.shift(v)?);
    }
    let mut values = vec![0.0; grid.len()];
    let mut err = None;
    for_each_intersection(&sets, p, |idx, inter| {
        let w: f64 = idx.iter().map(|&i| weights[i]).product();
        match local_time_eps_path(inter, grid, epsilon_cover, &lt) {
            Ok(path) => {
                for (v, l) in values.iter_mut().zip(&path.values) {
                    *v += w * l;
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let c = params.series_constant();
    for v in values.iter_mut() {
        *v *= c;
    }
    Ok(ZPathSample { grid: grid.to_vec(), values, params, truncation: trunc })
}

/// `H = beta_p + (1 - beta_p) / alpha`.
pub fn hurst_exponent(alpha: f64, beta: f64, p: usize) -> f64 {
    let bp = crate::localtime::beta_p(beta, p);
    bp + (1.0 - bp) / alpha
}

/// `H = p (1/alpha - 1)(1 - beta) + 1`, algebraically equal to [`hurst_exponent`].
pub fn hurst_exponent_expanded(alpha: f64, beta: f64, p: usize) -> f64 {
    p as f64 * (1.0 / alpha - 1.0) * (1.0 - beta) + 1.0
}

/// `sum over I with max I > m, I within 1..=n, of prod_{i in I} x_i`,
/// accumulated without cancellation.
fn tail_symmetric_sum(x: &[f64], p: usize, m: usize) -> f64 {
    let mut head = vec![0.0; p + 1];
    head[0] = 1.0;
    for &xi in x.iter().take(m) {
        for k in (1..=p).rev() {
            head[k] += xi * head[k - 1];
        }
    }
    let mut tail = vec![0.0; p + 1];
    for &xi in x.iter().skip(m) {
        for k in (1..=p).rev() {
            tail[k] += xi * (tail[k - 1] + head[k - 1]);
        }
    }
    tail[p]
}

/// Truncation proxy for given arrivals: the conditional second moment of the
/// omitted series terms at `t = 1`.
pub fn truncation_diagnostic_given(params: ZParams, trunc: SeriesTruncation, gammas: &[f64]) -> Result<f64> {
    trunc.validate(params.p)?;
    if gammas.len() < trunc.n_arrivals {
        return invalid("fewer arrivals than n_arrivals");
    }
    let x: Vec<f64> = gammas[..trunc.n_arrivals].iter().map(|g| g.powf(-2.0 / params.alpha)).collect();
    let l2 = closed_increment_moment(params.beta, params.p, 2, 0.0, 1.0)?;
    Ok(params.series_constant().powi(2) * l2 * tail_symmetric_sum(&x, params.p, trunc.m))
}

/// [`truncation_diagnostic_given`] on freshly drawn arrivals.
pub fn truncation_diagnostic<R: Rng + ?Sized>(params: ZParams, trunc: SeriesTruncation, rng: &mut R) -> Result<f64> {
    let gammas = poisson_arrivals(trunc.n_arrivals, rng);
    truncation_diagnostic_given(params, trunc, &gammas)
}

/// The diagnostic with `Gamma_i` replaced by `i`.
pub fn expected_truncation_tail(params: ZParams, trunc: SeriesTruncation) -> Result<f64> {
    let gammas: Vec<f64> = (1..=trunc.n_arrivals).map(|i| i as f64).collect();
    truncation_diagnostic_given(params, trunc, &gammas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_alpha_examples() {
        assert!((c_alpha(1.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        let want = 1.0 / (PI.sqrt() * (PI / 4.0).cos());
        assert!((c_alpha(0.5).unwrap() - want).abs() < 1e-13);
        assert!(c_alpha(2.0).is_err());
        assert!(c_alpha(1.5).unwrap() > 0.0);
    }

    #[test]
    fn c_alpha_dual_evaluation() {
        for a in [0.3, 0.8, 1.0, 1.5] {
            let q = c_alpha_quadrature(a).unwrap();
            let r = c_alpha(a).unwrap();
            assert!(((q - r) / r).abs() < 1e-6, "alpha {a}: {q} vs {r}");
        }
    }

    #[test]
    fn rho_inverse_sas_and_custom() {
        let m = LevyModel::sas(0.8).unwrap();
        let c = c_alpha(0.8).unwrap();
        assert!((rho_inverse(&m, 1.0).unwrap() - c.powf(1.25)).abs() < 1e-12);
        let ratio = rho_inverse(&m, 3.0).unwrap() / rho_inverse(&m, 1.0).unwrap();
        assert!((ratio - 3f64.powf(-1.25)).abs() < 1e-12);
        assert!(rho_inverse(&m, 2.0).unwrap() <= rho_inverse(&m, 1.0).unwrap());
        assert!(rho_inverse(&m, 0.0).is_err());
        // custom tail equal to the SaS tail must agree with the closed form
        let custom = LevyModel::custom(0.8, 0.8, Arc::new(move |x: f64| c * x.powf(-0.8) / 2.0)).unwrap();
        for y in [0.01, 0.7, 5.0] {
            let a = rho_inverse(&custom, y).unwrap();
            let b = rho_inverse(&m, y).unwrap();
            assert!((a / b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hurst_forms_agree() {
        assert!((hurst_exponent(0.8, 0.75, 2) - 1.125).abs() < 1e-15);
        assert!((hurst_exponent(0.8, 1e-9, 1) - 1.25).abs() < 1e-8);
        for (a, b, p) in [(0.3, 0.9, 3), (1.7, 0.6, 2), (1.1, 0.2, 1)] {
            assert!((hurst_exponent(a, b, p) - hurst_exponent_expanded(a, b, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_sum_matches_enumeration() {
        let x = [0.9, 0.5, 0.3, 0.2, 0.1, 0.05];
        let mut brute = 0.0;
        for i in 0..6 {
            for j in i + 1..6 {
                if j >= 3 {
                    brute += x[i] * x[j];
                }
            }
        }
        assert!((tail_symmetric_sum(&x, 2, 3) - brute).abs() < 1e-15);
        assert_eq!(tail_symmetric_sum(&x, 2, 6), 0.0);
    }

    #[test]
    fn diagnostic_decreases_in_m() {
        let params = ZParams::new(0.8, 0.75, 2).unwrap();
        let gammas = poisson_arrivals(60, &mut stream(3, "diag", 0));
        let mut prev = f64::INFINITY;
        for m in [4, 8, 16, 32, 60] {
            let d = truncation_diagnostic_given(params, SeriesTruncation::new(m, 60, 2).unwrap(), &gammas).unwrap();
            assert!(d < prev || d == 0.0);
            prev = d;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn z_path_starts_at_zero_and_flips_sign() {
        let params = ZParams::new(0.8, 0.75, 2).unwrap();
        let grid = [0.0, 0.25, 0.5, 1.0];
        let trunc = SeriesTruncation::new(6, 10, 2).unwrap();
        let a = sample_z_path(params, trunc, 1e-3, &grid, &mut stream(5, "z", 0)).unwrap();
        let b = sample_z_path_signed(params, trunc, 1e-3, &grid, -1.0, &mut stream(5, "z", 0)).unwrap();
        assert_eq!(a.values[0], 0.0);
        // p = 2: a product of two flipped signs is unchanged
        assert_eq!(a.values, b.values);
        let p1 = ZParams::new(0.8, 0.75, 1).unwrap();
        let trunc1 = SeriesTruncation::new(6, 10, 1).unwrap();
        let c = sample_z_path(p1, trunc1, 1e-3, &grid, &mut stream(5, "z", 1)).unwrap();
        let d = sample_z_path_signed(p1, trunc1, 1e-3, &grid, -1.0, &mut stream(5, "z", 1)).unwrap();
        for (x, y) in c.values.iter().zip(&d.values) {
            assert_eq!(*x, -*y);
        }
    }
}
