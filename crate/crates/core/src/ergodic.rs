//! Infinite-measure-preserving systems: a null-recurrent renewal countdown
//! chain with exact wandering rates, and the Thaler interval map.
//!
//! The chain lives on `{0, 1, 2, ...}`. From `0` it draws a return time `tau`
//! and moves to `tau - 1`; from `j >= 1` it moves to `j - 1`. Its invariant
//! measure is `pi_j = P(tau > j)` and the base set is `A = {0}`. An orbit is
//! stored as its sorted visit times to `A`; the state at time `k` is the
//! distance to the next visit, so path functionals are read off by lookahead.

use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::interval_sets::neumaier_sum;
use crate::localtime::LocalTimeParams;
use crate::moments::h1;
use crate::mstable::{poisson_arrivals, rho_inverse, LevyModel, SeriesTruncation};
use crate::regen::open_unit;

/// Return-time tail `n -> P(tau > n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReturnTail {
    /// `(n + 1)^(1 - beta) - n^(1 - beta)`.
    Increment { beta: f64 },
    /// `(n + 1)^(-beta)`.
    Power { beta: f64 },
}

/// `sum_{j >= 2, j even} binom(g, j) x^j`, for `|x| <= 0.1`.
fn even_binomial_series(g: f64, x: f64) -> f64 {
    let mut coef = 1.0;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for j in 1..=40 {
        coef *= (g - (j - 1) as f64) / j as f64;
        pow *= x;
        if j % 2 == 0 {
            let term = coef * pow;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
    }
    sum
}

impl ReturnTail {
    pub fn beta(&self) -> f64 {
        match self {
            ReturnTail::Increment { beta } | ReturnTail::Power { beta } => *beta,
        }
    }

    pub fn tail(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let x = n as f64;
        match *self {
            ReturnTail::Increment { beta } => {
                let g = 1.0 - beta;
                x.powf(g) * (g * (1.0 / x).ln_1p()).exp_m1()
            }
            ReturnTail::Power { beta } => (x + 1.0).powf(-beta),
        }
    }

    /// `P(tau = k)` for `k >= 1`, free of cancellation for large `k`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let x = k as f64;
        match *self {
            ReturnTail::Increment { beta } => {
                let g = 1.0 - beta;
                if k < 10 {
                    return self.tail(k - 1) - self.tail(k);
                }
                // minus the second difference of n^g at k
                -2.0 * x.powf(g) * even_binomial_series(g, 1.0 / x)
            }
            ReturnTail::Power { beta } => x.powf(-beta) * -(-beta * (1.0 / x).ln_1p()).exp_m1(),
        }
    }

    /// Smallest `n` with `tail(n) <= u`.
    pub fn inverse(&self, u: f64) -> u64 {
        if u >= 1.0 {
            return 0;
        }
        const CAP: f64 = 1e15;
        let guess = match *self {
            ReturnTail::Increment { beta } => ((1.0 - beta) / u).powf(1.0 / beta) - 0.5,
            ReturnTail::Power { beta } => u.powf(-1.0 / beta) - 1.0,
        };
        if !(guess < CAP) {
            return CAP as u64;
        }
        let mut n = guess.max(0.0).round() as u64;
        while self.tail(n) > u {
            n += 1;
        }
        while n > 0 && self.tail(n - 1) <= u {
            n -= 1;
        }
        n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // tail(0) = 1, so u in (0, 1] never yields 0 except at u = 1
        self.inverse(open_unit(rng)).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenewalChainModel {
    pub beta: f64,
    pub tail: ReturnTail,
}

impl RenewalChainModel {
    /// Chain with the power tail `(n + 1)^(-beta)`, the default.
    pub fn new(beta: f64) -> Result<Self> {
        Self::with_tail(ReturnTail::Power { beta })
    }

    pub fn with_tail(tail: ReturnTail) -> Result<Self> {
        let beta = tail.beta();
        if !(beta > 0.0 && beta < 1.0) {
            return invalid(format!("beta must lie in (0,1), got {beta}"));
        }
        Ok(RenewalChainModel { beta, tail })
    }

    /// Invariant measure `pi_j = P(tau > j)`, with `pi_0 = 1`.
    pub fn invariant(&self, j: u64) -> f64 {
        self.tail.tail(j)
    }
}

/// `w_n = mu(phi <= n) = P(tau <= n) + sum_{j=1}^n P(tau > j)`.
pub fn wandering_rate(model: &RenewalChainModel, n: u64) -> f64 {
    let body = neumaier_sum((1..=n).map(|j| model.tail.tail(j)));
    (1.0 - model.tail.tail(n)) + body
}

/// `b_n = Gamma(beta) Gamma(2 - beta) w_n`.
pub fn b_n(model: &RenewalChainModel, n: u64) -> f64 {
    h1(model.beta) * wandering_rate(model, n)
}

/// Return probabilities `u_0..=u_{n_max}` from the renewal equation.
pub fn renewal_sequence(model: &RenewalChainModel, n_max: usize) -> Vec<f64> {
    let f: Vec<f64> = (0..=n_max as u64).map(|k| model.tail.pmf(k)).collect();
    let mut u = vec![0.0; n_max + 1];
    u[0] = 1.0;
    for n in 1..=n_max {
        u[n] = (1..=n).map(|k| f[k] * u[n - k]).sum();
    }
    u
}

/// `c_n = n (rho_inv(1 / w_n) / b_n)^p`.
pub fn c_n(model: &RenewalChainModel, levy: &LevyModel, p: usize, n: u64) -> Result<f64> {
    let w = wandering_rate(model, n);
    let b = h1(model.beta) * w;
    Ok(n as f64 * (rho_inverse(levy, 1.0 / w)? / b).powi(p as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Backend {
    /// Countdown state, plus the return time already drawn for a start at `0`.
    Renewal { state: u64, pending_tau: Option<u64> },
    Thaler { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub backend: Backend,
    pub k: u64,
}

impl FlowState {
    pub fn renewal(state: u64, pending_tau: Option<u64>) -> Self {
        FlowState { backend: Backend::Renewal { state, pending_tau }, k: 0 }
    }

    pub fn thaler(x: f64) -> Self {
        FlowState { backend: Backend::Thaler { x }, k: 0 }
    }

    pub fn in_a(&self, a_lo: f64) -> bool {
        match self.backend {
            Backend::Renewal { state, .. } => state == 0,
            Backend::Thaler { x } => x >= a_lo,
        }
    }

    /// One step of the renewal chain.
    pub fn step_renewal<R: Rng + ?Sized>(&mut self, model: &RenewalChainModel, rng: &mut R) -> Result<()> {
        let Backend::Renewal { state, pending_tau } = &mut self.backend else {
            return invalid("not a renewal state");
        };
        if *state == 0 {
            let tau = pending_tau.take().unwrap_or_else(|| model.tail.sample(rng));
            *state = tau - 1;
        } else {
            *state -= 1;
        }
        self.k += 1;
        Ok(())
    }

    /// One step of the Thaler map.
    pub fn step_thaler(&mut self, model: &ThalerMapModel) -> Result<()> {
        let Backend::Thaler { x } = &mut self.backend else {
            return invalid("not a Thaler state");
        };
        *x = thaler_step(model, *x)?;
        self.k += 1;
        Ok(())
    }
}

/// Sampler for `mu_n = mu(. ∩ {phi <= n}) / w_n`.
///
/// The first entrance time has `P(phi = k) = P(tau > k - 1) / w_n`. Given
/// `phi = k`, the start is state `k` with probability `P(tau > k) / P(tau > k - 1)`
/// and otherwise state `0` with `tau = k`.
#[derive(Debug, Clone)]
pub struct MuNSampler {
    pub model: RenewalChainModel,
    pub n: u64,
    pub w_n: f64,
    entrance: WeightedIndex<f64>,
}

impl MuNSampler {
    pub fn new(model: RenewalChainModel, n: u64) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        let weights: Vec<f64> = (0..n).map(|k| model.tail.tail(k)).collect();
        let entrance = WeightedIndex::new(&weights).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(MuNSampler { model, n, w_n: wandering_rate(&model, n), entrance })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FlowState {
        let k = self.entrance.sample(rng) as u64 + 1;
        let stay = self.model.tail.tail(k) / self.model.tail.tail(k - 1);
        if rng.random::<f64>() < stay {
            FlowState::renewal(k, None)
        } else {
            FlowState::renewal(0, Some(k))
        }
    }

    /// Start probabilities: index `j` holds `P(start = j)`.
    pub fn start_weights(&self) -> Vec<f64> {
        let t = &self.model.tail;
        let mut w: Vec<f64> = (0..=self.n).map(|j| t.tail(j) / self.w_n).collect();
        w[0] = (1.0 - t.tail(self.n)) / self.w_n;
        w
    }
}

/// Draws a start state from `mu_n`.
pub fn sample_mu_n<R: Rng + ?Sized>(model: &RenewalChainModel, n: u64, rng: &mut R) -> Result<FlowState> {
    Ok(MuNSampler::new(*model, n)?.sample(rng))
}

/// Visit times to `A` in `[1, horizon]` followed by the first visit past it.
pub fn renewal_visits<R: Rng + ?Sized>(
    model: &RenewalChainModel,
    start: &FlowState,
    horizon: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let Backend::Renewal { state, pending_tau } = start.backend else {
        return invalid("renewal visits need a renewal state");
    };
    let mut t = if state > 0 {
        state
    } else {
        pending_tau.unwrap_or_else(|| model.tail.sample(rng))
    };
    let mut visits = vec![t];
    while t <= horizon {
        t = t.saturating_add(model.tail.sample(rng));
        visits.push(t);
    }
    Ok(visits)
}

/// Per-coordinate factor of a product integrand on `A^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CylinderFactor {
    /// `1_A`.
    IndicatorA,
    /// `1_A * 1{next return within d steps}`.
    ReturnWithin { d: u64 },
}

impl CylinderFactor {
    fn mass(&self, model: &RenewalChainModel) -> f64 {
        match *self {
            CylinderFactor::IndicatorA => 1.0,
            CylinderFactor::ReturnWithin { d } => 1.0 - model.tail.tail(d),
        }
    }

    fn eval(&self, next_return: u64) -> f64 {
        match *self {
            CylinderFactor::IndicatorA => 1.0,
            CylinderFactor::ReturnWithin { d } => f64::from(u8::from(next_return <= d)),
        }
    }
}

/// `f = scale * prod_i phi_i` on `A^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandF {
    pub scale: f64,
    pub factors: Vec<CylinderFactor>,
}

impl IntegrandF {
    pub fn indicator(p: usize) -> Self {
        IntegrandF { scale: 1.0, factors: vec![CylinderFactor::IndicatorA; p] }
    }

    pub fn p(&self) -> usize {
        self.factors.len()
    }

    /// `mu^{⊗p}(f)`, exact.
    pub fn mu_mass(&self, model: &RenewalChainModel) -> f64 {
        self.scale * self.factors.iter().map(|f| f.mass(model)).product::<f64>()
    }
}

/// Simultaneous visits `k <= upto` of all orbits with the value of `f` there.
pub fn simultaneous_visits(orbits: &[&[u64]], upto: u64, f: &IntegrandF) -> Result<Vec<(u64, f64)>> {
    if orbits.len() != f.p() || orbits.is_empty() {
        return invalid(format!("f has {} factors but {} orbits were given", f.p(), orbits.len()));
    }
    let mut pos = vec![0usize; orbits.len()];
    let mut out = Vec::new();
    'outer: for (i0, &k) in orbits[0].iter().enumerate() {
        if k > upto {
            break;
        }
        pos[0] = i0;
        for (o, orbit) in orbits.iter().enumerate().skip(1) {
            while pos[o] < orbit.len() && orbit[pos[o]] < k {
                pos[o] += 1;
            }
            if pos[o] >= orbit.len() {
                break 'outer;
            }
            if orbit[pos[o]] != k {
                continue 'outer;
            }
        }
        let mut v = f.scale;
        for (o, orbit) in orbits.iter().enumerate() {
            let next = orbit.get(pos[o] + 1).map_or(u64::MAX, |&t| t - k);
            v *= f.factors[o].eval(next);
        }
        if v != 0.0 {
            out.push((k, v));
        }
    }
    Ok(out)
}

/// `L_{n,I,t}` on a grid from precomputed visit lists, given `b_n`.
pub fn flow_local_time_path(
    b_n: f64,
    n: u64,
    grid: &[f64],
    f: &IntegrandF,
    orbits: &[&[u64]],
) -> Result<Vec<f64>> {
    if grid.iter().any(|t| !(0.0..=1.0).contains(t)) || grid.windows(2).any(|w| w[0] > w[1]) {
        return invalid("grid must be sorted inside [0,1]");
    }
    let hits = simultaneous_visits(orbits, n, f)?;
    let norm = b_n.powi(f.p() as i32) / n as f64;
    let mut out = Vec::with_capacity(grid.len());
    let (mut idx, mut acc) = (0usize, 0.0);
    for &t in grid {
        let upto = (n as f64 * t).floor() as u64;
        while idx < hits.len() && hits[idx].0 <= upto {
            acc += hits[idx].1;
            idx += 1;
        }
        out.push(norm * acc);
    }
    Ok(out)
}

/// `L_{n,I,t} = (b_n^p / n) sum_{k <= nt} f(T^k x_1, ..., T^k x_p)` for
/// orbits started at `states`.
pub fn flow_local_time<R: Rng + ?Sized>(
    model: &RenewalChainModel,
    n: u64,
    t: f64,
    f: &IntegrandF,
    states: &[FlowState],
    rng: &mut R,
) -> Result<f64> {
    let orbits = states
        .iter()
        .map(|s| renewal_visits(model, s, n, rng))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&[u64]> = orbits.iter().map(Vec::as_slice).collect();
    Ok(flow_local_time_path(b_n(model, n), n, &[t], f, &refs)?[0])
}

impl MuNSampler {
    pub fn b_n(&self) -> f64 {
        h1(self.model.beta) * self.w_n
    }

    /// [`flow_local_time`] with the normalization cached in the sampler.
    pub fn flow_local_time<R: Rng + ?Sized>(
        &self,
        t: f64,
        f: &IntegrandF,
        states: &[FlowState],
        rng: &mut R,
    ) -> Result<f64> {
        let orbits = states
            .iter()
            .map(|s| renewal_visits(&self.model, s, self.n, rng))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&[u64]> = orbits.iter().map(Vec::as_slice).collect();
        Ok(flow_local_time_path(self.b_n(), self.n, &[t], f, &refs)?[0])
    }
}

/// Inputs to the partial-sum series shared across sample paths.
#[derive(Debug, Clone)]
pub struct PartialSumSetup {
    pub sampler: Arc<MuNSampler>,
    pub levy: LevyModel,
    pub trunc: SeriesTruncation,
    pub f: IntegrandF,
    rho_ref: f64,
}

impl PartialSumSetup {
    pub fn new(model: RenewalChainModel, levy: LevyModel, n: u64, trunc: SeriesTruncation, f: IntegrandF) -> Result<Self> {
        LocalTimeParams::new(model.beta, f.p())?;
        trunc.validate(f.p())?;
        let sampler = Arc::new(MuNSampler::new(model, n)?);
        let rho_ref = rho_inverse(&levy, 1.0 / sampler.w_n)?;
        Ok(PartialSumSetup { sampler, levy, trunc, f, rho_ref })
    }

    /// `G_n(y) = rho_inv(y / w_n) / rho_inv(1 / w_n)`.
    pub fn g_n(&self, y: f64) -> Result<f64> {
        Ok(rho_inverse(&self.levy, y / self.sampler.w_n)? / self.rho_ref)
    }

    pub fn c_n(&self) -> Result<f64> {
        let p = self.f.p();
        c_n(&self.sampler.model, &self.levy, p, self.sampler.n)
    }
}

/// Normalized partial sums `S_n(t)` on `grid`, via the truncated series
/// `p! sum_I prod eps_i G_n(Gamma_i) L_{n,I,t}`.
pub fn sample_partial_sum<R: Rng + ?Sized>(setup: &PartialSumSetup, grid: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let p = setup.f.p();
    let m = setup.trunc.m;
    let n = setup.sampler.n;
    let model = &setup.sampler.model;
    let bn = setup.sampler.b_n();
    let gammas = poisson_arrivals(setup.trunc.n_arrivals, rng);
    let mut weights = Vec::with_capacity(m);
    let mut orbits = Vec::with_capacity(m);
    for g in gammas.iter().take(m) {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        weights.push(sign * setup.g_n(*g)?);
        let start = setup.sampler.sample(rng);
        orbits.push(renewal_visits(model, &start, n, rng)?);
    }
    let fact: f64 = (1..=p).map(|k| k as f64).product();
    let mut values = vec![0.0; grid.len()];
    let mut idx: Vec<usize> = (0..p).collect();
    loop {
        let refs: Vec<&[u64]> = idx.iter().map(|&i| orbits[i].as_slice()).collect();
        let path = flow_local_time_path(bn, n, grid, &setup.f, &refs)?;
        let w: f64 = fact * idx.iter().map(|&i| weights[i]).product::<f64>();
        for (v, l) in values.iter_mut().zip(&path) {
            *v += w * l;
        }
        // next p-subset of 0..m in lexicographic order
        let Some(j) = (0..p).rev().find(|&j| idx[j] < m - p + j) else {
            break;
        };
        idx[j] += 1;
        for l in j + 1..p {
            idx[l] = idx[l - 1] + 1;
        }
    }
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThalerMapModel {
    pub q: f64,
    pub a_lo: f64,
}

impl ThalerMapModel {
    pub fn new(q: f64, a_lo: f64) -> Result<Self> {
        if !(q > 1.0) {
            return invalid(format!("q must exceed 1, got {q}"));
        }
        if !(a_lo > 0.0 && a_lo < 1.0) {
            return invalid(format!("A_lo must lie in (0,1), got {a_lo}"));
        }
        Ok(ThalerMapModel { q, a_lo })
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.q
    }

    /// Invariant density `x^-q + (1 + x)^-q`.
    pub fn density(&self, x: f64) -> f64 {
        x.powf(-self.q) + (1.0 + x).powf(-self.q)
    }
}

/// Unreduced branch value `x (1 + (x/(1+x))^(q-1) - x^(q-1))^(1/(1-q))`.
fn thaler_lift(q: f64, x: f64) -> f64 {
    // (x/(1+x))^(q-1) - x^(q-1) = x^(q-1) * expm1((1-q) ln(1+x))
    let delta = x.powf(q - 1.0) * ((1.0 - q) * x.ln_1p()).exp_m1();
    x * (delta.ln_1p() / (1.0 - q)).exp()
}

/// One application of `T_q`, reduced into `(0, 1]`.
pub fn thaler_step(model: &ThalerMapModel, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::TrappedOrbit(0.0));
    }
    if !(x > 0.0 && x <= 1.0) {
        return invalid(format!("Thaler map acts on (0,1], got {x}"));
    }
    let y = thaler_lift(model.q, x);
    Ok(y - y.ceil() + 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitStats {
    pub steps: u64,
    pub visits_to_a: u64,
    /// Completed excursion lengths between successive visits to `A`.
    pub return_times: Vec<u64>,
    /// Excursions stopped at `max_excursion` without returning.
    pub censored: u64,
}

impl OrbitStats {
    /// Empirical `P(R > n)` over completed and censored excursions.
    pub fn return_tail(&self, n: u64) -> f64 {
        let total = self.return_times.len() as u64 + self.censored;
        let above = self.return_times.iter().filter(|&&r| r > n).count() as u64 + self.censored;
        above as f64 / total.max(1) as f64
    }
}

/// Runs `n` steps from `x0`, recording visits to `A`. Excursions longer than
/// `max_excursion` are abandoned and the orbit restarts at `x0`: in double
/// precision an orbit very close to the neutral fixed point can freeze.
pub fn thaler_orbit_stats(model: &ThalerMapModel, x0: f64, n: u64, max_excursion: u64) -> Result<OrbitStats> {
    let mut x = x0;
    let mut stats = OrbitStats { steps: n, visits_to_a: 0, return_times: Vec::new(), censored: 0 };
    let mut last_visit: Option<u64> = None;
    for k in 1..=n {
        x = thaler_step(model, x)?;
        if x >= model.a_lo {
            stats.visits_to_a += 1;
            if let Some(prev) = last_visit {
                stats.return_times.push(k - prev);
            }
            last_visit = Some(k);
        } else if let Some(prev) = last_visit {
            if k - prev >= max_excursion {
                stats.censored += 1;
                last_visit = None;
                x = x0;
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::stream;

    fn chain() -> RenewalChainModel {
        RenewalChainModel::new(0.75).unwrap()
    }

    #[test]
    fn tails_and_pmf() {
        for tail in [ReturnTail::Increment { beta: 0.75 }, ReturnTail::Power { beta: 0.6 }] {
            assert_eq!(tail.tail(0), 1.0);
            for k in [1u64, 5, 9, 10, 11, 100, 12345] {
                let direct = tail.tail(k - 1) - tail.tail(k);
                let pmf = tail.pmf(k);
                assert!(pmf > 0.0);
                assert!((pmf - direct).abs() <= 1e-9 * pmf + 1e-15, "{k}: {pmf} vs {direct}");
            }
            for u in [0.9, 0.3, 1e-3, 1e-7] {
                let n = tail.inverse(u);
                assert!(tail.tail(n) <= u);
                assert!(n == 0 || tail.tail(n - 1) > u);
            }
        }
    }

    #[test]
    fn wandering_rate_examples() {
        let m = chain();
        assert!((wandering_rate(&m, 1) - 1.0).abs() < 1e-15);
        let mut prev = 0.0;
        for n in [1, 2, 10, 100, 1000] {
            let w = wandering_rate(&m, n);
            assert!(w >= prev);
            prev = w;
        }
        let pm = RenewalChainModel::with_tail(ReturnTail::Power { beta: 0.75 }).unwrap();
        assert!((wandering_rate(&pm, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn renewal_sequence_basics() {
        let u = renewal_sequence(&chain(), 200);
        assert_eq!(u[0], 1.0);
        assert!(u.iter().all(|&x| x > 0.0 && x <= 1.0));
        let total: f64 = (1..=200).map(|k| chain().tail.pmf(k)).sum();
        assert!(total <= 1.0);
    }

    #[test]
    fn mu_n_support_for_n_one() {
        let s = MuNSampler::new(chain(), 1).unwrap();
        let mut rng = stream(1, "mu", 0);
        for _ in 0..200 {
            match s.sample(&mut rng).backend {
                Backend::Renewal { state: 1, pending_tau: None } => {}
                Backend::Renewal { state: 0, pending_tau: Some(1) } => {}
                other => panic!("unexpected start {other:?}"),
            }
        }
        let w = s.start_weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entrance_within_n() {
        let m = chain();
        let s = MuNSampler::new(m, 50).unwrap();
        let mut rng = stream(2, "mu", 0);
        for _ in 0..500 {
            let st = s.sample(&mut rng);
            let v = renewal_visits(&m, &st, 50, &mut rng).unwrap();
            assert!(v[0] >= 1 && v[0] <= 50);
        }
    }

    #[test]
    fn step_route_matches_visit_list() {
        let m = chain();
        let s = MuNSampler::new(m, 100).unwrap();
        for i in 0..20 {
            let st = s.sample(&mut stream(3, "start", i));
            let visits = renewal_visits(&m, &st, 400, &mut stream(3, "orbit", i)).unwrap();
            let mut state = st;
            let mut rng = stream(3, "orbit", i);
            let mut stepped = Vec::new();
            while state.k < 400 {
                state.step_renewal(&m, &mut rng).unwrap();
                if state.in_a(0.0) {
                    stepped.push(state.k);
                }
            }
            let listed: Vec<u64> = visits.into_iter().filter(|&k| k <= 400).collect();
            assert_eq!(stepped, listed);
        }
    }

    #[test]
    fn flow_local_time_basics() {
        let m = chain();
        let f = IntegrandF::indicator(2);
        let a: Vec<u64> = vec![2, 5, 7, 11];
        let b: Vec<u64> = vec![5, 6, 7, 12];
        let hits = simultaneous_visits(&[&a, &b], 10, &f).unwrap();
        assert_eq!(hits, vec![(5, 1.0), (7, 1.0)]);
        let path = flow_local_time_path(b_n(&m, 10), 10, &[0.0, 0.6, 1.0], &f, &[&a, &b]).unwrap();
        let norm = b_n(&m, 10).powi(2) / 10.0;
        assert_eq!(path, vec![0.0, norm, 2.0 * norm]);
        let g = IntegrandF { scale: 1.0, factors: vec![CylinderFactor::ReturnWithin { d: 1 }, CylinderFactor::IndicatorA] };
        assert_eq!(simultaneous_visits(&[&a, &b], 10, &g).unwrap(), vec![]);
        assert!((g.mu_mass(&m) - m.tail.pmf(1)).abs() < 1e-15);
    }

    #[test]
    fn thaler_map_properties() {
        let t = ThalerMapModel::new(2.0, 0.5).unwrap();
        assert!(matches!(thaler_step(&t, 0.0), Err(Error::TrappedOrbit(_))));
        let x = 1e-6;
        let y = thaler_step(&t, x).unwrap();
        assert!(y > x && ((y - x) / x) < 1e-5);
        let h = 1e-7;
        let d = (thaler_step(&t, 2.0 * h).unwrap() - thaler_step(&t, h).unwrap()) / h;
        assert!((d - 1.0).abs() < 1e-5, "{d}");
        assert!((t.density(1.0) - (1.0 + 0.25)).abs() < 1e-15);
        for x in [0.1, 0.4, 0.62, 0.9, 1.0] {
            let y = thaler_step(&t, x).unwrap();
            assert!(y > 0.0 && y <= 1.0);
        }
    }
}
