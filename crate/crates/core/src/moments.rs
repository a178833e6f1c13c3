//! Kernels and moment formulas for intersection local times.
//!
//! Multi-dimensional moment integrals have power singularities on every
//! coincidence `x_a = x_b` of coordinates that share an index. They are
//! estimated by stratifying over the ordering of the coordinates and, inside a
//! stratum, sampling successive gaps from power-law proposals. Every singular
//! factor is attributed to the gap that ends at its right endpoint, which keeps
//! the importance weights bounded.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Error, Result};
use crate::localtime::beta_p;
use crate::regen::{open_unit, shift_from_uniform};
use crate::streams::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    H,
    G,
    GEps,
    FEps,
}

/// `f_eps(y)`: exponential branch below `epsilon`, power branch above.
pub fn f_eps(beta: f64, epsilon: f64, y: f64) -> f64 {
    if y <= epsilon {
        ((y / epsilon - 1.0).exp() * epsilon).powf(beta - 1.0)
    } else {
        y.powf(beta - 1.0)
    }
}

/// `Gamma(beta) Gamma(2 - beta)`, the one-point value of `h`.
pub fn h1(beta: f64) -> f64 {
    gamma(beta) * gamma(2.0 - beta)
}

fn sorted(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return invalid("kernel argument must be finite");
    }
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

fn singular(x: &[f64]) -> Error {
    Error::SingularInput(format!("kernel evaluated on the diagonal at {x:?}"))
}

/// Evaluates `h_q`, `g_q`, `g_{q,eps}` or `f_eps`. Arguments of the symmetric
/// kernels are sorted first; `g` measures gaps from the origin.
pub fn kernel_eval(kind: KernelKind, beta: f64, epsilon: Option<f64>, x: &[f64]) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0,1), got {beta}"));
    }
    let eps = match kind {
        KernelKind::GEps | KernelKind::FEps => match epsilon {
            Some(e) if e > 0.0 => e,
            _ => return invalid("epsilon > 0 required for g_eps and f_eps"),
        },
        _ => 0.0,
    };
    let s = sorted(x)?;
    match kind {
        KernelKind::H => {
            if s.is_empty() {
                return Ok(1.0);
            }
            let mut v = h1(beta);
            for w in s.windows(2) {
                let gap = w[1] - w[0];
                if gap <= 0.0 {
                    return Err(singular(x));
                }
                v *= gap.powf(beta - 1.0);
            }
            Ok(v)
        }
        KernelKind::G | KernelKind::GEps => {
            if s.first().is_some_and(|&v| v < 0.0) {
                return invalid("g kernels need nonnegative arguments");
            }
            let mut prev = 0.0;
            let mut v = 1.0;
            for &xi in &s {
                let gap = xi - prev;
                v *= if kind == KernelKind::G {
                    if gap <= 0.0 {
                        return Err(singular(x));
                    }
                    gap.powf(beta - 1.0)
                } else {
                    f_eps(beta, eps, gap)
                };
                prev = xi;
            }
            Ok(v)
        }
        KernelKind::FEps => match s.as_slice() {
            [y] if *y >= 0.0 => Ok(f_eps(beta, eps, *y)),
            _ => invalid("f_eps takes a single nonnegative argument"),
        },
    }
}

/// `P(x_1, ..., x_q all uncovered)` for one covering at resolution `epsilon`.
pub fn coverage_probability(beta: f64, epsilon: f64, x: &[f64]) -> Result<f64> {
    let g = kernel_eval(KernelKind::GEps, beta, Some(epsilon), x)?;
    Ok((std::f64::consts::E / epsilon).powf(x.len() as f64 * (beta - 1.0)) * g)
}

/// `E (L_t - L_s)^r` for a `p`-fold intersection local time.
pub fn closed_increment_moment(beta: f64, p: usize, r: u32, s: f64, t: f64) -> Result<f64> {
    let bp = beta_p(beta, p);
    if !(beta > 0.0 && beta < 1.0) || !(bp > 0.0 && bp < 1.0) {
        return invalid(format!("infeasible parameters beta = {beta}, p = {p} (beta_p = {bp})"));
    }
    if r == 0 {
        return invalid("r must be at least 1");
    }
    if !(0.0 <= s && s <= t) {
        return invalid(format!("need 0 <= s <= t, got s = {s}, t = {t}"));
    }
    let rf = r as f64;
    let fact: f64 = (1..=r).map(f64::from).product();
    let e = (rf - 1.0) * bp + 1.0;
    Ok(h1(beta).powi(p as i32) * fact / (gamma(bp) * gamma(e + 1.0)) * (t - s).powf(e))
}

/// Index sets `I_1..I_r`, times `t_1..t_r` and `(beta, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub beta: f64,
    pub p: usize,
    pub index_sets: Vec<Vec<usize>>,
    pub times: Vec<f64>,
}

impl MomentSpec {
    pub fn new(beta: f64, p: usize, index_sets: Vec<Vec<usize>>, times: Vec<f64>) -> Result<Self> {
        let spec = MomentSpec { beta, p, index_sets, times };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bp = beta_p(self.beta, self.p);
        if !(self.beta > 0.0 && self.beta < 1.0) || !(bp > 0.0 && bp < 1.0) {
            return invalid(format!(
                "infeasible parameters beta = {}, p = {} (beta_p = {bp})",
                self.beta, self.p
            ));
        }
        if self.index_sets.is_empty() || self.index_sets.len() != self.times.len() {
            return invalid("need r >= 1 index sets and as many times");
        }
        if self.index_sets.len() > 8 {
            return invalid("at most 8 factors are supported");
        }
        for set in &self.index_sets {
            if set.len() != self.p {
                return invalid(format!("index set {set:?} does not have p = {} entries", self.p));
            }
            if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("index set {set:?} must be strictly increasing positive integers"));
            }
        }
        if let Some(t) = self.times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return invalid(format!("times must lie in [0,1], got {t}"));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.index_sets.len()
    }

    pub fn beta_p(&self) -> f64 {
        beta_p(self.beta, self.p)
    }

    /// Largest index appearing in any set.
    pub fn k(&self) -> usize {
        self.index_sets.iter().flat_map(|s| s.iter().copied()).max().unwrap_or(0)
    }

    /// `{l : i in I_l}` (zero-based `l`).
    pub fn membership(&self, i: usize) -> Vec<usize> {
        (0..self.r()).filter(|&l| self.index_sets[l].contains(&i)).collect()
    }

    fn closed_form_case(&self) -> bool {
        self.index_sets.iter().all(|s| *s == self.index_sets[0])
            && self.times.iter().all(|&t| t == self.times[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    /// Set when the budget ran out before the target precision.
    pub partial: bool,
}

impl MomentEstimate {
    fn exact(value: f64) -> Self {
        MomentEstimate { value, std_error: 0.0, method: Method::ClosedForm, partial: false }
    }

    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.std_error / self.value.abs()
        }
    }
}

/// Evaluation budget of the stratified sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationBudget {
    pub evaluations: u64,
    pub target_rel_se: f64,
    pub seed: u64,
}

impl Default for IntegrationBudget {
    fn default() -> Self {
        IntegrationBudget { evaluations: 1_000_000, target_rel_se: 0.005, seed: 0x5eed }
    }
}

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Moments {
    fn push(&mut self, w: f64) {
        self.n += 1;
        self.sum += w;
        self.sumsq += w * w;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sumsq += o.sumsq;
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    fn var_of_mean(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return 0.0;
        }
        let m = self.mean();
        ((self.sumsq / n - m * m).max(0.0)) * n / (n - 1.0) / n
    }
}

/// Integrand layout shared by `h` and `g` integrals.
///
/// `lower[l]` is the lower limit of coordinate `l`; `start[i]` is the left
/// anchor of index `i` (none for `h`, the shift `v_i` for `g`).
struct Integrand<'a> {
    spec: &'a MomentSpec,
    lower: Vec<f64>,
    start: Vec<Option<f64>>,
    /// Product of constant factors and the `1 / Gamma(beta_p)^r` prefactor.
    constant: f64,
}

impl<'a> Integrand<'a> {
    fn for_h(spec: &'a MomentSpec) -> Self {
        let k = spec.k();
        let used = (1..=k).filter(|&i| !spec.membership(i).is_empty()).count();
        let constant = h1(spec.beta).powi(used as i32) / gamma(spec.beta_p()).powi(spec.r() as i32);
        Integrand { spec, lower: vec![0.0; spec.r()], start: vec![None; k + 1], constant }
    }

    fn for_g(spec: &'a MomentSpec, v: &[f64]) -> Self {
        let lower = spec
            .index_sets
            .iter()
            .map(|set| set.iter().map(|&i| v[i - 1]).fold(0.0, f64::max))
            .collect();
        let mut start = vec![None; spec.k() + 1];
        for i in 1..=spec.k() {
            start[i] = Some(v[i - 1]);
        }
        let constant = 1.0 / gamma(spec.beta_p()).powi(spec.r() as i32);
        Integrand { spec, lower, start, constant }
    }

    /// One weighted draw from the stratum given by `order`.
    fn draw<R: Rng + ?Sized>(&self, order: &[usize], rng: &mut R) -> f64 {
        let spec = self.spec;
        let r = order.len();
        let one_minus_beta = 1.0 - spec.beta;
        let mut last: Vec<Option<f64>> = self.start.clone();
        let mut y_prev = f64::NEG_INFINITY;
        let mut w = self.constant;
        for j in 0..r {
            let l = order[j];
            let upper = order[j..].iter().map(|&m| spec.times[m]).fold(f64::INFINITY, f64::min);
            let lo = y_prev.max(self.lower[l]).max(0.0);
            if upper <= lo {
                return 0.0;
            }
            let set = &spec.index_sets[l];
            let anchored = set.iter().filter(|&&i| last[i].is_some()).count();
            let a = -one_minus_beta * anchored as f64;
            let width = upper - lo;
            let gap = width * open_unit(rng).powf(1.0 / (a + 1.0));
            w *= width.powf(a + 1.0) / (a + 1.0);
            let y = lo + gap;
            for &i in set {
                if let Some(c) = last[i] {
                    // distance to the anchor is at least the sampled gap
                    let d = (lo - c) + gap;
                    if d > gap {
                        w *= (gap / d).powf(one_minus_beta);
                    }
                }
                last[i] = Some(y);
            }
            y_prev = y;
        }
        w
    }
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Runs rounds of one chunk per stratum until the target or budget is met.
fn stratified(integrand: &Integrand, budget: &IntegrationBudget, tag: &str) -> MomentEstimate {
    let strata = permutations(integrand.spec.r());
    let mut acc = vec![Moments::default(); strata.len()];
    let mut used = 0u64;
    let mut round = 0u64;
    loop {
        let chunks: Vec<Moments> = strata
            .par_iter()
            .enumerate()
            .map(|(s, order)| {
                let mut rng = stream(budget.seed, tag, ((s as u64) << 32) | round);
                let mut m = Moments::default();
                for _ in 0..CHUNK {
                    m.push(integrand.draw(order, &mut rng));
                }
                m
            })
            .collect();
        for (a, c) in acc.iter_mut().zip(&chunks) {
            a.merge(c);
        }
        used += CHUNK * strata.len() as u64;
        round += 1;
        let value: f64 = acc.iter().map(Moments::mean).sum();
        let se = acc.iter().map(Moments::var_of_mean).sum::<f64>().sqrt();
        let met = se <= budget.target_rel_se * value.abs() || value == 0.0 && se == 0.0;
        // a round needs room for every stratum
        let exhausted = used + CHUNK * strata.len() as u64 > budget.evaluations;
        if met || exhausted {
            return MomentEstimate { value, std_error: se, method: Method::Quadrature, partial: !met };
        }
    }
}

/// `E prod_l L_{I_l, t_l}` for the intersection local times of shifted
/// stable regenerative sets.
pub fn joint_moment(spec: &MomentSpec, budget: &IntegrationBudget) -> Result<MomentEstimate> {
    spec.validate()?;
    if spec.times.contains(&0.0) {
        return Ok(MomentEstimate::exact(0.0));
    }
    if spec.closed_form_case() {
        let v = closed_increment_moment(spec.beta, spec.p, spec.r() as u32, 0.0, spec.times[0])?;
        return Ok(MomentEstimate::exact(v));
    }
    Ok(stratified(&Integrand::for_h(spec), budget, "joint_moment"))
}

/// Same integral with the closed-form shortcut disabled.
pub fn joint_moment_numeric(spec: &MomentSpec, budget: &IntegrationBudget) -> Result<MomentEstimate> {
    spec.validate()?;
    Ok(stratified(&Integrand::for_h(spec), budget, "joint_moment"))
}

fn check_shifts(spec: &MomentSpec, v: &[f64]) -> Result<()> {
    if v.len() != spec.k() {
        return invalid(format!("expected {} shifts, got {}", spec.k(), v.len()));
    }
    if let Some(x) = v.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return invalid(format!("shifts must lie in (0,1), got {x}"));
    }
    Ok(())
}

fn psi_vanishes(spec: &MomentSpec, v: &[f64]) -> bool {
    spec.index_sets
        .iter()
        .zip(&spec.times)
        .any(|(set, &t)| set.iter().map(|&i| v[i - 1]).fold(0.0, f64::max) >= t)
}

/// Conditional moment given the shifts `v_1..v_K`.
pub fn psi_conditional(spec: &MomentSpec, v: &[f64], budget: &IntegrationBudget) -> Result<MomentEstimate> {
    spec.validate()?;
    check_shifts(spec, v)?;
    if psi_vanishes(spec, v) {
        return Ok(MomentEstimate::exact(0.0));
    }
    Ok(stratified(&Integrand::for_g(spec, v), budget, "psi_conditional"))
}

/// Averages `Psi(V)` over shifts drawn from the stationary shift law.
///
/// Each evaluation draws fresh shifts, a uniformly chosen stratum and one
/// gap sequence, so the result is an unbiased estimate of the joint moment
/// that shares no code path with the `h` kernels.
pub fn psi_averaged_moment(spec: &MomentSpec, budget: &IntegrationBudget) -> Result<MomentEstimate> {
    spec.validate()?;
    let strata = permutations(spec.r());
    let n_strata = strata.len() as f64;
    let k = spec.k();
    let chunks = (budget.evaluations / CHUNK).max(1);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(budget.seed, "psi_averaged", c);
            let mut m = Moments::default();
            let mut v = vec![0.0; k];
            for _ in 0..CHUNK {
                for x in v.iter_mut() {
                    *x = shift_from_uniform(spec.beta, open_unit(&mut rng));
                }
                let s = rng.random_range(0..strata.len());
                let w = if psi_vanishes(spec, &v) {
                    0.0
                } else {
                    n_strata * Integrand::for_g(spec, &v).draw(&strata[s], &mut rng)
                };
                m.push(w);
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    let value = total.mean();
    let std_error = total.var_of_mean().sqrt();
    let partial = std_error > budget.target_rel_se * value.abs();
    Ok(MomentEstimate { value, std_error, method: Method::MonteCarlo, partial })
}
