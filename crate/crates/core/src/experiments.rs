//! Config-driven experiment runners.
//!
//! Replication `i` of an experiment draws from `stream(master_seed, tag, i)`,
//! and results are gathered in replication order, so outputs do not depend on
//! the number of worker threads.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use statrs::function::gamma::gamma;

use crate::config::{
    CltCompareConfig, Config, CoveringCheckConfig, FlowConvergenceConfig, JointMomentsConfig, LocalTimeMomentsConfig,
    SelfSimConfig, SimulateZConfig, TailKind,
};
use crate::ergodic::{
    c_n, sample_partial_sum, IntegrandF, MuNSampler, PartialSumSetup, RenewalChainModel, ReturnTail,
};
use crate::error::Result;
use crate::localtime::{local_time_eps, LocalTimeParams};
use crate::moments::{closed_increment_moment, joint_moment, psi_averaged_moment, IntegrationBudget, Method, MomentSpec};
use crate::mstable::{c_alpha, hurst_exponent, sample_z_path, LevyModel, SeriesTruncation, ZParams};
use crate::regen::{intersect_shifted, sample_covering, CoveringConfig, ShiftedFamily};
use crate::stats::{bootstrap_ks_se, ks_two_sample, log_grid, loglog_slope, mean_se, z_score, StatSummary, DEFAULT_QUANTILES};
use crate::streams::{derive_seed, stream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    CoveringCheck,
    LocaltimeMoments,
    JointMoments,
    SimulateZ,
    ZSelfsim,
    FlowConvergence,
    CltCompare,
}

impl ExperimentKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ExperimentKind::CoveringCheck => "covering_check",
            ExperimentKind::LocaltimeMoments => "localtime_moments",
            ExperimentKind::JointMoments => "joint_moments",
            ExperimentKind::SimulateZ => "simulate_z",
            ExperimentKind::ZSelfsim => "selfsim",
            ExperimentKind::FlowConvergence => "flow_convergence",
            ExperimentKind::CltCompare => "clt_compare",
        }
    }
}

/// A named pass/fail comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutcome {
    pub kind: ExperimentKind,
    pub summary: StatSummary,
    pub checks: Vec<Check>,
    pub table: Table,
    pub warnings: Vec<String>,
    pub knobs: serde_json::Value,
}

impl ExperimentOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.tag(),
            "passed": self.passed(),
            "checks": self.checks,
            "summary": self.summary,
            "warnings": self.warnings,
            "knobs": self.knobs,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    /// Writes `<tag>.csv` and `<tag>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.kind.tag()));
        let js = dir.join(format!("{}.json", self.kind.tag()));
        fs::write(&csv, self.table.to_csv())?;
        let body = serde_json::to_string_pretty(&self.summary_json()).map_err(io::Error::other)?;
        fs::write(&js, body + "\n")?;
        Ok((csv, js))
    }
}

fn check(name: &str, value: f64, target: f64, tolerance: f64, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), value, target, tolerance, passed, detail }
}

fn knobs<T: Serialize>(cfg: &T, seed: u64) -> serde_json::Value {
    json!({ "params": cfg, "master_seed": seed })
}

/// Runs `f` for replications `0..n` on their own streams, in parallel.
pub fn replicate<T, F>(n: u64, seed: u64, tag: &str, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Stream) -> Result<T> + Sync,
{
    (0..n).into_par_iter().map(|i| f(&mut stream(seed, tag, i))).collect()
}

fn fmt(x: f64) -> String {
    format!("{x:.10e}")
}

pub fn run_covering_check(cfg: &CoveringCheckConfig, seed: u64) -> Result<ExperimentOutcome> {
    let cover = CoveringConfig::new(cfg.beta, cfg.epsilon, cfg.horizon)?;
    let hits: Vec<Vec<bool>> = replicate(cfg.replications, seed, "covering_check", |rng| {
        let s = sample_covering(cover, rng)?;
        Ok(cfg.points.iter().map(|x| x.iter().all(|&xi| s.uncovered.contains(xi))).collect())
    })?;
    let n = cfg.replications as f64;
    let mut table = Table::new(&["x", "q", "beta", "epsilon", "n", "freq", "closed_form", "z"]);
    let mut checks = Vec::new();
    for (j, x) in cfg.points.iter().enumerate() {
        let count = hits.iter().filter(|h| h[j]).count() as f64;
        let freq = count / n;
        let target = crate::moments::coverage_probability(cfg.beta, cfg.epsilon, x)?;
        let se = (target * (1.0 - target) / n).sqrt();
        let z = z_score(freq, target, se);
        let label = x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        table.push(vec![
            label.clone(),
            x.len().to_string(),
            cfg.beta.to_string(),
            cfg.epsilon.to_string(),
            cfg.replications.to_string(),
            fmt(freq),
            fmt(target),
            format!("{z:.4}"),
        ]);
        checks.push(check(
            &format!("coverage x=[{label}]"),
            freq,
            target,
            cfg.z_threshold * se,
            z.abs() <= cfg.z_threshold,
            format!("z = {z:.3}"),
        ));
    }
    let first: Vec<f64> = hits.iter().map(|h| f64::from(u8::from(h[0]))).collect();
    let mut warnings = Vec::new();
    if cfg.replications < 1000 {
        warnings.push("fewer than 1000 replications: binomial z-scores are unreliable".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::CoveringCheck,
        summary: StatSummary::from_samples(&first, &DEFAULT_QUANTILES),
        checks,
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

pub fn run_localtime_moments(cfg: &LocalTimeMomentsConfig, seed: u64) -> Result<ExperimentOutcome> {
    let params = LocalTimeParams::new(cfg.beta, cfg.p)?;
    let cover = CoveringConfig::new(cfg.beta, cfg.epsilon, 1.0)?;
    let samples: Vec<f64> = replicate(cfg.replications, seed, "localtime_moments", |rng| {
        let fam = ShiftedFamily::sample(cover, cfg.p, rng)?;
        let set = intersect_shifted(&fam)?;
        local_time_eps(&set, 0.0, cfg.t, cfg.epsilon, &params)
    })?;
    let squares: Vec<f64> = samples.iter().map(|l| l * l).collect();
    let (m1, se1) = mean_se(&samples);
    let (m2, se2) = mean_se(&squares);
    let e1 = closed_increment_moment(cfg.beta, cfg.p, 1, 0.0, cfg.t)?;
    let e2 = closed_increment_moment(cfg.beta, cfg.p, 2, 0.0, cfg.t)?;
    let mut table = Table::new(&["spec_id", "method", "value", "std_error"]);
    for (id, exact, mc, se) in [("r1", e1, m1, se1), ("r2", e2, m2, se2)] {
        table.push(vec![id.into(), "closed_form".into(), fmt(exact), fmt(0.0)]);
        table.push(vec![id.into(), "monte_carlo".into(), fmt(mc), fmt(se)]);
    }
    let rel1 = (m1 - e1).abs() / e1;
    let rel2 = (m2 - e2).abs() / e2;
    let checks = vec![
        check(
            "first moment",
            m1,
            e1,
            cfg.rel_tol_first * e1,
            rel1 <= cfg.rel_tol_first,
            format!("relative error {rel1:.4}, z = {:.3}", z_score(m1, e1, se1)),
        ),
        check(
            "second moment",
            m2,
            e2,
            cfg.rel_tol_second * e2,
            rel2 <= cfg.rel_tol_second,
            format!("relative error {rel2:.4}, z = {:.3}", z_score(m2, e2, se2)),
        ),
    ];
    let mut warnings = Vec::new();
    if 3.0 * se1 > cfg.rel_tol_first * e1 {
        warnings.push("first-moment standard error too large for the configured tolerance".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::LocaltimeMoments,
        summary: StatSummary::from_samples(&samples, &DEFAULT_QUANTILES),
        checks,
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

/// Monte Carlo estimate of `E prod_l L^eps_{I_l, t_l}` from simulated coverings.
pub fn eps_joint_moment_samples(spec: &MomentSpec, epsilon: f64, n: u64, seed: u64) -> Result<Vec<f64>> {
    let params = LocalTimeParams::new(spec.beta, spec.p)?;
    let cover = CoveringConfig::new(spec.beta, epsilon, 1.0)?;
    let k = spec.k();
    replicate(n, seed, "joint_moments_mc", |rng| {
        let fam = ShiftedFamily::sample(cover, k, rng)?;
        let mut prod = 1.0;
        for (set, &t) in spec.index_sets.iter().zip(&spec.times) {
            let sub = ShiftedFamily::new(set.iter().map(|&i| fam.members[i - 1].clone()).collect());
            let inter = intersect_shifted(&sub)?;
            prod *= local_time_eps(&inter, 0.0, t, epsilon, &params)?;
            if prod == 0.0 {
                break;
            }
        }
        Ok(prod)
    })
}

fn spec_id(spec: &MomentSpec) -> String {
    let sets: Vec<String> = spec
        .index_sets
        .iter()
        .map(|s| s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("-"))
        .collect();
    let times: Vec<String> = spec.times.iter().map(|t| t.to_string()).collect();
    format!("I={};t={}", sets.join("|"), times.join("|"))
}

pub fn run_joint_moments(cfg: &JointMomentsConfig, seed: u64) -> Result<ExperimentOutcome> {
    let spec = MomentSpec::new(cfg.beta, cfg.p, cfg.index_sets.clone(), cfg.times.clone())?;
    let budget = IntegrationBudget {
        evaluations: cfg.evaluations,
        target_rel_se: cfg.target_rel_se,
        seed: derive_seed(seed, "joint_moments", 0),
    };
    let quad = joint_moment(&spec, &budget)?;
    let psi = psi_averaged_moment(&spec, &IntegrationBudget { seed: derive_seed(seed, "joint_moments", 1), ..budget })?;
    let samples = eps_joint_moment_samples(&spec, cfg.epsilon, cfg.replications, seed)?;
    let (mc, mc_se) = mean_se(&samples);
    let id = spec_id(&spec);
    let method = |m: Method| serde_json::to_value(m).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut table = Table::new(&["spec_id", "method", "value", "std_error"]);
    table.push(vec![id.clone(), method(quad.method), fmt(quad.value), fmt(quad.std_error)]);
    table.push(vec![id.clone(), "psi_average".into(), fmt(psi.value), fmt(psi.std_error)]);
    table.push(vec![id, method(Method::MonteCarlo), fmt(mc), fmt(mc_se)]);

    let comb = |a: f64, b: f64| (a * a + b * b).sqrt();
    let mut checks = Vec::new();
    if quad.method == Method::Quadrature {
        checks.push(check(
            "quadrature precision",
            quad.rel_error(),
            0.0,
            cfg.max_rel_se,
            quad.rel_error() <= cfg.max_rel_se,
            format!("relative standard error {:.5}", quad.rel_error()),
        ));
    }
    let tol = cfg.sigma * comb(quad.std_error, mc_se);
    checks.push(check(
        "local-time Monte Carlo vs integral",
        mc,
        quad.value,
        tol,
        (mc - quad.value).abs() <= tol,
        format!("z = {:.3}", (mc - quad.value) / comb(quad.std_error, mc_se)),
    ));
    let tol = cfg.sigma * comb(quad.std_error, psi.std_error);
    checks.push(check(
        "shift-averaged conditional moment vs integral",
        psi.value,
        quad.value,
        tol,
        (psi.value - quad.value).abs() <= tol,
        format!("z = {:.3}", (psi.value - quad.value) / comb(quad.std_error, psi.std_error)),
    ));
    let mut warnings = Vec::new();
    if quad.partial {
        warnings.push("integration budget exhausted before the target precision".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::JointMoments,
        summary: StatSummary::from_samples(&samples, &DEFAULT_QUANTILES),
        checks,
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

fn linspace(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

pub fn run_simulate_z(cfg: &SimulateZConfig, seed: u64) -> Result<ExperimentOutcome> {
    let params = ZParams::new(cfg.alpha, cfg.beta, cfg.p)?;
    let trunc = SeriesTruncation::new(cfg.m, cfg.n_arrivals, cfg.p)?;
    let grid = linspace(cfg.grid_points);
    let paths = replicate(cfg.replications, seed, "simulate_z", |rng| {
        sample_z_path(params, trunc, cfg.epsilon, &grid, rng)
    })?;
    let mut table = Table::new(&["replication", "t", "Z"]);
    for (i, path) in paths.iter().enumerate() {
        for (t, z) in path.grid.iter().zip(&path.values) {
            table.push(vec![i.to_string(), t.to_string(), fmt(*z)]);
        }
    }
    let ends: Vec<f64> = paths.iter().map(|p| *p.values.last().unwrap()).collect();
    let mut knobs = knobs(cfg, seed);
    knobs["hurst"] = json!(params.hurst());
    Ok(ExperimentOutcome {
        kind: ExperimentKind::SimulateZ,
        summary: StatSummary::from_samples(&ends, &DEFAULT_QUANTILES),
        checks: Vec::new(),
        table,
        warnings: Vec::new(),
        knobs,
    })
}

/// `Z(t)` at a single time for `n` independent paths.
pub fn z_marginal(params: ZParams, trunc: SeriesTruncation, epsilon: f64, t: f64, n: u64, seed: u64, tag: &str) -> Result<Vec<f64>> {
    replicate(n, seed, tag, |rng| Ok(sample_z_path(params, trunc, epsilon, &[0.0, t], rng)?.values[1]))
}

pub fn run_z_selfsim(cfg: &SelfSimConfig, seed: u64) -> Result<ExperimentOutcome> {
    let params = ZParams::new(cfg.alpha, cfg.beta, cfg.p)?;
    let trunc = SeriesTruncation::new(cfg.m, cfg.n_arrivals, cfg.p)?;
    let h = params.hurst();
    let (t_small, t_big) = (cfg.t0, cfg.c * cfg.t0);
    let big: Vec<f64> = z_marginal(params, trunc, cfg.epsilon, t_big, cfg.replications, seed, "selfsim-ct0")?
        .into_iter()
        .map(|z| z / t_big.powf(h))
        .collect();
    let small: Vec<f64> = z_marginal(params, trunc, cfg.epsilon, t_small, cfg.replications, seed, "selfsim-t0")?
        .into_iter()
        .map(|z| z / t_small.powf(h))
        .collect();
    let ks = ks_two_sample(&big, &small)?;
    let mut table = Table::new(&["c", "t0", "H", "ks", "pvalue", "n"]);
    table.push(vec![
        cfg.c.to_string(),
        cfg.t0.to_string(),
        h.to_string(),
        fmt(ks.statistic),
        fmt(ks.p_value),
        cfg.replications.to_string(),
    ]);
    let mut summary = StatSummary::from_samples(&big, &DEFAULT_QUANTILES);
    summary.ks_statistic = Some(ks.statistic);
    let mut warnings = Vec::new();
    if cfg.replications < 2000 {
        warnings.push("fewer than 2000 paths per sample: the KS test has little power".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::ZSelfsim,
        summary,
        checks: vec![check(
            "self-similarity KS",
            ks.p_value,
            cfg.level,
            0.0,
            ks.p_value > cfg.level,
            format!("KS = {:.4}, p = {:.4}, H = {h}", ks.statistic, ks.p_value),
        )],
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

fn chain(beta: f64, tail: TailKind) -> Result<RenewalChainModel> {
    RenewalChainModel::with_tail(match tail {
        TailKind::Increment => ReturnTail::Increment { beta },
        TailKind::Power => ReturnTail::Power { beta },
    })
}

/// One row of the flow convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRow {
    pub n: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub limit: f64,
}

impl FlowRow {
    pub fn deviation(&self) -> f64 {
        (self.estimate - self.limit).abs()
    }
}

/// Nonincreasing deviations, each rise allowed up to `sigma` combined
/// standard errors. Returns the number of raw rises and whether all are allowed.
pub fn deviation_trend(rows: &[FlowRow], sigma: f64) -> (usize, bool) {
    let mut rises = 0;
    let mut ok = true;
    for w in rows.windows(2) {
        let rise = w[1].deviation() - w[0].deviation();
        if rise > 0.0 {
            rises += 1;
            ok &= rise <= sigma * (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
        }
    }
    (rises, ok)
}

pub fn run_flow_convergence(cfg: &FlowConvergenceConfig, seed: u64) -> Result<ExperimentOutcome> {
    let model = chain(cfg.beta, cfg.tail)?;
    let lt = LocalTimeParams::new(cfg.beta, cfg.p)?;
    let f = IntegrandF::indicator(cfg.p);
    let limit = f.mu_mass(&model) * gamma(lt.beta_p) * closed_increment_moment(cfg.beta, cfg.p, 1, 0.0, cfg.t)?;
    let mut rows = Vec::new();
    let mut last = Vec::new();
    for &n in &cfg.n_grid {
        let sampler = MuNSampler::new(model, n)?;
        let samples = replicate(cfg.replications, seed, &format!("flow_convergence/n={n}"), |rng| {
            let states: Vec<_> = (0..cfg.p).map(|_| sampler.sample(rng)).collect();
            sampler.flow_local_time(cfg.t, &f, &states, rng)
        })?;
        let (estimate, std_error) = mean_se(&samples);
        rows.push(FlowRow { n, estimate, std_error, limit });
        last = samples;
    }
    let mut table = Table::new(&["n", "estimate", "std_error", "limit", "rel_err"]);
    for r in &rows {
        table.push(vec![r.n.to_string(), fmt(r.estimate), fmt(r.std_error), fmt(r.limit), fmt(r.deviation() / r.limit)]);
    }
    let (rises, trend_ok) = deviation_trend(&rows, cfg.sigma);
    let fin = rows.last().expect("nonempty grid");
    let rel = fin.deviation() / limit;
    let checks = vec![
        check(
            "deviation trend",
            rises as f64,
            0.0,
            cfg.sigma,
            trend_ok,
            format!("{rises} rise(s) in |estimate - limit|; each must stay within {} combined standard errors", cfg.sigma),
        ),
        check(
            "final deviation",
            rel,
            0.0,
            cfg.final_rel_tol,
            rel <= cfg.final_rel_tol,
            format!("n = {}: relative deviation {rel:.4}", fin.n),
        ),
    ];
    let mut warnings = Vec::new();
    if cfg.sigma * fin.std_error > cfg.final_rel_tol * limit {
        warnings.push("replications too few to resolve the final tolerance".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::FlowConvergence,
        summary: StatSummary::from_samples(&last, &DEFAULT_QUANTILES),
        checks,
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsRow {
    pub n: u64,
    pub ks: f64,
    pub p_value: f64,
    pub bootstrap_se: f64,
}

pub fn run_clt_compare(cfg: &CltCompareConfig, seed: u64) -> Result<ExperimentOutcome> {
    let model = chain(cfg.beta, cfg.tail)?;
    let params = ZParams::new(cfg.alpha, cfg.beta, cfg.p)?;
    let trunc = SeriesTruncation::new(cfg.m, cfg.n_arrivals, cfg.p)?;
    let levy = LevyModel::sas(cfg.alpha)?;
    let f = IntegrandF::indicator(cfg.p);
    let bp = crate::localtime::beta_p(cfg.beta, cfg.p);
    let scale = gamma(bp) * c_alpha(cfg.alpha)?.powf(-(cfg.p as f64) / cfg.alpha) * f.mu_mass(&model);
    let target: Vec<f64> = z_marginal(params, trunc, cfg.epsilon, 1.0, cfg.replications, seed, "clt_compare/z")?
        .into_iter()
        .map(|z| scale * z)
        .collect();
    let mut rows = Vec::new();
    let mut last = Vec::new();
    for (j, &n) in cfg.n_grid.iter().enumerate() {
        let setup = PartialSumSetup::new(model, levy.clone(), n, trunc, f.clone())?;
        let sums = replicate(cfg.replications, seed, &format!("clt_compare/n={n}"), |rng| {
            Ok(sample_partial_sum(&setup, &[1.0], rng)?[0])
        })?;
        let ks = ks_two_sample(&sums, &target)?;
        let se = bootstrap_ks_se(&sums, &target, cfg.bootstrap, &mut stream(seed, "clt_compare/bootstrap", j as u64));
        rows.push(KsRow { n, ks: ks.statistic, p_value: ks.p_value, bootstrap_se: se });
        last = sums;
    }
    let mut table = Table::new(&["n", "ks", "pvalue", "bootstrap_se"]);
    for r in &rows {
        table.push(vec![r.n.to_string(), fmt(r.ks), fmt(r.p_value), fmt(r.bootstrap_se)]);
    }
    let mut checks = Vec::new();
    for w in rows.windows(2) {
        let allow = cfg.sigma * (w[0].bootstrap_se.powi(2) + w[1].bootstrap_se.powi(2)).sqrt();
        let rise = w[1].ks - w[0].ks;
        checks.push(check(
            &format!("KS trend n={}->{}", w[0].n, w[1].n),
            w[1].ks,
            w[0].ks,
            allow,
            rise <= allow,
            format!("KS {:.4} -> {:.4}", w[0].ks, w[1].ks),
        ));
    }
    let mut summary = StatSummary::from_samples(&last, &DEFAULT_QUANTILES);
    summary.ks_statistic = rows.last().map(|r| r.ks);
    let mut warnings = Vec::new();
    if cfg.replications < 500 {
        warnings.push("fewer than 500 samples per law: KS distances are dominated by noise".into());
    }
    Ok(ExperimentOutcome {
        kind: ExperimentKind::CltCompare,
        summary,
        checks,
        table,
        warnings,
        knobs: knobs(cfg, seed),
    })
}

/// Derived constants for the configured parameters.
pub fn info_table(cfg: &Config) -> Result<serde_json::Value> {
    let k = &cfg.clt_compare;
    let model = chain(k.beta, k.tail)?;
    let levy = LevyModel::sas(k.alpha)?;
    let ns = log_grid(1e3, 1e6, 13);
    let cs = ns.iter().map(|&n| c_n(&model, &levy, k.p, n.round() as u64)).collect::<Result<Vec<_>>>()?;
    let bp = crate::localtime::beta_p(k.beta, k.p);
    Ok(json!({
        "alpha": k.alpha,
        "beta": k.beta,
        "p": k.p,
        "beta_p": bp,
        "hurst": hurst_exponent(k.alpha, k.beta, k.p),
        "c_alpha": c_alpha(k.alpha)?,
        "c_n_loglog_slope_1e3_1e6": loglog_slope(&ns, &cs)?,
        "version": env!("CARGO_PKG_VERSION"),
    }))
}
