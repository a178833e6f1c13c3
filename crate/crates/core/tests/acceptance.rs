//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use regen_stable::config::Config;
use regen_stable::ergodic::{b_n, c_n, renewal_sequence, RenewalChainModel};
use regen_stable::experiments::{
    run_clt_compare, run_covering_check, run_flow_convergence, run_joint_moments, run_localtime_moments, run_z_selfsim,
    ExperimentOutcome,
};
use regen_stable::interval_sets::IntervalSet;
use regen_stable::localtime::{local_time_eps, sample_mittag_leffler, LocalTimeParams};
use regen_stable::moments::{joint_moment, psi_averaged_moment, IntegrationBudget, MomentSpec};
use regen_stable::mstable::{c_alpha, c_alpha_quadrature, LevyModel};
use regen_stable::regen::{refine_covering, sample_covering, CoveringConfig, CoveringSample};
use regen_stable::stats::{log_grid, loglog_slope, mean_se};
use regen_stable::streams::stream;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

type Verdict = (bool, String);
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn outcome_verdict(o: &ExperimentOutcome, limit: Option<Duration>, took: Duration) -> Verdict {
    let mut parts: Vec<String> = o
        .checks
        .iter()
        .map(|c| format!("{} {:.5} vs {:.5} [{}]", c.name, c.value, c.target, c.detail))
        .collect();
    let in_time = limit.is_none_or(|l| took <= l);
    parts.push(format!("{:.1}s", took.as_secs_f64()));
    (o.passed() && in_time, parts.join("; "))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

fn covering(cfg: &Config) -> Verdict {
    let (o, took) = timed(|| run_covering_check(&cfg.covering_check, cfg.master_seed));
    outcome_verdict(&o.unwrap(), Some(Duration::from_secs(60)), took)
}

fn localtime_moment(cfg: &Config, which: &str) -> Verdict {
    let (o, took) = timed(|| run_localtime_moments(&cfg.localtime_moments, cfg.master_seed));
    let o = o.unwrap();
    let c = o.checks.iter().find(|c| c.name == which).expect("moment check present");
    let ok = c.passed && took <= Duration::from_secs(300);
    (ok, format!("MC {:.5} vs exact {:.5} (tolerance {:.5}); {:.1}s", c.value, c.target, c.tolerance, took.as_secs_f64()))
}

fn joint_triangle(cfg: &Config) -> Verdict {
    let (o, took) = timed(|| run_joint_moments(&cfg.joint_moments, cfg.master_seed));
    outcome_verdict(&o.unwrap(), None, took)
}

fn psi_consistency(cfg: &Config) -> Verdict {
    let j = &cfg.joint_moments;
    let spec = MomentSpec::new(j.beta, j.p, j.index_sets.clone(), j.times.clone()).unwrap();
    let budget = IntegrationBudget { evaluations: j.evaluations, target_rel_se: j.target_rel_se, seed: cfg.master_seed };
    let direct = joint_moment(&spec, &budget).unwrap();
    let avg = psi_averaged_moment(&spec, &IntegrationBudget { seed: cfg.master_seed ^ 1, ..budget }).unwrap();
    let se = direct.std_error.hypot(avg.std_error);
    let ok = (direct.value - avg.value).abs() <= 3.0 * se;
    (ok, format!("shift average {:.5} +- {:.5} vs direct {:.5} +- {:.5}", avg.value, avg.std_error, direct.value, direct.std_error))
}

fn refinement_martingale() -> Verdict {
    let (beta, p, eps, eta) = (0.75, 2, 1e-2, 1e-3);
    let params = LocalTimeParams::new(beta, p).unwrap();
    let cover = CoveringConfig::new(beta, eps, 1.0).unwrap();
    let shifts = [0.05, 0.2];
    let (s, t) = (0.2 + eps, 1.0);
    let level = |samples: &[CoveringSample], e: f64| {
        let shifted: Vec<IntervalSet> = samples.iter().zip(shifts).map(|(c, v)| c.uncovered.shift(v).unwrap()).collect();
        local_time_eps(&IntervalSet::intersect_many(shifted.iter()).unwrap(), s, t, e, &params).unwrap()
    };
    // first base covering with a visibly nonzero increment on [s, t]
    let (base, coarse) = (0..)
        .map(|i| {
            let mut rng = stream(2024, "martingale-base", i);
            let base: Vec<CoveringSample> = (0..p).map(|_| sample_covering(cover, &mut rng).unwrap()).collect();
            let l = level(&base, eps);
            (base, l)
        })
        .find(|(_, l)| *l > 0.2)
        .unwrap();
    let fine: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(2024, "martingale-refine", i);
            let refined: Vec<CoveringSample> = base.iter().map(|c| refine_covering(c, eta, &mut rng).unwrap()).collect();
            level(&refined, eta)
        })
        .collect();
    let (m, se) = mean_se(&fine);
    ((m - coarse).abs() <= 3.0 * se, format!("refined mean {m:.5} +- {se:.5} vs coarse {coarse:.5}"))
}

fn mittag_leffler() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for beta in [0.5, 0.75] {
        let ends: Vec<f64> = (0..10_000u64)
            .into_par_iter()
            .map(|i| {
                let path = sample_mittag_leffler(beta, 1.0, 10_000, &mut stream(7, "ml", i)).unwrap();
                path.values[path.values.len() - 1]
            })
            .collect();
        let (m, _) = mean_se(&ends);
        let want = 1.0 / gamma(1.0 + beta);
        let rel = (m - want).abs() / want;
        ok &= rel <= 0.02;
        parts.push(format!("beta {beta}: {m:.5} vs {want:.5} (rel {rel:.4})"));
    }
    (ok, parts.join("; "))
}

fn c_alpha_dual() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.3, 0.8, 1.5] {
        let (a, b) = (c_alpha(alpha).unwrap(), c_alpha_quadrature(alpha).unwrap());
        let rel = (a - b).abs() / a;
        ok &= rel <= 1e-6;
        parts.push(format!("alpha {alpha}: rel {rel:.1e}"));
    }
    (ok, parts.join("; "))
}

fn selfsim(cfg: &Config) -> Verdict {
    let (o, took) = timed(|| run_z_selfsim(&cfg.selfsim, cfg.master_seed));
    outcome_verdict(&o.unwrap(), Some(Duration::from_secs(1800)), took)
}

fn renewal_ratio() -> Verdict {
    let model = RenewalChainModel::new(0.75).unwrap();
    let u = renewal_sequence(&model, 10_001);
    let prod = u[10_000] * b_n(&model, 10_000);
    let ratio = (u[10_001] / u[10_000] - 1.0).abs();
    ((prod - 1.0).abs() <= 0.15 && ratio <= 0.02, format!("u_n b_n {prod:.6}; |u_(n+1)/u_n - 1| {ratio:.2e}"))
}

fn c_n_slope(cfg: &Config) -> Verdict {
    let model = RenewalChainModel::new(cfg.clt_compare.beta).unwrap();
    let levy = LevyModel::sas(cfg.clt_compare.alpha).unwrap();
    let p = cfg.clt_compare.p;
    let ns = log_grid(1e3, 1e6, 13);
    let cs: Vec<f64> = ns.iter().map(|&n| c_n(&model, &levy, p, n as u64).unwrap()).collect();
    let slope = loglog_slope(&ns, &cs).unwrap();
    let bp = regen_stable::localtime::beta_p(model.beta, p);
    let want = bp + (1.0 - bp) / levy.alpha();
    ((slope - want).abs() <= 0.02, format!("slope {slope:.5} vs {want:.5}"))
}

fn flow(cfg: &Config) -> Verdict {
    let (o, took) = timed(|| run_flow_convergence(&cfg.flow_convergence, cfg.master_seed));
    outcome_verdict(&o.unwrap(), Some(Duration::from_secs(1800)), took)
}

fn clt(cfg: &Config) -> Verdict {
    let (o, took) = timed(|| run_clt_compare(&cfg.clt_compare, cfg.master_seed));
    outcome_verdict(&o.unwrap(), None, took)
}

fn main() {
    let cfg = Config::from_toml_str("", &[], None).unwrap();
    let criteria: Vec<Criterion> = vec![
        ("covering probability", Box::new(|| covering(&cfg))),
        ("local-time first moment", Box::new(|| localtime_moment(&cfg, "first moment"))),
        ("local-time second moment", Box::new(|| localtime_moment(&cfg, "second moment"))),
        ("joint-moment oracle triangle", Box::new(|| joint_triangle(&cfg))),
        ("conditional-moment consistency", Box::new(|| psi_consistency(&cfg))),
        ("refinement martingale", Box::new(refinement_martingale)),
        ("Mittag-Leffler normalization", Box::new(mittag_leffler)),
        ("C_alpha dual evaluation", Box::new(c_alpha_dual)),
        ("self-similarity of Z", Box::new(|| selfsim(&cfg))),
        ("renewal and strong ratio", Box::new(renewal_ratio)),
        ("c_n regular variation", Box::new(|| c_n_slope(&cfg))),
        ("flow moment convergence", Box::new(|| flow(&cfg))),
        ("CLT distributional trend", Box::new(|| clt(&cfg))),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!("criterion {:>2} {} {name}: {detail}", k + 1, if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
