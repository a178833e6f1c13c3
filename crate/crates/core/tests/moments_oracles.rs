use regen_stable::experiments::eps_joint_moment_samples;
use regen_stable::moments::{
    closed_increment_moment, joint_moment, joint_moment_numeric, kernel_eval, IntegrationBudget, KernelKind, Method,
    MomentEstimate, MomentSpec,
};
use regen_stable::stats::mean_se;
use statrs::function::gamma::gamma;

const BETA: f64 = 0.75;

fn c() -> f64 {
    gamma(BETA) * gamma(2.0 - BETA)
}

// p = 2, I1 = (1,2), I2 = (2,3): c^3 / Gamma(1/2)^2 times the integral of
// |x - y|^(beta - 1) over [0, t1] x [0, 1].
fn overlap_oracle(t1: f64) -> f64 {
    let b = BETA;
    let area = (t1.powf(b + 1.0) + 1.0 - (1.0 - t1).powf(b + 1.0)) / (b * (b + 1.0));
    c().powi(3) / std::f64::consts::PI * area
}

fn within(est: &MomentEstimate, want: f64, sigmas: f64) -> bool {
    (est.value - want).abs() <= sigmas * est.std_error
}

fn spec(sets: &[[usize; 2]], times: &[f64]) -> MomentSpec {
    MomentSpec::new(BETA, 2, sets.iter().map(|s| s.to_vec()).collect(), times.to_vec()).unwrap()
}

#[test]
fn overlapping_pair_matches_analytic_integral() {
    let budget = IntegrationBudget::default();
    for t1 in [1.0, 0.6] {
        let est = joint_moment(&spec(&[[1, 2], [2, 3]], &[t1, 1.0]), &budget).unwrap();
        assert_eq!(est.method, Method::Quadrature);
        let want = overlap_oracle(t1);
        assert!(within(&est, want, 4.0), "t1 {t1}: {} +- {} vs {want}", est.value, est.std_error);
        assert!(est.rel_error() <= 0.01);
    }
}

#[test]
fn disjoint_sets_factorize() {
    let est = joint_moment(&spec(&[[1, 2], [3, 4]], &[0.5, 0.8]), &IntegrationBudget::default()).unwrap();
    let first = |t: f64| c().powi(2) / gamma(0.5) * t;
    let want = first(0.5) * first(0.8);
    assert!(within(&est, want, 4.0), "{} +- {} vs {want}", est.value, est.std_error);
}

#[test]
fn numeric_route_reproduces_closed_form() {
    for r in [2u32, 3] {
        let sets = vec![[1, 2]; r as usize];
        let times = vec![1.0; r as usize];
        let s = spec(&sets, &times);
        let closed = joint_moment(&s, &IntegrationBudget::default()).unwrap();
        assert_eq!(closed.method, Method::ClosedForm);
        assert_eq!(closed.value, closed_increment_moment(BETA, 2, r, 0.0, 1.0).unwrap());
        let num = joint_moment_numeric(&s, &IntegrationBudget::default()).unwrap();
        assert!(within(&num, closed.value, 4.0), "r {r}: {} +- {} vs {}", num.value, num.std_error, closed.value);
    }
}

#[test]
fn closed_form_special_cases() {
    let v = closed_increment_moment(0.4, 1, 1, 0.0, 1.0).unwrap();
    assert!((v - gamma(1.6)).abs() < 1e-12);
    assert_eq!(closed_increment_moment(BETA, 2, 2, 0.3, 0.3).unwrap(), 0.0);
    let a = closed_increment_moment(BETA, 2, 2, 0.2, 0.7).unwrap();
    let b = closed_increment_moment(BETA, 2, 2, 0.0, 0.5).unwrap();
    assert!((a - b).abs() < 1e-14);
}

#[test]
fn nondecreasing_in_each_time() {
    let budget = IntegrationBudget::default();
    let lo = joint_moment(&spec(&[[1, 2], [2, 3]], &[0.5, 1.0]), &budget).unwrap();
    let hi = joint_moment(&spec(&[[1, 2], [2, 3]], &[0.6, 1.0]), &budget).unwrap();
    assert!(hi.value - lo.value > -2.0 * lo.std_error.hypot(hi.std_error));
    assert!(overlap_oracle(0.6) > overlap_oracle(0.5));
}

#[test]
fn invariant_under_permuting_factors() {
    let a = joint_moment(&spec(&[[1, 2], [2, 3]], &[0.6, 1.0]), &IntegrationBudget::default()).unwrap();
    let b = joint_moment(&spec(&[[2, 3], [1, 2]], &[1.0, 0.6]), &IntegrationBudget { seed: 99, ..Default::default() })
        .unwrap();
    let z = (a.value - b.value) / a.std_error.hypot(b.std_error);
    assert!(z.abs() < 4.0, "{} vs {}", a.value, b.value);
}

#[test]
fn local_time_monte_carlo_agrees_with_integral() {
    let s = spec(&[[1, 2], [2, 3]], &[1.0, 1.0]);
    let xs = eps_joint_moment_samples(&s, 1e-3, 20_000, 5).unwrap();
    let (m, se) = mean_se(&xs);
    let want = overlap_oracle(1.0);
    // the epsilon-level moments approach the limit from below
    assert!((m - want).abs() < 4.0 * se + 0.03 * want, "{m} +- {se} vs {want}");
}

#[test]
fn smoothed_kernel_increases_to_limit() {
    let x = [0.05, 0.2, 0.21, 0.6];
    let g = kernel_eval(KernelKind::G, BETA, None, &x).unwrap();
    let mut prev = 0.0;
    for eps in [0.1, 0.03, 0.01, 1e-3, 1e-4] {
        let ge = kernel_eval(KernelKind::GEps, BETA, Some(eps), &x).unwrap();
        assert!(ge >= prev && ge <= g * (1.0 + 1e-12), "eps {eps}: {ge} vs {g}");
        prev = ge;
    }
    assert!((prev - g).abs() < 1e-12 * g);
}

#[test]
fn kernels_are_symmetric_and_reject_diagonals() {
    let h12 = kernel_eval(KernelKind::H, BETA, None, &[0.2, 0.7]).unwrap();
    let h21 = kernel_eval(KernelKind::H, BETA, None, &[0.7, 0.2]).unwrap();
    assert_eq!(h12, h21);
    assert!((kernel_eval(KernelKind::H, BETA, None, &[0.3]).unwrap() - c()).abs() < 1e-14);
    assert!(kernel_eval(KernelKind::G, BETA, None, &[0.3, 0.3]).is_err());
    let fe = kernel_eval(KernelKind::FEps, BETA, Some(0.01), &[0.01]).unwrap();
    assert!((fe - 0.01f64.powf(BETA - 1.0)).abs() < 1e-12 * fe);
}
