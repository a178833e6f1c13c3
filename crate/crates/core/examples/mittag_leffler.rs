//! Inverse stable subordinator paths and the mean at time one.

use regen_stable::localtime::sample_mittag_leffler;
use regen_stable::stats::mean_se;
use regen_stable::streams::stream;
use statrs::function::gamma::gamma;

fn main() -> regen_stable::Result<()> {
    let path = sample_mittag_leffler(0.5, 1.0, 10_000, &mut stream(3, "ml-path", 0))?;
    for t in [0.1, 0.25, 0.5, 1.0] {
        println!("M(t = {t}) = {:.4}", path.value_at(t));
    }
    for beta in [0.5, 0.75] {
        let ends: Vec<f64> = (0..4000)
            .map(|i| sample_mittag_leffler(beta, 1.0, 10_000, &mut stream(3, "ml-mean", i)).map(|p| p.values[p.values.len() - 1]))
            .collect::<regen_stable::Result<_>>()?;
        let (m, se) = mean_se(&ends);
        println!("beta {beta}: E M(1) = {m:.4} +- {se:.4}, expected {:.4}", 1.0 / gamma(1.0 + beta));
    }
    Ok(())
}
