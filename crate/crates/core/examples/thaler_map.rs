//! Orbit of a Thaler map with an indifferent fixed point at zero.

use regen_stable::ergodic::{thaler_orbit_stats, ThalerMapModel};
use regen_stable::stats::{log_grid, loglog_slope};

fn main() -> regen_stable::Result<()> {
    let model = ThalerMapModel::new(2.0, 0.5)?;
    println!("beta = {}, density at 0.1 = {:.3}", model.beta(), model.density(0.1));
    let st = thaler_orbit_stats(&model, 0.7, 5_000_000, 1_000_000)?;
    println!("{} steps, {} visits to A, {} returns", st.steps, st.visits_to_a, st.return_times.len());
    let ns = log_grid(10.0, 1e4, 7);
    let tail: Vec<f64> = ns.iter().map(|&n| st.return_tail(n as u64)).collect();
    for (n, p) in ns.iter().zip(&tail) {
        println!("  P(return > {n:>7.0}) = {p:.2e}");
    }
    println!("tail slope {:.3} (-beta = -0.5)", loglog_slope(&ns, &tail)?);
    Ok(())
}
