//! Uncovered set of a Poisson covering: hit frequencies against the closed form.

use regen_stable::moments::coverage_probability;
use regen_stable::regen::{sample_covering, CoveringConfig};
use regen_stable::streams::stream;

fn main() -> regen_stable::Result<()> {
    let cfg = CoveringConfig::new(0.6, 0.05, 1.0)?;
    let points: [&[f64]; 3] = [&[0.5], &[0.02], &[0.3, 0.7]];
    let n = 20_000u64;
    let mut hits = [0u64; 3];
    let mut pieces = 0usize;
    for i in 0..n {
        let s = sample_covering(cfg, &mut stream(7, "covering-example", i))?;
        pieces += s.uncovered.len();
        for (h, x) in hits.iter_mut().zip(points) {
            if x.iter().all(|&xi| s.uncovered.contains(xi)) {
                *h += 1;
            }
        }
    }
    println!("mean covering points {:.1}, mean uncovered pieces {:.1}", cfg.expected_points(), pieces as f64 / n as f64);
    for (h, x) in hits.iter().zip(points) {
        let exact = coverage_probability(cfg.beta, cfg.epsilon, x)?;
        let freq = *h as f64 / n as f64;
        let se = (exact * (1.0 - exact) / n as f64).sqrt();
        println!("x = {x:?}: freq {freq:.4}  exact {exact:.4}  z {:+.2}", (freq - exact) / se);
    }
    Ok(())
}
