//! Paths of the multiple-stable limit process from the truncated series.

use regen_stable::mstable::{expected_truncation_tail, sample_z_path, SeriesTruncation, ZParams};
use regen_stable::streams::stream;

fn main() -> regen_stable::Result<()> {
    let params = ZParams::new(0.8, 0.75, 2)?;
    println!("H = {:.4}", params.hurst());
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    for m in [4, 8, 16] {
        let trunc = SeriesTruncation::new(m, 50, 2)?;
        let tail = expected_truncation_tail(params, trunc)?;
        let path = sample_z_path(params, trunc, 1e-4, &grid, &mut stream(9, "z-example", 0))?;
        let shown: Vec<String> = path.values.iter().step_by(2).map(|v| format!("{v:+.3}")).collect();
        println!("m = {m:>2} (tail {tail:.2e}): {}", shown.join(" "));
    }
    Ok(())
}
