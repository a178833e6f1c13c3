//! Local time of an intersection of shifted coverings: the epsilon-normalized
//! occupation measure against the Kingman dilation estimator.

use regen_stable::localtime::{kingman_ladder, local_time_eps, local_time_eps_path, LocalTimeParams};
use regen_stable::moments::closed_increment_moment;
use regen_stable::regen::{intersect_shifted, CoveringConfig, ShiftedFamily};
use regen_stable::streams::stream;

fn main() -> regen_stable::Result<()> {
    let (beta, p, eps) = (0.75, 2, 1e-4);
    let params = LocalTimeParams::new(beta, p)?;
    let cover = CoveringConfig::new(beta, eps, 1.0)?;

    let mut rng = stream(11, "local-time-example", 0);
    let set = loop {
        let fam = ShiftedFamily::sample(cover, p, &mut rng)?;
        let set = intersect_shifted(&fam)?;
        if set.measure() > 0.0 {
            break set;
        }
    };
    println!("intersection: {} pieces, measure {:.3e}", set.len(), set.measure());
    let grid: Vec<f64> = (0..=4).map(|k| k as f64 / 4.0).collect();
    let path = local_time_eps_path(&set, &grid, eps, &params)?;
    for (t, l) in path.grid.iter().zip(&path.values) {
        println!("  L_eps({t:.2}) = {l:.4}");
    }
    for (n, k) in kingman_ladder(&set, 1.0, &params)? {
        println!("  kingman n = {n:>6}: {k:.4}");
    }

    let reps = 4000;
    let mut sum = 0.0;
    for i in 0..reps {
        let mut r = stream(11, "local-time-mean", i);
        let set = intersect_shifted(&ShiftedFamily::sample(cover, p, &mut r)?)?;
        sum += local_time_eps(&set, 0.0, 1.0, eps, &params)?;
    }
    println!("mean over {reps}: {:.4}, exact {:.4}", sum / reps as f64, closed_increment_moment(beta, p, 1, 0.0, 1.0)?);
    Ok(())
}
