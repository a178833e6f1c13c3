//! Refining a covering to a finer resolution keeps the normalized local time
//! a martingale: averaging over refinements recovers the coarse value.

use regen_stable::interval_sets::IntervalSet;
use regen_stable::localtime::{local_time_eps, LocalTimeParams};
use regen_stable::regen::{refine_covering, sample_covering, CoveringConfig};
use regen_stable::stats::mean_se;
use regen_stable::streams::stream;

fn main() -> regen_stable::Result<()> {
    let (beta, p, eps, eta) = (0.75, 2, 1e-2, 1e-3);
    let params = LocalTimeParams::new(beta, p)?;
    let cover = CoveringConfig::new(beta, eps, 2.0)?;
    let shifts = [0.05, 0.2];
    let (s, t) = (0.2 + eps, 1.0);

    let level = |samples: &[regen_stable::regen::CoveringSample], e: f64| -> regen_stable::Result<f64> {
        let shifted: Vec<IntervalSet> = samples
            .iter()
            .zip(shifts)
            .map(|(c, v)| c.uncovered.shift(v))
            .collect::<regen_stable::Result<_>>()?;
        let set = IntervalSet::intersect_many(shifted.iter())?;
        local_time_eps(&set, s, t, e, &params)
    };
    // first base covering whose increment on [s, t] exceeds 0.2
    let (base, coarse) = (0..)
        .find_map(|i| {
            let mut rng = stream(5, "refine-base", i);
            let base: Vec<_> = (0..p).map(|_| sample_covering(cover, &mut rng)).collect::<regen_stable::Result<_>>().ok()?;
            let l = level(&base, eps).ok()?;
            (l > 0.2).then_some((base, l))
        })
        .expect("some covering leaves [s, t] partly uncovered");
    let fine: Vec<f64> = (0..200)
        .map(|i| {
            let mut r = stream(5, "refine-step", i);
            let refined: Vec<_> = base.iter().map(|c| refine_covering(c, eta, &mut r)).collect::<regen_stable::Result<_>>()?;
            level(&refined, eta)
        })
        .collect::<regen_stable::Result<_>>()?;
    let (m, se) = mean_se(&fine);
    println!("coarse increment {coarse:.5}; refined mean {m:.5} +- {se:.5}");
    Ok(())
}
