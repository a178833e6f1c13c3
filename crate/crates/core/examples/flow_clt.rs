//! Flow local times and normalized partial sums over the renewal chain.

use regen_stable::ergodic::{sample_partial_sum, IntegrandF, MuNSampler, PartialSumSetup, RenewalChainModel};
use regen_stable::moments::h1;
use regen_stable::mstable::{LevyModel, SeriesTruncation};
use regen_stable::stats::{mean_se, quantile};
use regen_stable::streams::stream;

fn main() -> regen_stable::Result<()> {
    let model = RenewalChainModel::new(0.75)?;
    let f = IntegrandF::indicator(2);
    let limit = h1(0.75).powi(2);
    for n in [1_000u64, 10_000] {
        let sampler = MuNSampler::new(model, n)?;
        let lts: Vec<f64> = (0..2000)
            .map(|i| {
                let mut r = stream(1, "flow-example", i);
                let starts = [sampler.sample(&mut r), sampler.sample(&mut r)];
                sampler.flow_local_time(1.0, &f, &starts, &mut r)
            })
            .collect::<regen_stable::Result<_>>()?;
        let (m, se) = mean_se(&lts);
        println!("n {n:>6}: E L_n = {m:.4} +- {se:.4} (limit {limit:.4})");
    }

    let setup = PartialSumSetup::new(model, LevyModel::sas(0.8)?, 10_000, SeriesTruncation::default(), f)?;
    let grid = [0.25, 0.5, 1.0];
    let s1: Vec<f64> = (0..500)
        .map(|i| sample_partial_sum(&setup, &grid, &mut stream(1, "clt-example", i)).map(|v| v[2]))
        .collect::<regen_stable::Result<_>>()?;
    println!("c_n = {:.2}", setup.c_n()?);
    println!("S_n(1) quartiles: {:.3} {:.3} {:.3}", quantile(&s1, 0.25), quantile(&s1, 0.5), quantile(&s1, 0.75));
    Ok(())
}
