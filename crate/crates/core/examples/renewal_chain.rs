//! The null-recurrent countdown chain: wandering rate, renewal sequence and
//! the normalizing sequence of the partial sums, for both return-time tails.

use regen_stable::ergodic::{b_n, c_n, renewal_sequence, wandering_rate, RenewalChainModel, ReturnTail};
use regen_stable::mstable::LevyModel;
use regen_stable::stats::{log_grid, loglog_slope};

fn main() -> regen_stable::Result<()> {
    let levy = LevyModel::sas(0.8)?;
    let ns = log_grid(1e3, 1e6, 13);
    for tail in [ReturnTail::Power { beta: 0.75 }, ReturnTail::Increment { beta: 0.75 }] {
        let model = RenewalChainModel::with_tail(tail)?;
        println!("{tail:?}");
        let u = renewal_sequence(&model, 10_001);
        for n in [10usize, 100, 1000, 10_000] {
            println!("  n {n:>5}: w_n {:>7.3}  u_n b_n {:.5}", wandering_rate(&model, n as u64), u[n] * b_n(&model, n as u64));
        }
        println!("  u_10001 / u_10000 - 1 = {:.2e}", u[10_001] / u[10_000] - 1.0);
        let ws: Vec<f64> = ns.iter().map(|&n| wandering_rate(&model, n as u64)).collect();
        let cs: Vec<f64> = ns.iter().map(|&n| c_n(&model, &levy, 2, n as u64)).collect::<regen_stable::Result<_>>()?;
        println!("  w_n slope {:.4} (index 0.25), c_n slope {:.4} (index 1.125)", loglog_slope(&ns, &ws)?, loglog_slope(&ns, &cs)?);
    }
    Ok(())
}
