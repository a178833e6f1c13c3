//! The stable normalizing constant two ways, and the Hurst index of the limit.

use regen_stable::mstable::{c_alpha, c_alpha_quadrature, hurst_exponent};

fn main() -> regen_stable::Result<()> {
    for alpha in [0.3, 0.8, 1.2, 1.5, 1.9] {
        let closed = c_alpha(alpha)?;
        let quad = c_alpha_quadrature(alpha)?;
        println!("alpha {alpha}: closed {closed:.12}  quadrature {quad:.12}  rel {:.1e}", (quad - closed).abs() / closed);
    }
    for (alpha, beta, p) in [(0.8, 0.75, 2), (1.5, 0.75, 2), (1.5, 0.9, 3)] {
        println!("H(alpha {alpha}, beta {beta}, p {p}) = {:.4}", hurst_exponent(alpha, beta, p));
    }
    Ok(())
}
