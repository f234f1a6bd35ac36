//! dA/dc near c = 1: logarithmic divergence and the jump of 1/4 across it.

use ising_fidelity::scaling::{default_step, pinch_slope_expansion, scaling_a_derivative};

fn main() -> ising_fidelity::error::Result<()> {
    println!(
        "{:>10} {:>14} {:>14} {:>14}",
        "1-c", "dA/dc below", "dA/dc above", "jump"
    );
    for j in 2..=6 {
        let eps = 10f64.powi(-j);
        let (lo, hi) = (1.0 - eps, 1.0 + eps);
        let below = scaling_a_derivative(lo, default_step(lo))?;
        let above = scaling_a_derivative(hi, default_step(hi))?;
        println!("{eps:>10.0e} {below:>14.8} {above:>14.8} {:>14.8}", above - below);
        println!(
            "{:>10} {:>14.8} {:>14.8}",
            "expansion",
            pinch_slope_expansion(lo),
            pinch_slope_expansion(hi)
        );
    }
    Ok(())
}
