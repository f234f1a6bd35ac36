//! Fidelity susceptibility at and away from the critical point.

use ising_fidelity::chain::{fidelity_susceptibility, log_fidelity, ChainSpec};

fn main() -> ising_fidelity::error::Result<()> {
    for n in [100usize, 1_000, 10_000] {
        let chi = fidelity_susceptibility(1.0, n)?;
        println!(
            "g = 1    N = {n:<7} χ_F = {chi:.6e}  χ_F / (N²/8) = {:.6}",
            chi / ((n * n) as f64 / 8.0)
        );
    }
    for g in [1.01f64, 1.1, 1.5] {
        let n = 1_000_000usize;
        let chi = fidelity_susceptibility(g, n)?;
        let eps = g - 1.0;
        println!(
            "g = {g:<5} N = {n}  χ_F/N = {:.6}  1/(8ε) = {:.6}  1/(4g²(g²-1)) = {:.6}",
            chi / n as f64,
            1.0 / (8.0 * eps),
            1.0 / (4.0 * g * g * (g * g - 1.0))
        );
    }
    // Small N|δ|: ln F ≈ -δ²χ_F/2.
    let (n, delta) = (1_000usize, 1e-6);
    let l = log_fidelity(&ChainSpec::new(n, 1.0, delta)?).log_f;
    println!(
        "ln F = {l:.10e}, -δ²χ_F/2 = {:.10e}",
        -delta * delta * fidelity_susceptibility(1.0, n)? / 2.0
    );
    Ok(())
}
