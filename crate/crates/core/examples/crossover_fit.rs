//! Crossover size N_{3/2}(δ) for the three field choices and the fit a|δ|^(-b).

use ising_fidelity::analysis::{find_crossover, fit_power_law, GMode};

fn main() -> ising_fidelity::error::Result<()> {
    let deltas = [1e-3, 3e-4, 1e-4, 3e-5];
    for (name, mode) in [
        ("critical", GMode::AtCritical),
        ("plus-delta", GMode::PlusDelta),
        ("plus-5delta", GMode::PlusFiveDelta),
    ] {
        let pts = deltas
            .iter()
            .map(|&d| Ok((d, find_crossover(d, mode, 1.5)?)))
            .collect::<ising_fidelity::error::Result<Vec<_>>>()?;
        let fit = fit_power_law(&pts)?;
        println!(
            "{name:<12} a = {:.4}  b = {:.5} ± {:.1e}",
            fit.prefactor_a, fit.exponent_b, fit.stderr_b
        );
        for (d, n) in pts {
            println!("    δ = {d:.0e}  N_3/2 = {n:.1}");
        }
    }
    Ok(())
}
