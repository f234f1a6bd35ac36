//! Mode product against exact diagonalization on small rings.

use ising_fidelity::chain::{log_fidelity, ChainSpec};
use ising_fidelity::ed::{ed_oracle_fidelity_with, EdSolver};

fn main() -> ising_fidelity::error::Result<()> {
    for n in [4usize, 8, 12] {
        for (g, delta) in [(0.5, 0.1), (1.0, 0.05), (2.0, 0.3)] {
            let product = log_fidelity(&ChainSpec::new(n, g, delta)?).f;
            let lanczos = ed_oracle_fidelity_with(n, g, delta, EdSolver::Lanczos)?;
            let dense = ed_oracle_fidelity_with(n, g, delta, EdSolver::Dense)?;
            println!(
                "N={n:<2} g={g:<3} δ={delta:<4} F={product:.15} |ΔLanczos|={:.1e} |ΔDense|={:.1e}",
                (product - lanczos).abs(),
                (product - dense).abs()
            );
        }
    }
    Ok(())
}
