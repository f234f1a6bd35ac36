//! A(c) from elliptic integrals next to the finite-chain estimate -ln F/(N|δ|).

use ising_fidelity::analysis::numeric_scaling;
use ising_fidelity::scaling::scaling_a;

fn main() -> ising_fidelity::error::Result<()> {
    let (n, delta) = (2_000_000usize, 1e-4);
    println!("{:>6} {:>12} {:>12} {:>12} regime", "c", "A(c)", "numeric", "residual");
    for i in 0..=12 {
        let c = -3.0 + 0.5 * i as f64;
        let a = scaling_a(c)?;
        let num = numeric_scaling(n, delta, c)?;
        println!(
            "{c:>6.2} {:>12.8} {num:>12.8} {:>12.2e} {:?}",
            a.a_value,
            num - a.a_value,
            a.regime
        );
    }
    Ok(())
}
