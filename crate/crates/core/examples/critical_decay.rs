//! Fidelity at the critical point compared with exp(-N|δ|/4).

use ising_fidelity::chain::{log_fidelity, log_fidelity_per_site_integral, ChainSpec};

fn main() -> ising_fidelity::error::Result<()> {
    let delta = 1e-4;
    let per_site = log_fidelity_per_site_integral(1.0, delta)?;
    println!("{:>10} {:>14} {:>14} {:>14}", "N", "ln F", "-N|δ|/4", "N × integral");
    for n in [20_000usize, 50_000, 200_000, 1_000_000] {
        let v = log_fidelity(&ChainSpec::new(n, 1.0, delta)?);
        let nd = n as f64 * delta;
        println!(
            "{n:>10} {:>14.6} {:>14.6} {:>14.6}",
            v.log_f,
            -nd / 4.0,
            n as f64 * per_site
        );
    }
    Ok(())
}
