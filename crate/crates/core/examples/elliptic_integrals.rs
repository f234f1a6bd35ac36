//! Complete elliptic integrals through Carlson forms, including m > 1 and m < 0.

use ising_fidelity::elliptic::{agm, ellip_e, ellip_k};

fn main() -> ising_fidelity::error::Result<()> {
    println!("{:>8} {:>20} {:>20} {:>28}", "m", "K(m)", "K via AGM", "E(m)");
    for m in [-50.0, -1.0, 0.0, 0.5, 0.9, 0.99] {
        let e = ellip_e(m)?;
        println!(
            "{m:>8} {:>20.15} {:>20.15} {:>28.15}",
            ellip_k(m)?,
            agm::ellip_k(m),
            e.re
        );
    }
    for m in [1.0 + 1e-6, 1.5, 2.0, 4.0] {
        let e = ellip_e(m)?;
        println!("{m:>8} {:>20} {:>20} {:>14.10} + {:.10}i", "-", "-", e.re, e.im);
    }
    Ok(())
}
