//! ln F along the size axis and its log-log slope drifting from 2 to 1.

use ising_fidelity::analysis::{even_geometric_grid, local_slope, sweep, Axis, GMode, SweepParams};

fn main() -> ising_fidelity::error::Result<()> {
    let delta = 1e-4;
    let params = SweepParams {
        size: 2,
        delta,
        g_mode: GMode::AtCritical,
    };
    let grid = even_geometric_grid(1e2, 1e7, 4);
    let table = sweep(Axis::Size, params, &grid)?;
    let slopes = local_slope(&table)?;
    println!("{:>10} {:>16} {:>8}", "N", "ln F", "slope");
    for (p, (_, s)) in table.points.iter().zip(slopes) {
        println!("{:>10} {:>16.8e} {s:>8.4}", p.x, p.log_f);
    }
    Ok(())
}
