//! The off-diagonal singular-kernel sum over cell pairs: closed form,
//! quadrature and the `h^{2H-1}` bound.

use fbm_bvp::experiments::kernel_cell_sum_quadrature;
use fbm_bvp::noise::{kernel_cell_sum, kernel_cell_sum_bound};
use fbm_bvp::{HurstIndex, UniformGrid};

fn main() -> fbm_bvp::Result<()> {
    println!(
        "{:>5} {:>4} {:>14} {:>14} {:>14}",
        "H", "n", "closed", "quadrature", "bound"
    );
    for h in [0.1, 0.25, 0.4] {
        let hurst = HurstIndex::new(h)?;
        for n in [2, 4, 16, 64, 256] {
            let grid = UniformGrid::new(n)?;
            println!(
                "{h:>5} {n:>4} {:>14.8} {:>14.8} {:>14.8}",
                kernel_cell_sum(grid, hurst)?,
                kernel_cell_sum_quadrature(grid, hurst, 64)?,
                kernel_cell_sum_bound(grid, hurst)?
            );
        }
    }
    Ok(())
}
