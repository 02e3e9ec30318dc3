//! Second moment of the gap between the exact and the piecewise-constant
//! stochastic convolutions, and its decay rate under refinement.

use fbm_bvp::experiments::{fit_rate, DEFAULT_PROBES};
use fbm_bvp::greens::en_second_moment;
use fbm_bvp::{HurstIndex, UniformGrid};

fn main() -> fbm_bvp::Result<()> {
    let sizes = [16, 32, 64, 128, 256];
    for h in [0.1, 0.25, 0.45] {
        let hurst = HurstIndex::new(h)?;
        let mut hs = Vec::new();
        let mut worst = Vec::new();
        for &n in &sizes {
            let grid = UniformGrid::new(n)?;
            let mut m: f64 = 0.0;
            for &x in &DEFAULT_PROBES {
                m = m.max(en_second_moment(x, grid, hurst)?);
            }
            hs.push(grid.h());
            worst.push(m);
        }
        let fit = fit_rate(&hs, &worst)?;
        println!(
            "H = {h:<4}  max E|E^n(x)|^2: {:.3e} .. {:.3e}  rate {:.3} (2H+1 = {:.2})",
            worst[0],
            worst[worst.len() - 1],
            fit.slope,
            2.0 * h + 1.0
        );
    }
    Ok(())
}
