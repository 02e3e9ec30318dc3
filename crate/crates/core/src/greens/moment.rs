//! Second moment of the Green's-function truncation error
//! `Eⁿ(x) = ∫ (G(x, y) - Ĝ(x, y)) dW(y)`, where `Ĝ(x, ·)` replaces `G(x, ·)`
//! by its cell averages.
//!
//! On a cell not containing `x`, `G(x, ·)` is linear with slope `1 - x` (left
//! of `x`) or `-x` (right of `x`), so the integrand is that slope times
//! `h (u - 1/2)` in the local coordinate `u`. The cell containing `x` carries
//! an extra kink term. Stationarity of the increments reduces the moment to
//! a Toeplitz quadratic form in unit-cell profile covariances, which are
//! evaluated exactly instead of by fine-grid quadrature, where the
//! near-cancellation of `G - Ĝ` would swamp the result.

use crate::noise::profile::{profile_covariance, CellProfile, LinearPiece};
use crate::noise::{HurstIndex, StepFunction, UniformGrid};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

use super::green_segment_integral;

/// `Ĝ(x, ·)`: the cell averages of `G(x, ·)` as a step function.
pub fn approximated_green(x: f64, grid: UniformGrid) -> Result<StepFunction> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
        });
    }
    let values = (0..grid.cells())
        .map(|i| green_segment_integral(x, grid.node(i), grid.node(i + 1)) / grid.h())
        .collect();
    StepFunction::on_grid(grid, values)
}

/// `E |Eⁿ(x)|²`.
pub fn en_second_moment(x: f64, grid: UniformGrid, hurst: HurstIndex) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
        });
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    let n = grid.cells();
    let h = grid.h();
    let t = x * n as f64;
    let j = (t.floor() as usize).min(n - 1);
    let theta = t - j as f64;
    const NODE_TOL: f64 = 1e-12;

    let kink = theta > NODE_TOL && theta < 1.0 - NODE_TOL;
    // number of cells on which G(x, ·) has slope 1 - x
    let left_cells = if theta > NODE_TOL { j + 1 } else { j };
    let slope = |i: usize| if i < left_cells { 1.0 - x } else { -x };

    let saw = CellProfile::sawtooth();
    let sigma: Vec<f64> = (0..n)
        .map(|m| profile_covariance(&saw, &saw, m as i64, hurst))
        .collect();

    let mut total = NeumaierSum::new();
    for i in 0..n {
        let si = slope(i);
        total.add(si * si * sigma[0]);
        for k in (i + 1)..n {
            total.add(2.0 * si * slope(k) * sigma[k - i]);
        }
    }

    if kink {
        let c = 0.5 * (1.0 - theta) * (1.0 - theta);
        let kappa = CellProfile::new(vec![
            LinearPiece {
                start: 0.0,
                end: theta,
                left: c,
                right: c,
            },
            LinearPiece {
                start: theta,
                end: 1.0,
                left: c,
                right: c - (1.0 - theta),
            },
        ])?;
        for k in 0..n {
            let shift = k as i64 - j as i64;
            total.add(2.0 * slope(k) * profile_covariance(&kappa, &saw, shift, hurst));
        }
        total.add(profile_covariance(&kappa, &kappa, 0, hurst));
    }

    Ok(h.powf(hurst.two_h() + 2.0) * total.value())
}
