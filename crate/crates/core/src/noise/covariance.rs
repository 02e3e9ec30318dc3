use nalgebra::DMatrix;

use super::{HurstIndex, UniformGrid};
use crate::{Error, Result};

/// `E[W(x) W(y)] = (x^{2H} + y^{2H} - |x - y|^{2H}) / 2`.
pub fn fbm_covariance(x: f64, y: f64, hurst: HurstIndex) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    let a = hurst.two_h();
    Ok(0.5 * (pow0(x, a) + pow0(y, a) - pow0((x - y).abs(), a)))
}

/// Covariance of two increments `lag` cells apart on `grid`:
/// `(h^{2H}/2) (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H})`.
pub fn increment_autocovariance(grid: UniformGrid, hurst: HurstIndex, lag: usize) -> f64 {
    let a = hurst.two_h();
    let k = lag as f64;
    let scale = grid.h().powf(a);
    if lag == 0 {
        return scale;
    }
    if hurst.is_white() {
        return 0.0;
    }
    0.5 * scale * ((k + 1.0).powf(a) + (k - 1.0).powf(a) - 2.0 * k.powf(a))
}

/// Dense `n x n` covariance of the increment vector. Symmetric Toeplitz with
/// `h^{2H}` on the diagonal.
pub fn increment_covariance_matrix(grid: UniformGrid, hurst: HurstIndex) -> DMatrix<f64> {
    let n = grid.cells();
    let lags: Vec<f64> = (0..n)
        .map(|k| increment_autocovariance(grid, hurst, k))
        .collect();
    DMatrix::from_fn(n, n, |i, j| lags[i.abs_diff(j)])
}

pub(crate) fn pow0(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(a)
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
