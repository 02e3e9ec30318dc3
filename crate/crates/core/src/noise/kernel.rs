use super::{HurstIndex, UniformGrid};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// `A_k(H) = 2|k|^{2H} - |k+1|^{2H} - |k-1|^{2H}` for a cell offset `k != 0`.
fn offset_weight(k: usize, a: f64) -> f64 {
    let k = k as f64;
    2.0 * k.powf(a) - (k + 1.0).powf(a) - (k - 1.0).powf(a)
}

/// `∬_{D_i x D_j} |x - y|^{2H-2} dx dy` for distinct cells, in closed form
/// `A_{i,j}(H) h^{2H} / (2H(1 - 2H))`.
pub fn cell_pair_kernel_integral(
    grid: UniformGrid,
    hurst: HurstIndex,
    i: usize,
    j: usize,
) -> Result<f64> {
    if hurst.is_white() {
        return Err(Error::InvalidArgument(
            "kernel cell integrals are undefined at H = 1/2".into(),
        ));
    }
    if i == j || i >= grid.cells() || j >= grid.cells() {
        return Err(Error::InvalidArgument(format!(
            "cells ({i}, {j}) must be distinct and below n = {}",
            grid.cells()
        )));
    }
    let a = hurst.two_h();
    Ok(offset_weight(i.abs_diff(j), a) * grid.h().powf(a) / (2.0 * hurst.kernel_coefficient()))
}

/// `sum_{i != j} ∬_{D_i x D_j} |x - y|^{2H-2} dx dy` over all ordered pairs of
/// distinct cells. Rejects `H = 1/2`.
pub fn kernel_cell_sum(grid: UniformGrid, hurst: HurstIndex) -> Result<f64> {
    if hurst.is_white() {
        return Err(Error::InvalidArgument(
            "kernel cell sum is undefined at H = 1/2".into(),
        ));
    }
    let n = grid.cells();
    let a = hurst.two_h();
    let mut acc = NeumaierSum::new();
    for k in 1..n {
        // (n - k) ordered pairs at offset +k and as many at -k
        acc.add(2.0 * (n - k) as f64 * offset_weight(k, a));
    }
    Ok(acc.value() * grid.h().powf(a) / (2.0 * hurst.kernel_coefficient()))
}

/// Upper bound `h^{2H-1} / (H(1 - 2H))` for [`kernel_cell_sum`].
pub fn kernel_cell_sum_bound(grid: UniformGrid, hurst: HurstIndex) -> Result<f64> {
    if hurst.is_white() {
        return Err(Error::InvalidArgument(
            "kernel cell sum is undefined at H = 1/2".into(),
        ));
    }
    Ok(grid.h().powf(hurst.two_h() - 1.0) / hurst.kernel_coefficient())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_is_empty_sum() {
        let g = UniformGrid::new(1).unwrap();
        assert_eq!(
            kernel_cell_sum(g, HurstIndex::new(0.25).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn two_cells_quarter() {
        let g = UniformGrid::new(2).unwrap();
        let v = kernel_cell_sum(g, HurstIndex::new(0.25).unwrap()).unwrap();
        let expected = (2.0 - 2f64.sqrt()) * 0.5f64.sqrt() / (2.0 * 0.25 * 0.5) * 2.0;
        assert!((v - expected).abs() < 1e-13);
        assert!((v - 3.313_708_5).abs() < 1e-7);
    }

    #[test]
    fn weights_sum_to_twice_n_minus_n_to_2h() {
        // sum_{i != j} A_{i,j} = 2 (n - n^{2H})
        for n in [2usize, 5, 33] {
            for hv in [0.1, 0.3] {
                let a = 2.0 * hv;
                let total: f64 = (1..n)
                    .map(|k| 2.0 * (n - k) as f64 * offset_weight(k, a))
                    .sum();
                let nf = n as f64;
                assert!((total - 2.0 * (nf - nf.powf(a))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn white_noise_is_rejected() {
        let g = UniformGrid::new(4).unwrap();
        assert!(kernel_cell_sum(g, HurstIndex::WHITE).is_err());
        assert!(kernel_cell_sum_bound(g, HurstIndex::WHITE).is_err());
        assert!(cell_pair_kernel_integral(g, HurstIndex::WHITE, 0, 1).is_err());
    }
}
