//! Green's function of `-d²/dx²` with homogeneous Dirichlet conditions, the
//! integral operator `K` and the mild (Hammerstein) formulation.

mod grid_function;
mod hammerstein;
mod moment;
mod reaction;

pub use grid_function::{GridFunction, Rule};
pub use hammerstein::{solve_hammerstein, solve_hammerstein_with, HammersteinSolution};
pub use moment::{approximated_green, en_second_moment};
pub use reaction::{
    Forcing, ForcingCase, ProblemSpec, ReactionCase, ReactionClass, ReactionTerm, POINCARE_GAMMA,
};

use crate::noise::{IncrementPath, UniformGrid};
use crate::quad::GAUSS2_UNIT;
use crate::sum::NeumaierSum;
use crate::{Error, Result};

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}

/// `G(x, y) = min(x, y) - x y`.
pub fn greens_function(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok(if x <= y { x * (1.0 - y) } else { y * (1.0 - x) })
}

#[inline]
fn green(x: f64, y: f64) -> f64 {
    if x <= y {
        x * (1.0 - y)
    } else {
        y * (1.0 - x)
    }
}

/// `∫ G(x, y) dy` over `[lo, hi]`, split exactly at `y = x`.
fn green_segment_integral(x: f64, lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    let below_hi = hi.min(x);
    if below_hi > lo {
        // y (1 - x)
        total += (1.0 - x) * (below_hi - lo) * (below_hi + lo) * 0.5;
    }
    let above_lo = lo.max(x);
    if hi > above_lo {
        // x (1 - y)
        total += x * (hi - above_lo) * (1.0 - 0.5 * (hi + above_lo));
    }
    total
}

/// `∫ G(x, y) dy` over cell `cell` of `grid`.
pub fn greens_cell_integral(x: f64, cell: usize, grid: UniformGrid) -> Result<f64> {
    check_unit("x", x)?;
    if cell >= grid.cells() {
        return Err(Error::InvalidArgument(format!(
            "cell {cell} out of range for {} cells",
            grid.cells()
        )));
    }
    Ok(green_segment_integral(
        x,
        grid.node(cell),
        grid.node(cell + 1),
    ))
}

/// Per-cell linear data represented by its values at the two Gauss points.
fn gauss_data(phi: &GridFunction) -> Vec<[f64; 2]> {
    (0..phi.grid().cells())
        .map(|i| phi.gauss_values(i))
        .collect()
}

/// Nodal values of `K φ` on the grid carrying `φ`, where `φ` is linear on
/// each cell and given by its values at the two Gauss points of each cell.
///
/// Uses `(Kφ)(x_j) = (1 - x_j) Σ_{i<j} ∫ y φ + x_j Σ_{i>=j} ∫ (1 - y) φ`,
/// with both cell moments integrated exactly.
pub(crate) fn apply_k_nodal(grid: UniformGrid, gauss: &[[f64; 2]]) -> Vec<f64> {
    let n = grid.cells();
    debug_assert_eq!(gauss.len(), n);
    let h = grid.h();
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for (i, g) in gauss.iter().enumerate() {
        let a = grid.node(i);
        let (mut m1, mut m2) = (0.0, 0.0);
        for (t, v) in GAUSS2_UNIT.iter().zip(g) {
            let y = a + t * h;
            m1 += 0.5 * h * y * v;
            m2 += 0.5 * h * (1.0 - y) * v;
        }
        first.push(m1);
        second.push(m2);
    }
    // suffix sums of the (1 - y) moments
    let mut suffix = vec![0.0; n + 1];
    let mut acc = NeumaierSum::new();
    for i in (0..n).rev() {
        acc.add(second[i]);
        suffix[i] = acc.value();
    }
    let mut out = vec![0.0; n + 1];
    let mut prefix = NeumaierSum::new();
    for j in 1..n {
        prefix.add(first[j - 1]);
        let x = grid.node(j);
        out[j] = (1.0 - x) * prefix.value() + x * suffix[j];
    }
    out
}

/// `(K φ)(x)` for a single point, exact for per-cell linear `φ`.
pub fn apply_k_at(phi: &GridFunction, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    let grid = phi.grid();
    let h = grid.h();
    let mut acc = NeumaierSum::new();
    for cell in 0..grid.cells() {
        let (a, b) = (grid.node(cell), grid.node(cell + 1));
        let g = phi.gauss_values(cell);
        // linear interpolant of the cell data through the Gauss points
        let (t0, t1) = (GAUSS2_UNIT[0], GAUSS2_UNIT[1]);
        let slope = (g[1] - g[0]) / ((t1 - t0) * h);
        let at = |y: f64| g[0] + slope * (y - (a + t0 * h));
        let mut piece = |lo: f64, hi: f64| {
            let w = hi - lo;
            for t in GAUSS2_UNIT {
                let y = lo + t * w;
                acc.add(0.5 * w * green(x, y) * at(y));
            }
        };
        if x > a && x < b {
            piece(a, x);
            piece(x, b);
        } else {
            piece(a, b);
        }
    }
    Ok(acc.value())
}

/// Nodal values of `K φ` on `eval`.
pub fn apply_k(phi: &GridFunction, eval: UniformGrid) -> Result<GridFunction> {
    if eval == phi.grid() {
        return GridFunction::nodal(eval, apply_k_nodal(eval, &gauss_data(phi)));
    }
    let values = eval
        .nodes()
        .map(|x| apply_k_at(phi, x))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::nodal(eval, values)
}

/// Nodal values of `K dWⁿ` on `eval`, where `dWⁿ` is the piecewise-constant
/// density of `path`.
pub fn stochastic_convolution(path: &IncrementPath, eval: UniformGrid) -> Result<GridFunction> {
    let grid = path.grid();
    let density: Vec<f64> = path.increments().iter().map(|d| d / grid.h()).collect();
    apply_k(&GridFunction::cellwise(grid, density)?, eval)
}

/// `Σ_i G̃_i(x) ΔW_i` at arbitrary points, where `G̃_i` is the cell average
/// of `G(x, ·)`.
pub fn stochastic_convolution_at(path: &IncrementPath, xs: &[f64]) -> Result<Vec<f64>> {
    let grid = path.grid();
    xs.iter()
        .map(|&x| {
            check_unit("x", x)?;
            let mut acc = NeumaierSum::new();
            for (i, d) in path.increments().iter().enumerate() {
                acc.add(green_segment_integral(x, grid.node(i), grid.node(i + 1)) / grid.h() * d);
            }
            Ok(acc.value())
        })
        .collect()
}

/// Exact `L²(0, 1)` norm of a nodal piecewise-linear function.
pub(crate) fn nodal_l2_norm(grid: UniformGrid, values: &[f64]) -> f64 {
    let h = grid.h();
    let sum = crate::sum::compensated_sum(
        values
            .windows(2)
            .map(|w| h / 3.0 * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1])),
    );
    sum.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn greens_function_values() {
        assert_eq!(greens_function(0.5, 0.5).unwrap(), 0.25);
        assert_eq!(greens_function(0.0, 0.3).unwrap(), 0.0);
        assert!((greens_function(0.25, 0.75).unwrap() - 0.0625).abs() < 1e-16);
        assert!(greens_function(-0.1, 0.5).is_err());
    }

    #[test]
    fn cell_integral_matches_quadrature() {
        let grid = UniformGrid::new(7).unwrap();
        let rule = GaussLegendre::new(10);
        for &x in &[0.0, 0.13, 3.0 / 7.0, 0.5, 0.99, 1.0] {
            for cell in 0..7 {
                let (a, b) = (grid.node(cell), grid.node(cell + 1));
                let mut q = 0.0;
                if x > a && x < b {
                    q += rule.integrate(a, x, |y| green(x, y));
                    q += rule.integrate(x, b, |y| green(x, y));
                } else {
                    q += rule.integrate(a, b, |y| green(x, y));
                }
                let exact = greens_cell_integral(x, cell, grid).unwrap();
                assert!((exact - q).abs() < 1e-15, "x={x} cell={cell}");
            }
        }
    }

    #[test]
    fn k_of_one_is_the_parabola() {
        let grid = UniformGrid::new(8).unwrap();
        let one = GridFunction::interpolate(grid, |_| 1.0);
        let u = apply_k(&one, grid).unwrap();
        for (j, x) in grid.nodes().enumerate() {
            assert!((u.values()[j] - x * (1.0 - x) / 2.0).abs() < 1e-15);
        }
        let coarse = UniformGrid::new(3).unwrap();
        let v = apply_k(&one, coarse).unwrap();
        for (j, x) in coarse.nodes().enumerate() {
            assert!((v.values()[j] - x * (1.0 - x) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fast_and_pointwise_k_agree() {
        let grid = UniformGrid::new(16).unwrap();
        let phi = GridFunction::interpolate(grid, |x| (7.0 * x).sin() + x * x);
        let fast = apply_k(&phi, grid).unwrap();
        for (j, x) in grid.nodes().enumerate() {
            let slow = apply_k_at(&phi, x).unwrap();
            assert!((fast.values()[j] - slow).abs() < 1e-15);
        }
    }

    #[test]
    fn stochastic_convolution_routes_agree() {
        let grid = UniformGrid::new(10).unwrap();
        let inc: Vec<f64> = (0..10)
            .map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.1)
            .collect();
        let path = IncrementPath::new(grid, inc).unwrap();
        let nodal = stochastic_convolution(&path, grid).unwrap();
        let xs: Vec<f64> = grid.nodes().collect();
        let direct = stochastic_convolution_at(&path, &xs).unwrap();
        for (a, b) in nodal.values().iter().zip(&direct) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nodal_norm_of_hat() {
        let grid = UniformGrid::new(2).unwrap();
        let n = nodal_l2_norm(grid, &[0.0, 1.0, 0.0]);
        assert!((n * n - 1.0 / 3.0).abs() < 1e-15);
    }
}
