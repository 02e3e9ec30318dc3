//! Mild form `u + K f(u) = K g + K dWⁿ` on the nodes of the noise grid.
//!
//! The reaction enters through the nodal interpolant of `f(x_j, u_j)`, to
//! which `K` is applied exactly. This differs from the finite element
//! scheme, which integrates `f` against the hats by Gauss quadrature, so the
//! two solvers are independent discretisations of the same problem.

use crate::fem::TridiagonalMatrix;
use crate::iteration::{iterate, IterationOptions, NonlinearSystem};
use crate::noise::{IncrementPath, UniformGrid};
use crate::quad::GAUSS2_UNIT;
use crate::Result;

use super::{apply_k_nodal, nodal_l2_norm, GridFunction, ProblemSpec};

#[derive(Debug, Clone)]
pub struct HammersteinSolution {
    pub solution: GridFunction,
    /// `L²` norm of `u + K f(u) - b` for the returned `u`.
    pub residual: f64,
    pub iterations: usize,
    /// Residual norm before each update, starting from `u = 0`.
    pub residual_history: Vec<f64>,
}

struct Mild<'a> {
    spec: &'a ProblemSpec,
    grid: UniformGrid,
    b: Vec<f64>,
}

impl Mild<'_> {
    fn reaction_nodal(&self, u: &[f64]) -> Vec<[f64; 2]> {
        let f: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(j, &v)| self.spec.reaction.eval(self.grid.node(j), v))
            .collect();
        f.windows(2)
            .map(|w| GAUSS2_UNIT.map(|t| (1.0 - t) * w[0] + t * w[1]))
            .collect()
    }
}

impl NonlinearSystem for Mild<'_> {
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        if self.spec.reaction.is_zero() {
            return u.iter().zip(&self.b).map(|(u, b)| u - b).collect();
        }
        let kf = apply_k_nodal(self.grid, &self.reaction_nodal(u));
        u.iter()
            .zip(&kf)
            .zip(&self.b)
            .map(|((u, k), b)| u + k - b)
            .collect()
    }

    fn norm(&self, residual: &[f64]) -> f64 {
        nodal_l2_norm(self.grid, residual)
    }

    fn picard_direction(&self, r: &[f64]) -> Result<Vec<f64>> {
        Ok(r.iter().map(|v| -v).collect())
    }

    /// On nodes, `K` applied to a nodal interpolant equals `A⁻¹ M` (stiffness
    /// and consistent mass), so `(I + K D) δ = -r` becomes the tridiagonal
    /// system `(A + M D) δ = -A r`.
    fn newton_direction(&self, u: &[f64], r: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.cells();
        if n < 2 {
            return Ok(vec![0.0; n + 1]);
        }
        let h = self.grid.h();
        let d: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(j, &v)| self.spec.reaction.slope(self.grid.node(j), v))
            .collect();
        let m = n - 1;
        let main = (1..n).map(|j| 2.0 / h + 2.0 * h / 3.0 * d[j]).collect();
        let sub = (1..m).map(|i| -1.0 / h + h / 6.0 * d[i]).collect();
        let sup = (1..m).map(|i| -1.0 / h + h / 6.0 * d[i + 1]).collect();
        let matrix = TridiagonalMatrix::new(sub, main, sup)?;
        let rhs: Vec<f64> = (1..n)
            .map(|j| -(2.0 * r[j] - r[j - 1] - r[j + 1]) / h)
            .collect();
        let interior = matrix.solve(&rhs)?;
        let mut out = vec![0.0; n + 1];
        out[1..n].copy_from_slice(&interior);
        Ok(out)
    }
}

/// Solves the mild form on the grid of `path` with default settings for
/// everything but the tolerance and iteration cap.
pub fn solve_hammerstein(
    spec: &ProblemSpec,
    path: &IncrementPath,
    tol: f64,
    max_iters: usize,
) -> Result<HammersteinSolution> {
    solve_hammerstein_with(spec, path, &IterationOptions::new(tol, max_iters))
}

/// Iterates from `u = 0`. Picard updates are `u ← u - θ (u + K f(u) - b)`.
pub fn solve_hammerstein_with(
    spec: &ProblemSpec,
    path: &IncrementPath,
    options: &IterationOptions,
) -> Result<HammersteinSolution> {
    let grid = path.grid();
    let n = grid.cells();
    let h = grid.h();
    let rhs: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let d = path.increments()[i] / h;
            GAUSS2_UNIT.map(|t| spec.forcing.eval(grid.node(i) + t * h) + d)
        })
        .collect();
    let system = Mild {
        spec,
        grid,
        b: apply_k_nodal(grid, &rhs),
    };
    let out = iterate(&system, vec![0.0; n + 1], &spec.reaction, options)?;
    Ok(HammersteinSolution {
        solution: GridFunction::nodal(grid, out.u)?,
        residual: out.residual,
        iterations: out.iterations,
        residual_history: out.history,
    })
}
