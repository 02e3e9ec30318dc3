//! Continuous piecewise-linear finite elements on a uniform mesh.

mod norms;
mod tridiag;

pub use norms::{discrete_h1_error, discrete_l2_error, h1_seminorm, l2_norm};
pub use tridiag::TridiagonalMatrix;

use crate::greens::{GridFunction, ProblemSpec};
use crate::iteration::{iterate, IterationOptions, NonlinearSystem};
use crate::noise::{IncrementPath, StepNoise, UniformGrid};
use crate::quad::GAUSS2_UNIT;
use crate::{Error, Result};

/// Finite element solution with homogeneous Dirichlet conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct FemSolution {
    pub grid: UniformGrid,
    /// Values at the interior nodes `x_1, ..., x_{n-1}`.
    pub interior: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

impl FemSolution {
    /// All `n + 1` nodal values, with zeros at both ends.
    pub fn nodal_values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.interior.len() + 2);
        v.push(0.0);
        v.extend_from_slice(&self.interior);
        v.push(0.0);
        v
    }

    pub fn to_grid_function(&self) -> GridFunction {
        GridFunction::nodal(self.grid, self.nodal_values()).expect("length matches grid")
    }
}

fn interior_grid(grid: UniformGrid) -> Result<()> {
    if grid.cells() < 2 {
        return Err(Error::InvalidGrid(format!(
            "finite element mesh needs at least 2 cells, got {}",
            grid.cells()
        )));
    }
    Ok(())
}

/// Stiffness matrix `(φ_i', φ_j')` on the interior hats.
pub fn assemble_stiffness(grid: UniformGrid) -> Result<TridiagonalMatrix> {
    interior_grid(grid)?;
    let m = grid.cells() - 1;
    let n = grid.cells() as f64;
    TridiagonalMatrix::new(vec![-n; m - 1], vec![2.0 * n; m], vec![-n; m - 1])
}

/// `(g, φ_j)` by two-point Gauss quadrature on each cell.
fn forcing_load<G: Fn(f64) -> f64>(g: G, grid: UniformGrid) -> Vec<f64> {
    let n = grid.cells();
    let h = grid.h();
    let mut load = vec![0.0; n + 1];
    for cell in 0..n {
        let a = grid.node(cell);
        for t in GAUSS2_UNIT {
            let v = 0.5 * h * g(a + t * h);
            load[cell] += (1.0 - t) * v;
            load[cell + 1] += t * v;
        }
    }
    load
}

/// `(Ẇⁿ, φ_j)` for all nodes of `grid`, exact for any pair of uniform
/// meshes: the product of a step function and a hat is integrated on the
/// common refinement, where the hat is linear.
fn noise_load(density: &[f64], noise_grid: UniformGrid, grid: UniformGrid) -> Vec<f64> {
    let n = grid.cells();
    let mut load = vec![0.0; n + 1];
    if noise_grid == grid {
        let h = grid.h();
        for (cell, d) in density.iter().enumerate() {
            load[cell] += 0.5 * h * d;
            load[cell + 1] += 0.5 * h * d;
        }
        return load;
    }
    let fine = lcm(noise_grid.cells(), n);
    let per_noise = fine / noise_grid.cells();
    let per_fem = fine / n;
    let w = 1.0 / fine as f64;
    for s in 0..fine {
        let d = density[s / per_noise];
        let cell = s / per_fem;
        // hat values at the sub-cell midpoint
        let t = ((s % per_fem) as f64 + 0.5) / per_fem as f64;
        load[cell] += w * d * (1.0 - t);
        load[cell + 1] += w * d * t;
    }
    load
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Load vector `(g, φ_j) + (Ẇⁿ, φ_j)` on the interior nodes; the noise must
/// live on the finite element mesh.
pub fn assemble_load<G: Fn(f64) -> f64>(
    g: G,
    noise: &StepNoise,
    grid: UniformGrid,
) -> Result<Vec<f64>> {
    interior_grid(grid)?;
    if noise.grid() != grid {
        return Err(Error::GridMismatch {
            expected: grid.cells(),
            found: noise.grid().cells(),
        });
    }
    assemble_load_on(g, noise, grid)
}

/// As [`assemble_load`], but the noise may live on any uniform mesh.
pub fn assemble_load_on<G: Fn(f64) -> f64>(
    g: G,
    noise: &StepNoise,
    grid: UniformGrid,
) -> Result<Vec<f64>> {
    interior_grid(grid)?;
    let forcing = forcing_load(g, grid);
    let stochastic = noise_load(noise.density(), noise.grid(), grid);
    let n = grid.cells();
    Ok((1..n).map(|j| forcing[j] + stochastic[j]).collect())
}

/// Direct solve of the linear system; the residual is `‖A u - b‖_∞`.
pub fn solve_linear_fem(stiffness: &TridiagonalMatrix, load: &[f64]) -> Result<FemSolution> {
    let grid = UniformGrid::new(stiffness.dim() + 1)?;
    let interior = stiffness.solve(load)?;
    let residual = stiffness
        .mul_vec(&interior)
        .iter()
        .zip(load)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(FemSolution {
        grid,
        interior,
        residual,
        iterations: 1,
    })
}

/// Reaction load `N(u)_j = (f(·, u), φ_j)` with two-point Gauss quadrature,
/// on all `n + 1` nodes.
fn reaction_load(spec: &ProblemSpec, grid: UniformGrid, nodal: &[f64]) -> Vec<f64> {
    let n = grid.cells();
    let h = grid.h();
    let mut load = vec![0.0; n + 1];
    for cell in 0..n {
        let a = grid.node(cell);
        let (l, r) = (nodal[cell], nodal[cell + 1]);
        for t in GAUSS2_UNIT {
            let v = 0.5 * h * spec.reaction.eval(a + t * h, (1.0 - t) * l + t * r);
            load[cell] += (1.0 - t) * v;
            load[cell + 1] += t * v;
        }
    }
    load
}

/// `A u + N(u) - b` on the interior nodes.
struct Galerkin<'a> {
    spec: &'a ProblemSpec,
    grid: UniformGrid,
    stiffness: TridiagonalMatrix,
    load: Vec<f64>,
}

impl Galerkin<'_> {
    fn with_boundary(&self, interior: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(interior.len() + 2);
        v.push(0.0);
        v.extend_from_slice(interior);
        v.push(0.0);
        v
    }
}

impl NonlinearSystem for Galerkin<'_> {
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let au = self.stiffness.mul_vec(u);
        let reaction = reaction_load(self.spec, self.grid, &self.with_boundary(u));
        au.iter()
            .zip(&reaction[1..])
            .zip(&self.load)
            .map(|((a, f), b)| a + f - b)
            .collect()
    }

    fn norm(&self, residual: &[f64]) -> f64 {
        (residual.iter().map(|r| r * r).sum::<f64>() / self.grid.h()).sqrt()
    }

    fn picard_direction(&self, r: &[f64]) -> Result<Vec<f64>> {
        Ok(self.stiffness.solve(r)?.into_iter().map(|v| -v).collect())
    }

    fn newton_direction(&self, u: &[f64], r: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.cells();
        let h = self.grid.h();
        let nodal = self.with_boundary(u);
        // Jacobian of N on all nodes: diagonal and first off-diagonal
        let mut diag = vec![0.0; n + 1];
        let mut off = vec![0.0; n];
        for cell in 0..n {
            let a = self.grid.node(cell);
            let (l, rv) = (nodal[cell], nodal[cell + 1]);
            for t in GAUSS2_UNIT {
                let w = 0.5 * h * self.spec.reaction.slope(a + t * h, (1.0 - t) * l + t * rv);
                diag[cell] += w * (1.0 - t) * (1.0 - t);
                diag[cell + 1] += w * t * t;
                off[cell] += w * t * (1.0 - t);
            }
        }
        let main = self
            .stiffness
            .main()
            .iter()
            .zip(&diag[1..n])
            .map(|(a, d)| a + d)
            .collect();
        let side: Vec<f64> = self
            .stiffness
            .sub()
            .iter()
            .zip(&off[1..n - 1])
            .map(|(a, d)| a + d)
            .collect();
        let jacobian = TridiagonalMatrix::new(side.clone(), main, side)?;
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        jacobian.solve(&rhs)
    }
}

/// Solves `A u + N(u) = b` on the grid of `path`.
pub fn solve_nonlinear_fem(
    spec: &ProblemSpec,
    path: &IncrementPath,
    tol: f64,
    max_iters: usize,
) -> Result<FemSolution> {
    solve_nonlinear_fem_on(
        spec,
        path,
        path.grid(),
        &IterationOptions::new(tol, max_iters),
    )
}

/// Solves `A u + N(u) = b` on `grid`, with the noise taken from `path` on its
/// own mesh.
///
/// Picard updates are `u ← u + θ A⁻¹ (b - A u - N(u))`; convergence is
/// declared once `sqrt(Σ r_j² / h)` drops below the tolerance. The linear
/// problem is solved directly.
pub fn solve_nonlinear_fem_on(
    spec: &ProblemSpec,
    path: &IncrementPath,
    grid: UniformGrid,
    options: &IterationOptions,
) -> Result<FemSolution> {
    let stiffness = assemble_stiffness(grid)?;
    let noise = crate::noise::step_noise(path);
    let load = assemble_load_on(|x| spec.forcing.eval(x), &noise, grid)?;
    if spec.reaction.is_zero() {
        return solve_linear_fem(&stiffness, &load);
    }
    let system = Galerkin {
        spec,
        grid,
        stiffness,
        load,
    };
    let out = iterate(
        &system,
        vec![0.0; grid.cells() - 1],
        &spec.reaction,
        options,
    )?;
    Ok(FemSolution {
        grid,
        interior: out.u,
        residual: out.residual,
        iterations: out.iterations,
    })
}

/// Ritz projection of `w` (with `w(0) = w(1) = 0`) onto the finite element
/// space. The right side `(w', φ_j')` is formed from nodal differences,
/// which is exact because `φ_j'` is constant on each cell.
pub fn ritz_projection<W: Fn(f64) -> f64>(w: W, grid: UniformGrid) -> Result<FemSolution> {
    let stiffness = assemble_stiffness(grid)?;
    let n = grid.cells();
    let values: Vec<f64> = grid.nodes().map(&w).collect();
    let inv_h = n as f64;
    let rhs: Vec<f64> = (1..n)
        .map(|j| ((values[j] - values[j - 1]) - (values[j + 1] - values[j])) * inv_h)
        .collect();
    solve_linear_fem(&stiffness, &rhs)
}
