//! Fractional Brownian motion on `[0, 1]` restricted to a uniform grid.
//!
//! Everything random in the crate starts from an [`IncrementPath`]: the
//! vector of increments `W(x_{i+1}) - W(x_i)` over the cells of a
//! [`UniformGrid`]. Coarser paths are obtained by exact aggregation, which is
//! how mesh levels share one underlying fBm path.

mod covariance;
mod isometry;
mod kernel;
pub mod profile;
mod sampler;

pub use covariance::{fbm_covariance, increment_autocovariance, increment_covariance_matrix};
pub use isometry::{ito_isometry, ito_isometry_by_covariance};
pub use kernel::{cell_pair_kernel_integral, kernel_cell_sum, kernel_cell_sum_bound};
pub use sampler::{
    aggregate_increments, sample_increments, sample_stream, IncrementSampler, SamplerMethod,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hurst index restricted to the anti-persistent range `(0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstIndex(f64);

impl HurstIndex {
    pub const WHITE: HurstIndex = HurstIndex(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 0.5 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHurst(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Exponent `2H` of the variogram `|t|^{2H}`.
    pub fn two_h(self) -> f64 {
        2.0 * self.0
    }

    /// `H = 1/2`: Brownian motion, where the singular kernel term vanishes.
    pub fn is_white(self) -> bool {
        self.0 == 0.5
    }

    /// Coefficient `H(1 - 2H)` of the singular part of the isometry.
    pub fn kernel_coefficient(self) -> f64 {
        self.0 * (1.0 - 2.0 * self.0)
    }
}

impl TryFrom<f64> for HurstIndex {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<HurstIndex> for f64 {
    fn from(h: HurstIndex) -> f64 {
        h.0
    }
}

/// Uniform partition of `(0, 1]` into `n` cells `(x_i, x_{i+1}]`, `x_i = i/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniformGrid {
    n: usize,
}

impl UniformGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("cell count must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn cells(self) -> usize {
        self.n
    }

    pub fn h(self) -> f64 {
        1.0 / self.n as f64
    }

    /// Node `x_i = i/n`, computed by division so that `x_n == 1` exactly.
    pub fn node(self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn nodes(self) -> impl Iterator<Item = f64> {
        (0..=self.n).map(move |i| self.node(i))
    }

    /// Index of the cell `(x_i, x_{i+1}]` containing `x`; `x = 0` maps to cell 0.
    pub fn cell_of(self, x: f64) -> usize {
        let t = x * self.n as f64;
        let i = t.ceil() as usize;
        i.clamp(1, self.n) - 1
    }

    pub fn refine(self, factor: usize) -> Result<Self> {
        Self::new(self.n * factor)
    }

    /// The ratio `other.n / self.n` when `self` divides `other`.
    pub fn refinement_factor(self, finer: UniformGrid) -> Option<usize> {
        finer.n.is_multiple_of(self.n).then_some(finer.n / self.n)
    }
}

/// fBm increments over the cells of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementPath {
    grid: UniformGrid,
    increments: Vec<f64>,
}

impl IncrementPath {
    pub fn new(grid: UniformGrid, increments: Vec<f64>) -> Result<Self> {
        if increments.len() != grid.cells() {
            return Err(Error::GridMismatch {
                expected: grid.cells(),
                found: increments.len(),
            });
        }
        Ok(Self { grid, increments })
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            increments: vec![0.0; grid.cells()],
        }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// `W(1)` for this path.
    pub fn endpoint(&self) -> f64 {
        crate::sum::compensated_sum(self.increments.iter().copied())
    }

    /// `a * self + b * other` on the same grid.
    pub fn combine(&self, a: f64, other: &IncrementPath, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.cells(),
                found: other.grid.cells(),
            });
        }
        let increments = self
            .increments
            .iter()
            .zip(&other.increments)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            grid: self.grid,
            increments,
        })
    }
}

/// Piecewise-constant noise density: the cell value is `dW_i / h`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepNoise {
    grid: UniformGrid,
    density: Vec<f64>,
}

impl StepNoise {
    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Exact `L^2(0, 1)` norm squared, `h * sum density_i^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        let h = self.grid.h();
        h * crate::sum::compensated_sum(self.density.iter().map(|d| d * d))
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.density[self.grid.cell_of(x)]
    }

    pub fn to_step_function(&self) -> StepFunction {
        StepFunction::on_grid(self.grid, self.density.clone()).expect("density length matches grid")
    }
}

/// Piecewise-constant noise built from a path.
pub fn step_noise(path: &IncrementPath) -> StepNoise {
    let inv_h = path.grid.cells() as f64;
    StepNoise {
        grid: path.grid,
        density: path.increments.iter().map(|w| w * inv_h).collect(),
    }
}

/// Step function `sum_j values[j] * 1_{(a_j, a_{j+1}]}` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "step function needs N + 1 breakpoints for N values (got {} and {})",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument(
                "step function breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints
            .windows(2)
            .any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan())
        {
            return Err(Error::InvalidArgument(
                "step function breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn on_grid(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid.nodes().collect(), values)
    }

    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![value],
        }
    }

    /// `value` on `(0, right]`, zero on `(right, 1]`.
    pub fn indicator_to(right: f64) -> Result<Self> {
        if right >= 1.0 {
            return Ok(Self::constant(1.0));
        }
        Self::new(vec![0.0, right, 1.0], vec![1.0, 0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        // first breakpoint >= x closes the piece (a_{j}, a_{j+1}]
        let idx = self.breakpoints[1..].partition_point(|&a| a < x);
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Breakpoints of the common refinement of `self` and `other`.
    pub(crate) fn merged_breakpoints(&self, other: &StepFunction) -> Vec<f64> {
        let mut merged: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .collect();
        merged.sort_by(f64::total_cmp);
        merged.dedup();
        merged
    }

    /// Smallest uniform grid (up to `max_n` cells) whose nodes contain every
    /// breakpoint, within `1e-12`.
    pub fn uniform_support(&self, max_n: usize) -> Option<UniformGrid> {
        (1..=max_n).find_map(|n| {
            let ok = self.breakpoints.iter().all(|&a| {
                let t = a * n as f64;
                (t - t.round()).abs() < 1e-12 * n as f64
            });
            ok.then_some(UniformGrid { n })
        })
    }
}
