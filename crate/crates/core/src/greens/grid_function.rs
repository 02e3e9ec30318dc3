use serde::{Deserialize, Serialize};

use crate::noise::UniformGrid;
use crate::quad::GAUSS2_UNIT;
use crate::{Error, Result};

/// How the value vector of a [`GridFunction`] is extended to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `n + 1` nodal values, linear on each cell.
    PiecewiseLinear,
    /// `n` cell values, constant on each cell.
    PiecewiseConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    grid: UniformGrid,
    rule: Rule,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn nodal(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() + 1 {
            return Err(Error::GridMismatch {
                expected: grid.cells() + 1,
                found: values.len(),
            });
        }
        Ok(Self {
            grid,
            rule: Rule::PiecewiseLinear,
            values,
        })
    }

    pub fn cellwise(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::GridMismatch {
                expected: grid.cells(),
                found: values.len(),
            });
        }
        Ok(Self {
            grid,
            rule: Rule::PiecewiseConstant,
            values,
        })
    }

    pub fn zero(grid: UniformGrid) -> Self {
        Self {
            grid,
            rule: Rule::PiecewiseLinear,
            values: vec![0.0; grid.cells() + 1],
        }
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate<F: Fn(f64) -> f64>(grid: UniformGrid, f: F) -> Self {
        Self {
            grid,
            rule: Rule::PiecewiseLinear,
            values: grid.nodes().map(f).collect(),
        }
    }

    /// Nodal interpolant of `f` with the boundary values forced to zero.
    pub fn interpolate_dirichlet<F: Fn(f64) -> f64>(grid: UniformGrid, f: F) -> Self {
        let n = grid.cells();
        let mut out = Self::interpolate(grid, f);
        out.values[0] = 0.0;
        out.values[n] = 0.0;
        out
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let cell = self.grid.cell_of(x);
        match self.rule {
            Rule::PiecewiseConstant => self.values[cell],
            Rule::PiecewiseLinear => {
                let t = x * self.grid.cells() as f64 - cell as f64;
                (1.0 - t) * self.values[cell] + t * self.values[cell + 1]
            }
        }
    }

    /// Values at the two Gauss points of `cell`.
    pub fn gauss_values(&self, cell: usize) -> [f64; 2] {
        match self.rule {
            Rule::PiecewiseConstant => [self.values[cell]; 2],
            Rule::PiecewiseLinear => {
                let (l, r) = (self.values[cell], self.values[cell + 1]);
                GAUSS2_UNIT.map(|t| (1.0 - t) * l + t * r)
            }
        }
    }

    /// One-sided limits at both ends of sub-cell `sub` when each cell is split
    /// into `parts` equal sub-cells.
    pub(crate) fn sub_cell_ends(&self, sub: usize, parts: usize) -> (f64, f64) {
        let cell = sub / parts;
        match self.rule {
            Rule::PiecewiseConstant => (self.values[cell], self.values[cell]),
            Rule::PiecewiseLinear => {
                let k = (sub % parts) as f64;
                let p = parts as f64;
                let (l, r) = (self.values[cell], self.values[cell + 1]);
                let at = |t: f64| (1.0 - t) * l + t * r;
                // exact at the ends of the cell
                let t1 = if sub % parts == parts - 1 {
                    1.0
                } else {
                    (k + 1.0) / p
                };
                (at(k / p), at(t1))
            }
        }
    }

    /// `a * self + b * other` on the same grid and rule.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        if self.grid != other.grid || self.rule != other.rule {
            return Err(Error::GridMismatch {
                expected: self.grid.cells(),
                found: other.grid.cells(),
            });
        }
        Ok(Self {
            grid: self.grid,
            rule: self.rule,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_is_checked_against_rule() {
        let g = UniformGrid::new(4).unwrap();
        assert!(GridFunction::nodal(g, vec![0.0; 4]).is_err());
        assert!(GridFunction::cellwise(g, vec![0.0; 5]).is_err());
    }

    #[test]
    fn evaluation() {
        let g = UniformGrid::new(2).unwrap();
        let f = GridFunction::nodal(g, vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(f.eval(0.25), 0.5);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.0), 0.0);
        let c = GridFunction::cellwise(g, vec![2.0, 3.0]).unwrap();
        assert_eq!(c.eval(0.5), 2.0);
        assert_eq!(c.eval(0.75), 3.0);
        let gv = f.gauss_values(0);
        assert!((gv[0] + gv[1] - 1.0).abs() < 1e-15);
    }
}
