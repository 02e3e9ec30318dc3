use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{increment_autocovariance, increment_covariance_matrix};
use super::{HurstIndex, IncrementPath, UniformGrid};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// How correlated increments are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerMethod {
    /// Dense Cholesky factor of the `n x n` covariance.
    #[default]
    Cholesky,
    /// Circulant embedding of the Toeplitz covariance (Davies–Harte).
    Circulant,
}

/// Per-sample random stream: ChaCha20 keyed by the master seed, with the
/// sample index selecting the stream. Sample `m` sees the same numbers no
/// matter which thread draws it or in which order samples are processed.
pub fn sample_stream(master_seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Reusable sampler holding the factorisation for one `(grid, H)` pair.
#[derive(Clone)]
pub struct IncrementSampler {
    grid: UniformGrid,
    hurst: HurstIndex,
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    White {
        std_dev: f64,
    },
    Cholesky {
        lower: DMatrix<f64>,
    },
    Circulant {
        sqrt_eigs: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
}

impl std::fmt::Debug for IncrementSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            Kind::White { .. } => "white",
            Kind::Cholesky { .. } => "cholesky",
            Kind::Circulant { .. } => "circulant",
        };
        f.debug_struct("IncrementSampler")
            .field("grid", &self.grid)
            .field("hurst", &self.hurst)
            .field("kind", &kind)
            .finish()
    }
}

impl IncrementSampler {
    pub fn new(grid: UniformGrid, hurst: HurstIndex, method: SamplerMethod) -> Result<Self> {
        let kind = if hurst.is_white() {
            Kind::White {
                std_dev: grid.h().sqrt(),
            }
        } else {
            match method {
                SamplerMethod::Cholesky => cholesky_kind(grid, hurst)?,
                SamplerMethod::Circulant => circulant_kind(grid, hurst)?,
            }
        };
        Ok(Self { grid, hurst, kind })
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> IncrementPath {
        let n = self.grid.cells();
        let increments = match &self.kind {
            Kind::White { std_dev } => (0..n)
                .map(|_| std_dev * rng.sample::<f64, _>(StandardNormal))
                .collect(),
            Kind::Cholesky { lower } => {
                let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                (0..n)
                    .map(|i| {
                        let mut acc = NeumaierSum::new();
                        for (j, zj) in z.iter().enumerate().take(i + 1) {
                            acc.add(lower[(i, j)] * zj);
                        }
                        acc.value()
                    })
                    .collect()
            }
            Kind::Circulant { sqrt_eigs, fft } => {
                let mut buf: Vec<Complex<f64>> = sqrt_eigs
                    .iter()
                    .map(|s| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                buf[..n].iter().map(|c| c.re).collect()
            }
        };
        IncrementPath {
            grid: self.grid,
            increments,
        }
    }
}

fn cholesky_kind(grid: UniformGrid, hurst: HurstIndex) -> Result<Kind> {
    let cov = increment_covariance_matrix(grid, hurst);
    let chol = cov.cholesky().ok_or_else(|| {
        Error::Factorization(format!(
            "increment covariance (n = {}, H = {}) is not numerically positive definite",
            grid.cells(),
            hurst.value()
        ))
    })?;
    Ok(Kind::Cholesky { lower: chol.l() })
}

fn circulant_kind(grid: UniformGrid, hurst: HurstIndex) -> Result<Kind> {
    let n = grid.cells();
    let size = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..size)
        .map(|k| {
            let lag = if k <= n { k } else { size - k };
            Complex::new(increment_autocovariance(grid, hurst, lag), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut row);
    let largest = row.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let sqrt_eigs = row
        .iter()
        .map(|c| {
            if c.re < -1e-10 * largest {
                Err(Error::Factorization(format!(
                    "circulant embedding has negative eigenvalue {:e} (n = {n}, H = {})",
                    c.re,
                    hurst.value()
                )))
            } else {
                Ok((c.re.max(0.0) / size as f64).sqrt())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fft = planner.plan_fft_inverse(size);
    Ok(Kind::Circulant { sqrt_eigs, fft })
}

/// One joint Gaussian draw of the increments. Builds a fresh sampler; reuse
/// an [`IncrementSampler`] when drawing many paths.
pub fn sample_increments<R: Rng + ?Sized>(
    grid: UniformGrid,
    hurst: HurstIndex,
    rng: &mut R,
) -> Result<IncrementPath> {
    Ok(IncrementSampler::new(grid, hurst, SamplerMethod::Cholesky)?.sample(rng))
}

/// Sums consecutive groups of `factor` increments: the exact fBm increment
/// path on the grid with `n / factor` cells.
pub fn aggregate_increments(fine: &IncrementPath, factor: usize) -> Result<IncrementPath> {
    let n = fine.grid.cells();
    if factor == 0 || !n.is_multiple_of(factor) {
        return Err(Error::NotDivisible { factor, n });
    }
    let grid = UniformGrid::new(n / factor)?;
    let increments = fine
        .increments
        .chunks_exact(factor)
        .map(|chunk| crate::sum::compensated_sum(chunk.iter().copied()))
        .collect();
    Ok(IncrementPath { grid, increments })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_path() {
        let grid = UniformGrid::new(8).unwrap();
        let h = HurstIndex::new(0.25).unwrap();
        for method in [SamplerMethod::Cholesky, SamplerMethod::Circulant] {
            let s = IncrementSampler::new(grid, h, method).unwrap();
            let a = s.sample(&mut sample_stream(42, 0));
            let b = s.sample(&mut sample_stream(42, 0));
            assert_eq!(a, b);
            let c = s.sample(&mut sample_stream(42, 1));
            assert_ne!(a, c);
        }
    }

    #[test]
    fn aggregation() {
        let grid = UniformGrid::new(4).unwrap();
        let fine = IncrementPath::new(grid, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(aggregate_increments(&fine, 1).unwrap(), fine);
        let coarse = aggregate_increments(&fine, 2).unwrap();
        assert_eq!(coarse.increments(), &[3.0, 7.0]);
        assert_eq!(coarse.grid().cells(), 2);
        assert!(matches!(
            aggregate_increments(&fine, 3),
            Err(Error::NotDivisible { factor: 3, n: 4 })
        ));
        assert!(aggregate_increments(&fine, 0).is_err());
    }

    #[test]
    fn circulant_eigenvalues_are_nonnegative_across_hurst_range() {
        for n in [1, 2, 3, 16, 100, 512] {
            for hv in [0.01, 0.1, 0.25, 0.4, 0.49] {
                let grid = UniformGrid::new(n).unwrap();
                let h = HurstIndex::new(hv).unwrap();
                IncrementSampler::new(grid, h, SamplerMethod::Circulant).unwrap();
            }
        }
    }
}
