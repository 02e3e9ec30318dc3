//! Level studies beyond the strong error: discrete `H¹` growth,
//! super-convergence of the Ritz projection and FEM/Green's agreement.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    coupled_paths, draw, ladder_grids, reduce_levels, run_samples, solve_with, Solver, StudyConfig,
};
use crate::fem::{
    discrete_h1_error, discrete_l2_error, h1_seminorm, l2_norm, ritz_projection,
    solve_nonlinear_fem_on,
};
use crate::iteration::IterationOptions;
use crate::noise::{IncrementSampler, UniformGrid};
use crate::Result;

use super::rate::{fit_rate, RateFit};

/// Monte Carlo estimate of one scalar quantity per ladder level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStudy {
    pub quantity: String,
    pub n: Vec<usize>,
    pub h: Vec<f64>,
    pub value: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Fit of `log2(value)` against `log2(h)`.
    pub fit: RateFit,
    pub failed_samples: usize,
    pub wall_time: f64,
}

fn finish(
    quantity: &str,
    sizes: &[usize],
    value: Vec<f64>,
    stderr: Vec<f64>,
    failed: usize,
    start: Instant,
) -> Result<LevelStudy> {
    let h: Vec<f64> = sizes.iter().map(|&n| 1.0 / n as f64).collect();
    let fit = fit_rate(&h, &value)?;
    Ok(LevelStudy {
        quantity: quantity.to_string(),
        n: sizes.to_vec(),
        h,
        value,
        stderr,
        fit,
        failed_samples: failed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn fem_options(config: &StudyConfig) -> IterationOptions {
    config.iteration()
}

/// Mean of `‖u_h‖₁² = ‖u_h‖² + ‖u_h'‖²` for the finite element solution at
/// each ladder level. Paths are drawn at the finest level and aggregated.
pub fn h1_growth_study(config: &StudyConfig, threads: usize) -> Result<LevelStudy> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.problem()?;
    let sizes = config.ladder.sizes();
    let finest = *ladder_grids(config)?.last().expect("non-empty ladder");
    let sampler = IncrementSampler::new(finest, config.hurst, config.sampler)?;
    let results = run_samples(config.samples, threads, |m| {
        let top = draw(&sampler, config.seed, m);
        coupled_paths(&top, &sizes)?
            .iter()
            .map(|path| {
                let u = solve_nonlinear_fem_on(&spec, path, path.grid(), &fem_options(config))?
                    .to_grid_function();
                Ok(l2_norm(&u).powi(2) + h1_seminorm(&u)?.powi(2))
            })
            .collect()
    })?;
    let (stats, failed) = reduce_levels(results, sizes.len(), config.max_failures)?;
    finish(
        "mean H1 norm squared",
        &sizes,
        stats.iter().map(|s| s.mean).collect(),
        stats.iter().map(|s| s.stderr).collect(),
        failed,
        start,
    )
}

/// Mean of `‖(R_h uⁿ - u_hⁿ)'‖²` at each ladder level, where `uⁿ` (the
/// continuum solution driven by the level-`n` noise) is proxied by a finite
/// element solve on a mesh `2^extra` times finer with the same noise.
pub fn superconvergence_study(config: &StudyConfig, threads: usize) -> Result<LevelStudy> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.problem()?;
    let sizes = config.ladder.sizes();
    let finest = *ladder_grids(config)?.last().expect("non-empty ladder");
    let sampler = IncrementSampler::new(finest, config.hurst, config.sampler)?;
    let factor = 1usize << config.extra;
    let results = run_samples(config.samples, threads, |m| {
        let top = draw(&sampler, config.seed, m);
        coupled_paths(&top, &sizes)?
            .iter()
            .map(|path| {
                let grid = path.grid();
                let options = fem_options(config);
                let coarse =
                    solve_nonlinear_fem_on(&spec, path, grid, &options)?.to_grid_function();
                let fine_grid = UniformGrid::new(grid.cells() * factor)?;
                let proxy =
                    solve_nonlinear_fem_on(&spec, path, fine_grid, &options)?.to_grid_function();
                let ritz = ritz_projection(|x| proxy.eval(x), grid)?.to_grid_function();
                Ok(discrete_h1_error(&ritz, &coarse)?.powi(2))
            })
            .collect()
    })?;
    let (stats, failed) = reduce_levels(results, sizes.len(), config.max_failures)?;
    finish(
        "mean squared H1 seminorm of Ritz projection minus FEM solution",
        &sizes,
        stats.iter().map(|s| s.mean).collect(),
        stats.iter().map(|s| s.stderr).collect(),
        failed,
        start,
    )
}

/// RMS of `‖u_fem - u_greens‖` at each ladder level on shared paths.
pub fn solver_agreement_study(config: &StudyConfig, threads: usize) -> Result<LevelStudy> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.problem()?;
    let sizes = config.ladder.sizes();
    let finest = *ladder_grids(config)?.last().expect("non-empty ladder");
    let sampler = IncrementSampler::new(finest, config.hurst, config.sampler)?;
    let results = run_samples(config.samples, threads, |m| {
        let top = draw(&sampler, config.seed, m);
        coupled_paths(&top, &sizes)?
            .iter()
            .map(|path| {
                let fem = solve_with(Solver::Fem, &spec, path, config)?;
                let greens = solve_with(Solver::Greens, &spec, path, config)?;
                Ok(discrete_l2_error(&fem, &greens).powi(2))
            })
            .collect()
    })?;
    let (stats, failed) = reduce_levels(results, sizes.len(), config.max_failures)?;
    let rms: Vec<f64> = stats.iter().map(|s| s.mean.sqrt()).collect();
    let stderr = stats
        .iter()
        .zip(&rms)
        .map(|(s, r)| if *r > 0.0 { s.stderr / (2.0 * r) } else { 0.0 })
        .collect();
    finish(
        "RMS L2 distance between FEM and Green's solutions",
        &sizes,
        rms,
        stderr,
        failed,
        start,
    )
}
