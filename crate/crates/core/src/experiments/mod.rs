//! Monte Carlo convergence studies on coupled paths and the statistical
//! verification suite.
//!
//! A study draws one increment path per sample on a reference grid finer than
//! every level, aggregates it down to each level, solves everywhere and
//! measures `L²` distances to the reference solution. Samples use
//! independent random streams and are reduced in index order, so results do
//! not depend on the thread count.

mod config;
mod rate;
mod studies;
mod verify;

pub use config::{Ladder, Solver, StudyConfig};
pub use rate::{estimate_rate, fit_rate, RateFit};
pub use studies::{h1_growth_study, solver_agreement_study, superconvergence_study, LevelStudy};
pub use verify::{
    default_suite, kernel_cell_sum_quadrature, verify_en_decay, verify_isometry, verify_kernel_sum,
    verify_noise_norm, verify_solver_agreement, Status, SuiteSamples, Verdict, DEFAULT_PROBES,
    Z_LIMIT,
};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fem::{discrete_l2_error, solve_nonlinear_fem_on};
use crate::greens::{solve_hammerstein_with, GridFunction, ProblemSpec};
use crate::noise::{
    aggregate_increments, sample_stream, IncrementPath, IncrementSampler, UniformGrid,
};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// Statistics of one ladder level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStat {
    pub n: usize,
    pub h: f64,
    /// `sqrt` of the Monte Carlo mean of the squared error.
    pub rms_error: f64,
    /// Standard error of `rms_error` (delta method).
    pub stderr: f64,
}

/// Outcome of the monotone-decay check along the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Decreasing,
    /// A single inversion, tolerated at the finest level.
    Flagged,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub levels: Vec<LevelStat>,
    pub fitted_rate: f64,
    pub rate_stderr: f64,
    pub fit_residual: f64,
    pub monotonicity: Monotonicity,
    /// Reference bias relative to the finest-level error under the fitted
    /// rate model, `(h_ref / h_finest)^rate`.
    pub reference_bias_ratio: f64,
    pub failed_samples: usize,
    pub wall_time: f64,
}

/// Runs `work` for every sample index on a pool of `threads` workers (`0`:
/// rayon's default) and returns the results in index order.
pub(crate) fn run_samples<T, F>(samples: usize, threads: usize, work: F) -> Result<Vec<Result<T>>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(|| (0..samples).into_par_iter().map(&work).collect()))
}

/// Per-level mean and standard error of scalar sample metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct MeanStat {
    pub mean: f64,
    pub stderr: f64,
}

/// Reduces per-sample level vectors in sample order, tolerating at most
/// `max_failures` failed samples.
pub(crate) fn reduce_levels(
    results: Vec<Result<Vec<f64>>>,
    levels: usize,
    max_failures: usize,
) -> Result<(Vec<MeanStat>, usize)> {
    let mut sums = vec![NeumaierSum::new(); levels];
    let mut squares = vec![NeumaierSum::new(); levels];
    let mut failed = 0;
    let mut ok = 0usize;
    for (sample, result) in results.into_iter().enumerate() {
        match result {
            Ok(values) => {
                ok += 1;
                for (l, v) in values.into_iter().enumerate() {
                    sums[l].add(v);
                    squares[l].add(v * v);
                }
            }
            Err(source) => {
                failed += 1;
                if failed > max_failures {
                    return Err(Error::Sample {
                        sample,
                        source: Box::new(source),
                    });
                }
            }
        }
    }
    if ok < 2 {
        return Err(Error::InvalidArgument(format!(
            "only {ok} samples succeeded; need at least 2"
        )));
    }
    let m = ok as f64;
    let stats = sums
        .iter()
        .zip(&squares)
        .map(|(s, q)| {
            let mean = s.value() / m;
            let var = ((q.value() - m * mean * mean) / (m - 1.0)).max(0.0);
            MeanStat {
                mean,
                stderr: (var / m).sqrt(),
            }
        })
        .collect();
    Ok((stats, failed))
}

fn monotonicity(rms: &[f64]) -> Monotonicity {
    let inversions: Vec<usize> = rms
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] >= w[0])
        .map(|(i, _)| i + 1)
        .collect();
    match inversions.as_slice() {
        [] => Monotonicity::Decreasing,
        [last] if *last == rms.len() - 1 => Monotonicity::Flagged,
        _ => Monotonicity::Failed,
    }
}

/// Solves the problem on the grid of `path` with the chosen single solver.
pub(crate) fn solve_with(
    solver: Solver,
    spec: &ProblemSpec,
    path: &IncrementPath,
    config: &StudyConfig,
) -> Result<GridFunction> {
    match solver {
        Solver::Fem => Ok(
            solve_nonlinear_fem_on(spec, path, path.grid(), &config.iteration())?
                .to_grid_function(),
        ),
        Solver::Greens => Ok(solve_hammerstein_with(spec, path, &config.iteration())?.solution),
        Solver::Both => Err(Error::InvalidArgument(
            "a single study needs one solver; use run_convergence_studies for `both`".into(),
        )),
    }
}

/// Level paths aggregated from the reference path, with the coupling checked.
pub(crate) fn coupled_paths(
    reference: &IncrementPath,
    sizes: &[usize],
) -> Result<Vec<IncrementPath>> {
    let n_ref = reference.grid().cells();
    sizes
        .iter()
        .map(|&n| {
            let level = aggregate_increments(reference, n_ref / n)?;
            let gap = (level.endpoint() - reference.endpoint()).abs();
            assert!(
                gap <= 1e-12 * (1.0 + reference.increments().iter().map(|d| d.abs()).sum::<f64>()),
                "coupled path at n = {n} does not end at W(1)"
            );
            Ok(level)
        })
        .collect()
}

pub(crate) fn draw(sampler: &IncrementSampler, seed: u64, sample: usize) -> IncrementPath {
    sampler.sample(&mut sample_stream(seed, sample as u64))
}

/// Strong-error study for one solver on rayon's default pool.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    run_convergence_study_with(config, 0)
}

/// Strong-error study for one solver on `threads` workers.
pub fn run_convergence_study_with(
    config: &StudyConfig,
    threads: usize,
) -> Result<ConvergenceReport> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.problem()?;
    let reference_grid = config.reference_grid()?;
    let sampler = IncrementSampler::new(reference_grid, config.hurst, config.sampler)?;
    let sizes = config.ladder.sizes();

    let results = run_samples(config.samples, threads, |m| {
        let reference = draw(&sampler, config.seed, m);
        let u_ref = solve_with(config.solver, &spec, &reference, config)?;
        coupled_paths(&reference, &sizes)?
            .iter()
            .map(|path| {
                let u = solve_with(config.solver, &spec, path, config)?;
                Ok(discrete_l2_error(&u, &u_ref).powi(2))
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let (stats, failed) = reduce_levels(results, sizes.len(), config.max_failures)?;

    let levels: Vec<LevelStat> = sizes
        .iter()
        .zip(&stats)
        .map(|(&n, s)| {
            let rms = s.mean.sqrt();
            LevelStat {
                n,
                h: 1.0 / n as f64,
                rms_error: rms,
                stderr: if rms > 0.0 {
                    s.stderr / (2.0 * rms)
                } else {
                    0.0
                },
            }
        })
        .collect();
    let hs: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let rms: Vec<f64> = levels.iter().map(|l| l.rms_error).collect();
    let fit = fit_rate(&hs, &rms)?;
    let finest = *hs.last().expect("at least one level");
    Ok(ConvergenceReport {
        config: config.clone(),
        monotonicity: monotonicity(&rms),
        reference_bias_ratio: (reference_grid.h() / finest).powf(fit.slope),
        levels,
        fitted_rate: fit.slope,
        rate_stderr: fit.stderr,
        fit_residual: fit.residual,
        failed_samples: failed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs one study per solver; `Solver::Both` yields the FEM report first.
pub fn run_convergence_studies(
    config: &StudyConfig,
    threads: usize,
) -> Result<Vec<ConvergenceReport>> {
    let solvers = match config.solver {
        Solver::Both => vec![Solver::Fem, Solver::Greens],
        single => vec![single],
    };
    solvers
        .into_iter()
        .map(|solver| {
            let c = StudyConfig {
                solver,
                ..config.clone()
            };
            run_convergence_study_with(&c, threads)
        })
        .collect()
}

/// Grid at every ladder level, finest last.
pub(crate) fn ladder_grids(config: &StudyConfig) -> Result<Vec<UniformGrid>> {
    config
        .ladder
        .sizes()
        .into_iter()
        .map(UniformGrid::new)
        .collect()
}
