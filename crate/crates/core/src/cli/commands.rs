use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{CliConfig, Format};
use super::output::float;
use crate::experiments::Solver;
use crate::experiments::{
    default_suite, run_convergence_studies, ConvergenceReport, LevelStat, Monotonicity, Status,
    SuiteSamples, Verdict, Z_LIMIT,
};
use crate::fem::solve_nonlinear_fem_on;
use crate::greens::solve_hammerstein_with;
use crate::noise::{sample_stream, IncrementPath, IncrementSampler, UniformGrid};
use crate::{Error, Result};

/// Text to emit plus whether the command's own checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
    /// Extra lines for standard error.
    pub notes: Vec<String>,
}

fn draw_path(config: &CliConfig, n: usize) -> Result<IncrementPath> {
    let grid = UniformGrid::new(n)?;
    let sampler = IncrementSampler::new(grid, config.hurst, config.sampler)?;
    Ok(sampler.sample(&mut sample_stream(config.seed, 0)))
}

/// Lag-1 correlation of increments pooled over `samples` paths, against the
/// exact value `2^{2H-1} - 1`.
fn lag_one_check(config: &CliConfig) -> Result<Verdict> {
    let grid = UniformGrid::new(config.n.max(2))?;
    let sampler = IncrementSampler::new(grid, config.hurst, config.sampler)?;
    let (mut sxy, mut sxx, mut pairs) = (0.0, 0.0, 0usize);
    for s in 0..config.samples {
        let path = sampler.sample(&mut sample_stream(config.seed, s as u64));
        let d = path.increments();
        for w in d.windows(2) {
            sxy += w[0] * w[1];
            pairs += 1;
        }
        sxx += d.iter().map(|v| v * v).sum::<f64>();
    }
    let cells = (grid.cells() * config.samples) as f64;
    let rho_hat = (sxy / pairs as f64) / (sxx / cells);
    let rho = 2f64.powf(config.hurst.two_h() - 1.0) - 1.0;
    let se = (1.0 - rho * rho) / (pairs as f64).sqrt();
    let z = (rho_hat - rho) / se;
    Ok(Verdict {
        check: format!("lag-1 correlation H={}", config.hurst.value()),
        target: rho,
        estimate: rho_hat,
        statistic: z,
        status: if z.abs() <= Z_LIMIT {
            Status::Pass
        } else {
            Status::Fail
        },
    })
}

pub fn sample_noise(config: &CliConfig, self_check: bool) -> Result<Outcome> {
    let path = draw_path(config, config.n)?;
    let grid = path.grid();
    let h = grid.h();
    let text = match config.format {
        Format::Csv => {
            let mut s = String::from("cell_index,x_left,x_right,increment,density\n");
            for (i, d) in path.increments().iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{i},{},{},{},{}",
                    float(grid.node(i)),
                    float(grid.node(i + 1)),
                    float(*d),
                    float(d / h)
                );
            }
            s
        }
        Format::Json => {
            let cells: Vec<_> = path
                .increments()
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    json!({
                        "cell_index": i,
                        "x_left": grid.node(i),
                        "x_right": grid.node(i + 1),
                        "increment": d,
                        "density": d / h,
                    })
                })
                .collect();
            pretty(&json!({ "config": config, "cells": cells }))?
        }
    };
    let mut notes = Vec::new();
    let mut passed = true;
    if self_check {
        let v = lag_one_check(config)?;
        passed = v.passed();
        notes.push(format!(
            "self-check {}: target {} estimate {} z {} {}",
            v.check,
            float(v.target),
            float(v.estimate),
            float(v.statistic),
            v.status
        ));
    }
    Ok(Outcome {
        text,
        passed,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub config: CliConfig,
    pub x: Vec<f64>,
    pub u_fem: Option<Vec<f64>>,
    pub u_greens: Option<Vec<f64>>,
    pub residual_fem: Option<f64>,
    pub iterations_fem: Option<usize>,
    pub residual_greens: Option<f64>,
    pub iterations_greens: Option<usize>,
}

pub fn solve(config: &CliConfig, zero_noise: bool) -> Result<Outcome> {
    let grid = UniformGrid::new(config.n)?;
    let path = if zero_noise {
        IncrementPath::zeros(grid)
    } else {
        draw_path(config, config.n)?
    };
    let spec = config.study().problem()?;
    let options = config.study().iteration();
    let mut report = SolveReport {
        config: config.clone(),
        x: grid.nodes().collect(),
        u_fem: None,
        u_greens: None,
        residual_fem: None,
        iterations_fem: None,
        residual_greens: None,
        iterations_greens: None,
    };
    if matches!(config.solver, Solver::Fem | Solver::Both) {
        let sol = solve_nonlinear_fem_on(&spec, &path, grid, &options)?;
        report.residual_fem = Some(sol.residual);
        report.iterations_fem = Some(sol.iterations);
        report.u_fem = Some(sol.nodal_values());
    }
    if matches!(config.solver, Solver::Greens | Solver::Both) {
        let sol = solve_hammerstein_with(&spec, &path, &options)?;
        report.residual_greens = Some(sol.residual);
        report.iterations_greens = Some(sol.iterations);
        report.u_greens = Some(sol.solution.into_values());
    }
    let text = match config.format {
        Format::Json => pretty(&report)?,
        Format::Csv => {
            let mut s = String::new();
            if let (Some(r), Some(i)) = (report.residual_fem, report.iterations_fem) {
                let _ = writeln!(s, "# fem residual={} iterations={i}", float(r));
            }
            if let (Some(r), Some(i)) = (report.residual_greens, report.iterations_greens) {
                let _ = writeln!(s, "# greens residual={} iterations={i}", float(r));
            }
            let mut header = vec!["x"];
            if report.u_fem.is_some() {
                header.push("u_fem");
            }
            if report.u_greens.is_some() {
                header.push("u_greens");
            }
            let _ = writeln!(s, "{}", header.join(","));
            for (j, x) in report.x.iter().enumerate() {
                let mut row = vec![float(*x)];
                for col in [&report.u_fem, &report.u_greens].into_iter().flatten() {
                    row.push(float(col[j]));
                }
                let _ = writeln!(s, "{}", row.join(","));
            }
            s
        }
    };
    Ok(Outcome {
        text,
        passed: true,
        notes: Vec::new(),
    })
}

/// JSON form of one study as emitted by `converge`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub config: CliConfig,
    pub solver: Solver,
    pub levels: Vec<LevelStat>,
    pub fitted_rate: f64,
    pub rate_stderr: f64,
    pub fit_residual: f64,
    pub monotonicity: Monotonicity,
    pub reference_bias_ratio: f64,
    pub wall_time: f64,
}

impl ConvergeReport {
    fn new(config: &CliConfig, r: ConvergenceReport) -> Self {
        Self {
            config: config.clone(),
            solver: r.config.solver,
            levels: r.levels,
            fitted_rate: r.fitted_rate,
            rate_stderr: r.rate_stderr,
            fit_residual: r.fit_residual,
            monotonicity: r.monotonicity,
            reference_bias_ratio: r.reference_bias_ratio,
            wall_time: r.wall_time,
        }
    }
}

pub fn converge(config: &CliConfig) -> Result<Outcome> {
    let start = Instant::now();
    let reports: Vec<ConvergeReport> = run_convergence_studies(&config.study(), config.threads)?
        .into_iter()
        .map(|r| ConvergeReport::new(config, r))
        .collect();
    let mut notes = Vec::new();
    let mut passed = true;
    for r in &reports {
        match r.monotonicity {
            Monotonicity::Decreasing => {}
            Monotonicity::Flagged => notes.push(format!(
                "{}: error increased at the finest level (reference bias)",
                r.solver
            )),
            Monotonicity::Failed => {
                passed = false;
                notes.push(format!(
                    "{}: errors are not decreasing along the ladder",
                    r.solver
                ));
            }
        }
    }
    let text = match config.format {
        Format::Json => {
            if reports.len() == 1 {
                pretty(&reports[0])?
            } else {
                pretty(&reports)?
            }
        }
        Format::Csv => {
            let mut s = String::from("solver,n,h,rms_error,stderr\n");
            for r in &reports {
                for l in &r.levels {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.solver,
                        l.n,
                        float(l.h),
                        float(l.rms_error),
                        float(l.stderr)
                    );
                }
            }
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},fitted_rate,,{},{}",
                    r.solver,
                    float(r.fitted_rate),
                    float(r.rate_stderr)
                );
            }
            s
        }
    };
    notes.push(format!("wall time {:.3} s", start.elapsed().as_secs_f64()));
    Ok(Outcome {
        text,
        passed,
        notes,
    })
}

pub fn verify(config: &CliConfig) -> Result<Outcome> {
    let samples = SuiteSamples {
        noise_norm: config.samples,
        isometry: config.samples.saturating_mul(10),
    };
    let verdicts = default_suite(config.hurst, config.seed, samples)?;
    let passed = verdicts.iter().all(Verdict::passed);
    let text = match config.format {
        Format::Json => pretty(&json!({ "config": config, "verdicts": verdicts }))?,
        Format::Csv => {
            let mut s = String::from("check,target,estimate,z_or_rate,verdict\n");
            for v in &verdicts {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    v.check,
                    float(v.target),
                    float(v.estimate),
                    float(v.statistic),
                    v.status
                );
            }
            s
        }
    };
    Ok(Outcome {
        text,
        passed,
        notes: Vec::new(),
    })
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}
