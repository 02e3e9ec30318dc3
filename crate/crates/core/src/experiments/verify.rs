//! Statistical and deterministic checks with PASS/FAIL verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::studies::solver_agreement_study;
use super::StudyConfig;
use crate::greens::en_second_moment;
use crate::noise::{
    ito_isometry, kernel_cell_sum, kernel_cell_sum_bound, sample_stream, HurstIndex,
    IncrementSampler, SamplerMethod, StepFunction, UniformGrid,
};
use crate::quad::GaussLegendre;
use crate::sum::NeumaierSum;
use crate::{Error, Result};

use super::rate::fit_rate;

/// Largest `|z|` accepted by the Monte Carlo checks.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// One row of the verification table. `statistic` is a z-score for Monte
/// Carlo checks, a fitted rate for sweeps and a relative error for
/// deterministic comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub target: f64,
    pub estimate: f64,
    pub statistic: f64,
    pub status: Status,
}

impl Verdict {
    fn new(
        check: impl Into<String>,
        target: f64,
        estimate: f64,
        statistic: f64,
        pass: bool,
    ) -> Self {
        Self {
            check: check.into(),
            target,
            estimate,
            statistic,
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

struct Moments {
    mean: f64,
    stderr: f64,
}

fn moments(values: impl IntoIterator<Item = f64>) -> Moments {
    let (mut s, mut q, mut m) = (NeumaierSum::new(), NeumaierSum::new(), 0usize);
    for v in values {
        s.add(v);
        q.add(v * v);
        m += 1;
    }
    let mf = m as f64;
    let mean = s.value() / mf;
    let var = ((q.value() - mf * mean * mean) / (mf - 1.0)).max(0.0);
    Moments {
        mean,
        stderr: (var / mf).sqrt(),
    }
}

fn z_score(mean: f64, target: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        (mean - target) / stderr
    } else if mean == target {
        0.0
    } else {
        f64::INFINITY
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}

/// Monte Carlo mean of `‖Ẇⁿ‖² = Σ ΔW_i² / h` against `h^{2H-2}`.
pub fn verify_noise_norm(
    n: usize,
    hurst: HurstIndex,
    samples: usize,
    seed: u64,
    method: SamplerMethod,
) -> Result<Verdict> {
    check_samples(samples)?;
    let grid = UniformGrid::new(n)?;
    let sampler = IncrementSampler::new(grid, hurst, method)?;
    let h = grid.h();
    let m = moments((0..samples).map(|s| {
        let path = sampler.sample(&mut sample_stream(seed, s as u64));
        path.increments().iter().map(|d| d * d).sum::<f64>() / h
    }));
    let target = h.powf(hurst.two_h() - 2.0);
    let z = z_score(m.mean, target, m.stderr);
    Ok(Verdict::new(
        format!("noise-norm n={n} H={}", hurst.value()),
        target,
        m.mean,
        z,
        z.abs() <= Z_LIMIT,
    ))
}

/// Monte Carlo second moment of `I(f) = Σ f_i ΔW_i` against the closed-form
/// isometry. The step function must live on a uniform grid.
pub fn verify_isometry(
    f: &StepFunction,
    hurst: HurstIndex,
    samples: usize,
    seed: u64,
) -> Result<Verdict> {
    check_samples(samples)?;
    let grid = f.uniform_support(1 << 12).ok_or_else(|| {
        Error::InvalidArgument("step function breakpoints are not on a uniform grid".into())
    })?;
    let sampler = IncrementSampler::new(grid, hurst, SamplerMethod::Cholesky)?;
    let values: Vec<f64> = (0..grid.cells())
        .map(|i| f.eval(grid.node(i + 1)))
        .collect();
    let m = moments((0..samples).map(|s| {
        let path = sampler.sample(&mut sample_stream(seed, s as u64));
        let i: f64 = path
            .increments()
            .iter()
            .zip(&values)
            .map(|(d, v)| d * v)
            .sum();
        i * i
    }));
    let target = ito_isometry(f, f, hurst);
    let z = z_score(m.mean, target, m.stderr);
    Ok(Verdict::new(
        format!(
            "isometry f={} H={}",
            values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("/"),
            hurst.value()
        ),
        target,
        m.mean,
        z,
        z.abs() <= Z_LIMIT,
    ))
}

/// `Σ_{i≠j} ∬ |x - y|^{2H-2}` by numerical integration in the difference
/// variable: cells `k` apart contribute `h^{2H} ∫ (1 - |d - k|) d^{2H-2} dd`
/// over `d ∈ [k-1, k+1]`. The singular piece next to `d = 0` is integrated
/// after substituting `d = s^{1/(2H)}`.
pub fn kernel_cell_sum_quadrature(
    grid: UniformGrid,
    hurst: HurstIndex,
    panels: usize,
) -> Result<f64> {
    if hurst.is_white() {
        return Err(Error::InvalidArgument(
            "kernel cell sum is undefined at H = 1/2".into(),
        ));
    }
    let a = hurst.two_h();
    let rule = GaussLegendre::new(8);
    let panels = panels.max(1);
    let integrate = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| {
        let w = (hi - lo) / panels as f64;
        let mut acc = NeumaierSum::new();
        for p in 0..panels {
            let x0 = lo + p as f64 * w;
            acc.add(rule.integrate(x0, x0 + w, f));
        }
        acc.value()
    };
    let n = grid.cells();
    let mut total = NeumaierSum::new();
    for k in 1..n {
        let kf = k as f64;
        // triangle weight 1 - |d - k|, written without cancellation near d = 0
        let rising = |d: f64| d - (kf - 1.0);
        let falling = |d: f64| (kf + 1.0) - d;
        let left = if k == 1 {
            integrate(0.0, 1.0, &|s: f64| {
                let d = s.powf(1.0 / a);
                rising(d) * d.powf(a - 2.0) * d / (a * s)
            })
        } else {
            integrate(kf - 1.0, kf, &|d: f64| rising(d) * d.powf(a - 2.0))
        };
        let right = integrate(kf, kf + 1.0, &|d: f64| falling(d) * d.powf(a - 2.0));
        total.add(2.0 * (n - k) as f64 * (left + right));
    }
    Ok(total.value() * grid.h().powf(a))
}

/// Compares a closed form for the kernel cell sum with
/// [`kernel_cell_sum_quadrature`] (relative tolerance `1e-6`) and with the
/// bound `h^{2H-1} / (H(1-2H))`. Skipped at `H = 1/2`.
pub fn verify_kernel_sum<F>(grid: UniformGrid, hurst: HurstIndex, closed_form: F) -> Result<Verdict>
where
    F: Fn(UniformGrid, HurstIndex) -> Result<f64>,
{
    let check = format!("kernel-sum n={} H={}", grid.cells(), hurst.value());
    if hurst.is_white() {
        return Ok(Verdict {
            check,
            target: f64::NAN,
            estimate: f64::NAN,
            statistic: f64::NAN,
            status: Status::Skipped,
        });
    }
    let target = kernel_cell_sum_quadrature(grid, hurst, 512)?;
    let estimate = closed_form(grid, hurst)?;
    let bound = kernel_cell_sum_bound(grid, hurst)?;
    let rel = if target == 0.0 {
        estimate.abs()
    } else {
        ((estimate - target) / target).abs()
    };
    Ok(Verdict::new(
        check,
        target,
        estimate,
        rel,
        rel <= 1e-6 && estimate <= bound,
    ))
}

/// Fitted decay rate of `max_x E|Eⁿ(x)|²` over the probe points, against
/// `2H + 1` with slack `0.15`.
pub fn verify_en_decay(hurst: HurstIndex, sizes: &[usize], probes: &[f64]) -> Result<Verdict> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one probe point".into(),
        ));
    }
    let mut hs = Vec::with_capacity(sizes.len());
    let mut maxima = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let grid = UniformGrid::new(n)?;
        let mut max = 0.0f64;
        for &x in probes {
            max = max.max(en_second_moment(x, grid, hurst)?);
        }
        hs.push(grid.h());
        maxima.push(max);
    }
    let fit = fit_rate(&hs, &maxima)?;
    let target = hurst.two_h() + 1.0;
    Ok(Verdict::new(
        format!("en-decay H={}", hurst.value()),
        target,
        fit.slope,
        fit.slope,
        fit.slope >= target - 0.15,
    ))
}

/// FEM and Green's solutions on shared paths must approach each other at
/// rate at least `min(H + 1/2, 1) - 0.2`.
pub fn verify_solver_agreement(config: &StudyConfig, threads: usize) -> Result<Verdict> {
    let study = solver_agreement_study(config, threads)?;
    let target = (config.hurst.value() + 0.5).min(1.0);
    Ok(Verdict::new(
        format!(
            "solver-agreement f={} H={}",
            config.reaction,
            config.hurst.value()
        ),
        target,
        study.fit.slope,
        study.fit.slope,
        study.fit.slope >= target - 0.2,
    ))
}

/// Probe points used by the default `Eⁿ` sweep: two nodes of every dyadic
/// grid and three points that are nodes of none.
pub const DEFAULT_PROBES: [f64; 5] = [0.25, 0.5, 0.3, 0.6180339887498949, 0.9];

/// Sample counts of the default suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSamples {
    pub noise_norm: usize,
    pub isometry: usize,
}

impl Default for SuiteSamples {
    fn default() -> Self {
        Self {
            noise_norm: 10_000,
            isometry: 100_000,
        }
    }
}

/// The default verification suite at one Hurst index.
pub fn default_suite(hurst: HurstIndex, seed: u64, samples: SuiteSamples) -> Result<Vec<Verdict>> {
    let mut out = vec![verify_noise_norm(
        64,
        hurst,
        samples.noise_norm,
        seed,
        SamplerMethod::Cholesky,
    )?];
    let halves = StepFunction::on_grid(UniformGrid::new(2)?, vec![1.0, -1.0])?;
    for f in [
        StepFunction::constant(1.0),
        StepFunction::indicator_to(0.5)?,
        halves,
    ] {
        out.push(verify_isometry(&f, hurst, samples.isometry, seed)?);
    }
    for n in [4, 16, 64] {
        out.push(verify_kernel_sum(
            UniformGrid::new(n)?,
            hurst,
            kernel_cell_sum,
        )?);
    }
    out.push(verify_en_decay(
        hurst,
        &[16, 32, 64, 128, 256],
        &DEFAULT_PROBES,
    )?);
    Ok(out)
}
