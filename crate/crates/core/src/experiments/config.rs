use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::greens::{ForcingCase, ProblemSpec, ReactionCase};
use crate::iteration::{IterationOptions, NonlinearMethod};
use crate::noise::{HurstIndex, SamplerMethod, UniformGrid};
use crate::{Error, Result};

/// Which discretisation a study runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Fem,
    Greens,
    /// Both solvers on the same paths, reported separately.
    Both,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Fem => "fem",
            Solver::Greens => "greens",
            Solver::Both => "both",
        })
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fem" => Ok(Solver::Fem),
            "greens" => Ok(Solver::Greens),
            "both" => Ok(Solver::Both),
            other => Err(Error::Config(format!(
                "unknown solver `{other}`; valid names: fem, greens, both"
            ))),
        }
    }
}

/// Geometric ladder `n0 * 2^l` for `l = 0..levels`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    pub n0: usize,
    pub levels: usize,
}

impl Ladder {
    pub fn new(n0: usize, levels: usize) -> Result<Self> {
        if n0 == 0 || levels == 0 {
            return Err(Error::Config(format!(
                "ladder needs n0 >= 1 and at least one level, got {n0}:{levels}"
            )));
        }
        let top = n0
            .checked_mul(1usize.checked_shl(levels as u32 - 1).unwrap_or(0))
            .filter(|&t| t > 0 && t <= 1 << 24);
        if top.is_none() {
            return Err(Error::Config(format!("ladder {n0}:{levels} is too large")));
        }
        Ok(Self { n0, levels })
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.levels).map(|l| self.n0 << l).collect()
    }

    pub fn finest(&self) -> usize {
        self.n0 << (self.levels - 1)
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n0, self.levels)
    }
}

impl FromStr for Ladder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("ladder `{s}` must look like n0:levels")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("ladder `{s}` must look like n0:levels")))
        };
        Ladder::new(parse(a)?, parse(b)?)
    }
}

/// Everything that determines the numbers in a study. Execution resources
/// (thread count) are deliberately not part of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub hurst: HurstIndex,
    pub reaction: ReactionCase,
    pub forcing: ForcingCase,
    pub ladder: Ladder,
    /// The reference grid is `2^extra` times finer than the finest level.
    pub extra: usize,
    pub samples: usize,
    pub seed: u64,
    pub solver: Solver,
    pub sampler: SamplerMethod,
    pub tol: f64,
    pub max_iters: usize,
    #[serde(default)]
    pub method: NonlinearMethod,
    /// Solver failures tolerated before the study aborts.
    pub max_failures: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            hurst: HurstIndex::new(0.25).expect("valid"),
            reaction: ReactionCase::Sin,
            forcing: ForcingCase::One,
            ladder: Ladder { n0: 16, levels: 4 },
            extra: 2,
            samples: 200,
            seed: 20240601,
            solver: Solver::Fem,
            sampler: SamplerMethod::Cholesky,
            tol: 1e-10,
            max_iters: 500,
            method: NonlinearMethod::Auto,
            max_failures: 0,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        Ladder::new(self.ladder.n0, self.ladder.levels)?;
        if self.ladder.n0 < 2 {
            return Err(Error::Config("coarsest level needs n0 >= 2".into()));
        }
        if self.extra == 0 || self.extra > 8 {
            return Err(Error::Config(format!(
                "extra refinement must be between 1 and 8, got {}",
                self.extra
            )));
        }
        if self.samples < 2 {
            return Err(Error::Config(format!(
                "need at least 2 samples, got {}",
                self.samples
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        self.reaction.build()?;
        Ok(())
    }

    pub fn reference_grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(self.ladder.finest() << self.extra)
    }

    pub fn iteration(&self) -> IterationOptions {
        IterationOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            damping: None,
            method: self.method,
        }
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        ProblemSpec::from_cases(self.hurst, self.forcing, self.reaction)
    }
}
