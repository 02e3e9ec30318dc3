//! Iteration settings and the damped Picard / Newton driver shared by the
//! finite element and Green's-function solvers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::greens::{ReactionClass, ReactionTerm};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearMethod {
    /// Picard for Lipschitz reactions, Newton otherwise.
    #[default]
    Auto,
    Picard,
    /// Newton with a backtracking line search on the residual norm.
    Newton,
}

impl NonlinearMethod {
    /// The concrete method used for `reaction`.
    pub fn resolve(self, reaction: &ReactionTerm) -> NonlinearMethod {
        match self {
            NonlinearMethod::Auto => match reaction.class() {
                ReactionClass::Lipschitz { .. } => NonlinearMethod::Picard,
                ReactionClass::MonotoneBounded { .. } => NonlinearMethod::Newton,
            },
            other => other,
        }
    }
}

impl fmt::Display for NonlinearMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonlinearMethod::Auto => "auto",
            NonlinearMethod::Picard => "picard",
            NonlinearMethod::Newton => "newton",
        })
    }
}

impl FromStr for NonlinearMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(NonlinearMethod::Auto),
            "picard" => Ok(NonlinearMethod::Picard),
            "newton" => Ok(NonlinearMethod::Newton),
            other => Err(Error::Config(format!(
                "unknown method `{other}`; valid names: auto, picard, newton"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions {
    /// Converged once the residual norm is at most this.
    pub tol: f64,
    pub max_iters: usize,
    /// Picard damping; defaults to `min(1, 2 / (2 + L))`.
    pub damping: Option<f64>,
    pub method: NonlinearMethod,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 500,
            damping: None,
            method: NonlinearMethod::Auto,
        }
    }
}

impl IterationOptions {
    pub fn new(tol: f64, max_iters: usize) -> Self {
        Self {
            tol,
            max_iters,
            ..Self::default()
        }
    }
}

/// A discrete nonlinear system `F(u) = 0`.
pub(crate) trait NonlinearSystem {
    fn residual(&self, u: &[f64]) -> Vec<f64>;
    fn norm(&self, residual: &[f64]) -> f64;
    /// Undamped Picard update for the residual `r`.
    fn picard_direction(&self, r: &[f64]) -> Result<Vec<f64>>;
    /// Solution `δ` of `F'(u) δ = -r`.
    fn newton_direction(&self, u: &[f64], r: &[f64]) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone)]
pub(crate) struct Iterate {
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

fn axpy(u: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    u.iter().zip(d).map(|(u, d)| u + t * d).collect()
}

/// Runs the configured iteration from `u0`.
pub(crate) fn iterate<S: NonlinearSystem>(
    system: &S,
    u0: Vec<f64>,
    reaction: &ReactionTerm,
    options: &IterationOptions,
) -> Result<Iterate> {
    let method = options.method.resolve(reaction);
    let theta = options
        .damping
        .unwrap_or_else(|| reaction.default_damping());
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "damping must lie in (0, 1], got {theta}"
        )));
    }
    let mut u = u0;
    let mut r = system.residual(&u);
    let mut norm = system.norm(&r);
    let mut history = Vec::new();
    for iteration in 0..=options.max_iters {
        if !norm.is_finite() {
            return Err(Error::NonConvergence {
                iterations: iteration,
                residual: norm,
            });
        }
        history.push(norm);
        if norm <= options.tol {
            return Ok(Iterate {
                u,
                residual: norm,
                iterations: iteration,
                history,
            });
        }
        if iteration == options.max_iters {
            break;
        }
        match method {
            NonlinearMethod::Newton => {
                let d = system.newton_direction(&u, &r)?;
                let mut t = 1.0;
                loop {
                    let trial = axpy(&u, t, &d);
                    let tr = system.residual(&trial);
                    let tn = system.norm(&tr);
                    if tn <= (1.0 - 1e-4 * t) * norm {
                        u = trial;
                        r = tr;
                        norm = tn;
                        break;
                    }
                    t *= 0.5;
                    if t < 1e-12 {
                        return Err(Error::NonConvergence {
                            iterations: iteration,
                            residual: norm,
                        });
                    }
                }
            }
            _ => {
                let d = system.picard_direction(&r)?;
                u = axpy(&u, theta, &d);
                r = system.residual(&u);
                norm = system.norm(&r);
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iters,
        residual: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_picks_by_class() {
        assert_eq!(
            NonlinearMethod::Auto.resolve(&ReactionTerm::sin()),
            NonlinearMethod::Picard
        );
        assert_eq!(
            NonlinearMethod::Auto.resolve(&ReactionTerm::sqrt_clip()),
            NonlinearMethod::Newton
        );
        assert_eq!(
            NonlinearMethod::Picard.resolve(&ReactionTerm::sqrt_clip()),
            NonlinearMethod::Picard
        );
    }

    #[test]
    fn names_round_trip() {
        for s in ["auto", "picard", "newton"] {
            assert_eq!(s.parse::<NonlinearMethod>().unwrap().to_string(), s);
        }
    }
}
