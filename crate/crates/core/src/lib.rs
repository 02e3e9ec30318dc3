//! Finite element and Green's-function solvers for the stochastic boundary
//! value problem
//!
//! ```text
//! -u''(x) + f(x, u(x)) = g(x) + dW/dx,   x in (0, 1),   u(0) = u(1) = 0,
//! ```
//!
//! where `W` is a fractional Brownian motion with Hurst index `H <= 1/2`.
//!
//! The crate is organised in four layers:
//!
//! * [`noise`]: exact increment covariance, samplers, the piecewise-constant
//!   noise density and the closed-form Itô isometry for step functions.
//! * [`greens`]: the Green's function `G(x, y) = min(x, y) - xy`, the integral
//!   operator `K`, the stochastic convolution and a Picard solver for the
//!   Hammerstein (mild) form `u + K f(u) = K g + K dW`.
//! * [`fem`]: piecewise-linear Galerkin assembly and solvers, the Ritz
//!   projection and exact discrete norms.
//! * [`experiments`]: Monte Carlo convergence studies on coupled paths, rate
//!   regression and the statistical verification suite.
//!
//! The [`cli`] module backs the `fbm-bvp` binary; the runnable programs under
//! `examples/` show each capability in isolation.

pub mod cli;
mod error;
pub mod experiments;
pub mod fem;
pub mod greens;
pub mod iteration;
pub mod noise;
pub mod quad;
pub mod sum;

pub use error::{Error, Result};

pub use fem::{FemSolution, TridiagonalMatrix};
pub use greens::{
    Forcing, ForcingCase, GridFunction, ProblemSpec, ReactionCase, ReactionClass, ReactionTerm,
    Rule,
};
pub use noise::{
    HurstIndex, IncrementPath, IncrementSampler, SamplerMethod, StepFunction, StepNoise,
    UniformGrid,
};
