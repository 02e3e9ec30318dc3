use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::noise::HurstIndex;
use crate::{Error, Result};

/// Poincaré constant used in the admissibility condition `L < γ`.
pub const POINCARE_GAMMA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionClass {
    /// `|f(x,r) - f(x,s)| <= L |r - s|`.
    Lipschitz { constant: f64 },
    /// Sum of a nondecreasing bounded part and a part satisfying the
    /// one-sided condition `(f(r) - f(s))(r - s) >= -L (r - s)^2`, with
    /// `|f(r) - f(s)| <= growth * (1 + |r - s|)`.
    MonotoneBounded {
        monotone: f64,
        bound: f64,
        growth: f64,
    },
}

impl ReactionClass {
    /// The constant `L` of the monotone-type condition.
    pub fn monotone_constant(&self) -> f64 {
        match *self {
            ReactionClass::Lipschitz { constant } => constant,
            ReactionClass::MonotoneBounded { monotone, .. } => monotone,
        }
    }

    fn growth(&self) -> f64 {
        match *self {
            ReactionClass::Lipschitz { constant } => constant,
            ReactionClass::MonotoneBounded { growth, .. } => growth,
        }
    }
}

type ReactionFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Reaction term `f(x, r)` with `f(x, 0) = 0`.
#[derive(Clone)]
pub struct ReactionTerm {
    name: String,
    class: ReactionClass,
    eval: Arc<ReactionFn>,
}

impl fmt::Debug for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReactionTerm")
            .field("name", &self.name)
            .field("class", &self.class)
            .finish()
    }
}

impl ReactionTerm {
    /// Validates `L < 2` and spot-checks the class invariants on random
    /// `(x, r, s)` triples.
    pub fn new<F>(name: impl Into<String>, class: ReactionClass, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let term = Self {
            name: name.into(),
            class,
            eval: Arc::new(f),
        };
        term.check()?;
        Ok(term)
    }

    fn inadmissible(&self, reason: String) -> Error {
        Error::Inadmissible {
            name: self.name.clone(),
            reason,
        }
    }

    fn check(&self) -> Result<()> {
        let l = self.class.monotone_constant();
        if !(0.0..POINCARE_GAMMA).contains(&l) {
            return Err(self.inadmissible(format!(
                "constant L = {l} must satisfy 0 <= L < {POINCARE_GAMMA}"
            )));
        }
        let beta = self.class.growth();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        for _ in 0..512 {
            let x: f64 = rng.random();
            let scale = if rng.random::<bool>() { 10.0 } else { 0.01 };
            let r = scale * (2.0 * rng.random::<f64>() - 1.0);
            let s = scale * (2.0 * rng.random::<f64>() - 1.0);
            let f0 = self.eval(x, 0.0);
            if f0.abs() > 1e-14 {
                return Err(self.inadmissible(format!("f({x}, 0) = {f0} is not zero")));
            }
            let df = self.eval(x, r) - self.eval(x, s);
            let dr = r - s;
            let slack = 1e-12 * (1.0 + df.abs() + dr.abs());
            if df * dr < -l * dr * dr - slack {
                return Err(self.inadmissible(format!(
                    "monotone-type condition fails at x = {x}, r = {r}, s = {s}"
                )));
            }
            if df.abs() > beta * (1.0 + dr.abs()) + slack {
                return Err(self.inadmissible(format!(
                    "linear growth condition fails at x = {x}, r = {r}, s = {s}"
                )));
            }
            if let ReactionClass::Lipschitz { constant } = self.class {
                if df.abs() > constant * dr.abs() + slack {
                    return Err(self.inadmissible(format!(
                        "Lipschitz bound {constant} fails at x = {x}, r = {r}, s = {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> ReactionClass {
        self.class
    }

    #[inline]
    pub fn eval(&self, x: f64, r: f64) -> f64 {
        (self.eval)(x, r)
    }

    /// Central-difference slope `∂f/∂r`, used for Newton Jacobians.
    pub fn slope(&self, x: f64, r: f64) -> f64 {
        let d = 1e-7 * (1.0 + r.abs());
        (self.eval(x, r + d) - self.eval(x, r - d)) / (2.0 * d)
    }

    /// `true` when `f` vanishes identically (the linear problem).
    pub fn is_zero(&self) -> bool {
        self.name == "zero"
    }

    /// Default Picard damping `θ = 2 / (2 + L)`.
    pub fn default_damping(&self) -> f64 {
        (POINCARE_GAMMA / (POINCARE_GAMMA + self.class.monotone_constant())).min(1.0)
    }

    pub fn zero() -> Self {
        Self {
            name: "zero".into(),
            class: ReactionClass::Lipschitz { constant: 0.0 },
            eval: Arc::new(|_, _| 0.0),
        }
    }

    /// `f(x, r) = λ r`; admissible for `|λ| < 2`.
    pub fn linear(lambda: f64) -> Result<Self> {
        Self::new(
            format!("linear:{lambda}"),
            ReactionClass::Lipschitz {
                constant: lambda.abs(),
            },
            move |_, r| lambda * r,
        )
    }

    /// `f(x, r) = sin r`, Lipschitz with constant 1.
    pub fn sin() -> Self {
        Self::new(
            "sin",
            ReactionClass::Lipschitz { constant: 1.0 },
            |_, r: f64| r.sin(),
        )
        .expect("sin is admissible")
    }

    /// `f(x, r) = sign(r) min(sqrt|r|, 1)`: bounded, nondecreasing, not
    /// Lipschitz at the origin.
    pub fn sqrt_clip() -> Self {
        Self::new(
            "sqrt-clip",
            ReactionClass::MonotoneBounded {
                monotone: 0.0,
                bound: 1.0,
                growth: 2.0,
            },
            |_, r: f64| r.signum() * r.abs().sqrt().min(1.0),
        )
        .expect("sqrt-clip is admissible")
    }
}

/// Named reaction terms available from configuration files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ReactionCase {
    Zero,
    Linear(f64),
    Sin,
    SqrtClip,
}

impl ReactionCase {
    pub const NAMES: &'static str = "zero, linear:<lambda>, sin, sqrt-clip";

    pub fn build(self) -> Result<ReactionTerm> {
        match self {
            ReactionCase::Zero => Ok(ReactionTerm::zero()),
            ReactionCase::Linear(lambda) => ReactionTerm::linear(lambda),
            ReactionCase::Sin => Ok(ReactionTerm::sin()),
            ReactionCase::SqrtClip => Ok(ReactionTerm::sqrt_clip()),
        }
    }
}

impl fmt::Display for ReactionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReactionCase::Zero => f.write_str("zero"),
            ReactionCase::Linear(l) => write!(f, "linear:{l}"),
            ReactionCase::Sin => f.write_str("sin"),
            ReactionCase::SqrtClip => f.write_str("sqrt-clip"),
        }
    }
}

impl FromStr for ReactionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "zero" => return Ok(ReactionCase::Zero),
            "sin" => return Ok(ReactionCase::Sin),
            "sqrt-clip" => return Ok(ReactionCase::SqrtClip),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("linear:") {
            let lambda: f64 = rest
                .parse()
                .map_err(|_| Error::Config(format!("bad coefficient in `{s}`")))?;
            return Ok(ReactionCase::Linear(lambda));
        }
        Err(Error::Config(format!(
            "unknown reaction `{s}`; valid names: {}",
            Self::NAMES
        )))
    }
}

impl TryFrom<String> for ReactionCase {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ReactionCase> for String {
    fn from(c: ReactionCase) -> String {
        c.to_string()
    }
}

type ForcingFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Deterministic forcing `g`.
#[derive(Clone)]
pub struct Forcing {
    name: String,
    eval: Arc<ForcingFn>,
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forcing").field("name", &self.name).finish()
    }
}

impl Forcing {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| 0.0)
    }

    pub fn one() -> Self {
        Self::new("one", |_| 1.0)
    }

    pub fn sin_pi() -> Self {
        Self::new("sinpi", |x: f64| (std::f64::consts::PI * x).sin())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ForcingCase {
    Zero,
    One,
    SinPi,
}

impl ForcingCase {
    pub const NAMES: &'static str = "zero, one, sinpi";

    pub fn build(self) -> Forcing {
        match self {
            ForcingCase::Zero => Forcing::zero(),
            ForcingCase::One => Forcing::one(),
            ForcingCase::SinPi => Forcing::sin_pi(),
        }
    }
}

impl fmt::Display for ForcingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForcingCase::Zero => "zero",
            ForcingCase::One => "one",
            ForcingCase::SinPi => "sinpi",
        })
    }
}

impl FromStr for ForcingCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" => Ok(ForcingCase::Zero),
            "one" => Ok(ForcingCase::One),
            "sinpi" => Ok(ForcingCase::SinPi),
            other => Err(Error::Config(format!(
                "unknown forcing `{other}`; valid names: {}",
                Self::NAMES
            ))),
        }
    }
}

impl TryFrom<String> for ForcingCase {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ForcingCase> for String {
    fn from(c: ForcingCase) -> String {
        c.to_string()
    }
}

/// The continuum problem `-u'' + f(x, u) = g + dW/dx` on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub hurst: HurstIndex,
    pub forcing: Forcing,
    pub reaction: ReactionTerm,
}

impl ProblemSpec {
    pub fn new(hurst: HurstIndex, forcing: Forcing, reaction: ReactionTerm) -> Self {
        Self {
            hurst,
            forcing,
            reaction,
        }
    }

    pub fn from_cases(
        hurst: HurstIndex,
        forcing: ForcingCase,
        reaction: ReactionCase,
    ) -> Result<Self> {
        Ok(Self::new(hurst, forcing.build(), reaction.build()?))
    }
}
