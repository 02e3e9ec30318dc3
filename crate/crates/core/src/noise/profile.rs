//! Covariances of fBm integrals of piecewise-linear integrands supported on
//! one unit cell.
//!
//! A [`CellProfile`] is a function on `[0, 1]` that is linear on each of a
//! few pieces. Integration by parts turns `∫ φ dW` into `μ(W)` for a signed
//! measure `μ` of total mass zero (point masses at piece ends, a constant
//! density `-φ'` on each piece), and for such measures
//!
//! ```text
//! E[μ(W) ν(W)] = -1/2 ∬ |s - t|^{2H} dμ(s) dν(t),
//! ```
//!
//! which is evaluated with power-law antiderivatives. That route cancels
//! badly once the cells are far apart, so beyond one cell of separation the
//! off-diagonal part of the isometry,
//! `-H(1-2H) ∬ φ(u) ψ(v) |u - v|^{2H-2}`, is integrated instead; its
//! integrand is smooth there.
//!
//! All quantities use unit cell width; a cell of width `h` scales the
//! covariance by `h^{2H}` times the squared amplitude scale.

use super::HurstIndex;
use crate::quad::GaussLegendre;
use crate::sum::NeumaierSum;
use crate::{Error, Result};

/// Linear on `[start, end]`, from `left` to `right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPiece {
    pub start: f64,
    pub end: f64,
    pub left: f64,
    pub right: f64,
}

impl LinearPiece {
    fn slope(&self) -> f64 {
        (self.right - self.left) / (self.end - self.start)
    }

    fn at(&self, u: f64) -> f64 {
        self.left + self.slope() * (u - self.start)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellProfile {
    pieces: Vec<LinearPiece>,
}

#[derive(Debug, Clone, Copy)]
enum Component {
    Atom { at: f64, weight: f64 },
    Density { start: f64, end: f64, value: f64 },
}

impl CellProfile {
    /// Pieces must tile `[0, 1]` left to right.
    pub fn new(pieces: Vec<LinearPiece>) -> Result<Self> {
        let tiles = !pieces.is_empty()
            && pieces[0].start == 0.0
            && pieces.last().unwrap().end == 1.0
            && pieces.iter().all(|p| p.start < p.end)
            && pieces.windows(2).all(|w| w[0].end == w[1].start);
        if !tiles {
            return Err(Error::InvalidArgument(
                "cell profile pieces must tile [0, 1]".into(),
            ));
        }
        Ok(Self { pieces })
    }

    /// `u - 1/2`: the zero-mean sawtooth of unit slope.
    pub fn sawtooth() -> Self {
        Self {
            pieces: vec![LinearPiece {
                start: 0.0,
                end: 1.0,
                left: -0.5,
                right: 0.5,
            }],
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            pieces: vec![LinearPiece {
                start: 0.0,
                end: 1.0,
                left: value,
                right: value,
            }],
        }
    }

    pub fn pieces(&self) -> &[LinearPiece] {
        &self.pieces
    }

    pub fn eval(&self, u: f64) -> f64 {
        let idx = self.pieces.partition_point(|p| p.end < u);
        self.pieces[idx.min(self.pieces.len() - 1)].at(u)
    }

    fn measure(&self) -> Vec<Component> {
        let mut out = Vec::with_capacity(2 * self.pieces.len() + 1);
        out.push(Component::Atom {
            at: 0.0,
            weight: -self.pieces[0].left,
        });
        for (idx, p) in self.pieces.iter().enumerate() {
            let slope = p.slope();
            if slope != 0.0 {
                out.push(Component::Density {
                    start: p.start,
                    end: p.end,
                    value: -slope,
                });
            }
            let next_left = self.pieces.get(idx + 1).map_or(0.0, |q| q.left);
            let jump = p.right - next_left;
            if jump != 0.0 {
                out.push(Component::Atom {
                    at: p.end,
                    weight: jump,
                });
            }
        }
        out
    }
}

/// `E[I(p) I(q(· - shift))]` for unit-width cells `shift` cells apart.
pub fn profile_covariance(p: &CellProfile, q: &CellProfile, shift: i64, hurst: HurstIndex) -> f64 {
    if shift.abs() <= 1 {
        profile_covariance_variogram(p, q, shift, hurst)
    } else {
        profile_covariance_far_field(p, q, shift, hurst)
    }
}

/// Variogram route; exact for any shift but loses digits as `|shift|` grows.
pub fn profile_covariance_variogram(
    p: &CellProfile,
    q: &CellProfile,
    shift: i64,
    hurst: HurstIndex,
) -> f64 {
    let a = hurst.two_h();
    let s = shift as f64;
    let point = |u: f64| pow_abs(u, a);
    let once = |u: f64| u.signum() * pow_abs(u, a + 1.0) / (a + 1.0);
    let twice = |u: f64| pow_abs(u, a + 2.0) / ((a + 1.0) * (a + 2.0));

    let mut acc = NeumaierSum::new();
    let mu = p.measure();
    let nu = q.measure();
    for x in &mu {
        for y in &nu {
            let term = match (*x, *y) {
                (
                    Component::Atom { at: p0, weight: w0 },
                    Component::Atom { at: p1, weight: w1 },
                ) => w0 * w1 * point(p1 + s - p0),
                (Component::Atom { at, weight }, Component::Density { start, end, value }) => {
                    weight * value * (once(end + s - at) - once(start + s - at))
                }
                (Component::Density { start, end, value }, Component::Atom { at, weight }) => {
                    weight * value * (once(end - (at + s)) - once(start - (at + s)))
                }
                (
                    Component::Density {
                        start: a0,
                        end: b0,
                        value: c0,
                    },
                    Component::Density {
                        start: a1,
                        end: b1,
                        value: c1,
                    },
                ) => {
                    let (c, d) = (a1 + s, b1 + s);
                    c0 * c1 * (twice(d - a0) - twice(c - a0) - twice(d - b0) + twice(c - b0))
                }
            };
            acc.add(term);
        }
    }
    -0.5 * acc.value()
}

/// Off-diagonal isometry term by Gauss–Legendre quadrature; requires the
/// cells to be separated (`|shift| >= 2`).
pub fn profile_covariance_far_field(
    p: &CellProfile,
    q: &CellProfile,
    shift: i64,
    hurst: HurstIndex,
) -> f64 {
    assert!(shift.abs() >= 2, "far-field route needs separated cells");
    if hurst.is_white() {
        return 0.0;
    }
    let rule = GaussLegendre::new(16);
    let exponent = hurst.two_h() - 2.0;
    let s = shift as f64;
    let mut acc = NeumaierSum::new();
    for pp in &p.pieces {
        for qp in &q.pieces {
            for (u, wu) in rule.on(pp.start, pp.end) {
                let fu = pp.at(u) * wu;
                for (v, wv) in rule.on(qp.start, qp.end) {
                    acc.add(fu * qp.at(v) * wv * (v + s - u).abs().powf(exponent));
                }
            }
        }
    }
    -hurst.kernel_coefficient() * acc.value()
}

fn pow_abs(u: f64, a: f64) -> f64 {
    let m = u.abs();
    if m == 0.0 {
        0.0
    } else {
        m.powf(a)
    }
}
