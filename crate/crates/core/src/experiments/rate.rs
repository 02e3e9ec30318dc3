use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Least-squares fit of `log2(error)` against `log2(h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    /// Regression standard error of the slope; zero with only two levels.
    pub stderr: f64,
    /// Root of the residual sum of squares.
    pub residual: f64,
}

/// Fitted slope and its standard error.
pub fn estimate_rate(hs: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    let fit = fit_rate(hs, errors)?;
    Ok((fit.slope, fit.stderr))
}

pub fn fit_rate(hs: &[f64], errors: &[f64]) -> Result<RateFit> {
    if hs.len() != errors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} step sizes but {} errors",
            hs.len(),
            errors.len()
        )));
    }
    if hs.len() < 2 {
        return Err(Error::InvalidArgument(
            "rate fit needs at least two levels".into(),
        ));
    }
    if let Some(bad) = hs
        .iter()
        .chain(errors)
        .find(|v| !v.is_finite() || **v <= 0.0)
    {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs positive finite data, got {bad}"
        )));
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.log2()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all step sizes are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(RateFit {
        slope,
        stderr,
        residual: ssr.sqrt(),
    })
}
