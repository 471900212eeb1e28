//! Least-squares power laws for sweeps and envelopes.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Slope, intercept and slope standard error of a log-log line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<ScalingFit> {
    if x.len() != y.len() {
        return invalid(format!("length mismatch: {} abscissae, {} values", x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return invalid("a fit needs at least two points");
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return invalid("fit data must be finite");
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("abscissae are all equal");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if n > 2 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(ScalingFit { slope, intercept, stderr })
}

fn logs(v: &[f64], what: &str, shift: f64) -> Result<Vec<f64>> {
    v.iter()
        .map(|&x| {
            if x > 0.0 && x.is_finite() {
                Ok((shift + x).ln())
            } else {
                invalid(format!("{what} must be positive and finite, got {x}"))
            }
        })
        .collect()
}

/// Slope of `log(norms)` against `log(1 + λ)`.
pub fn fit_scaling_exponent(lambdas: &[f64], norms: &[f64]) -> Result<ScalingFit> {
    if lambdas.len() != norms.len() {
        return invalid(format!("length mismatch: {} λ values, {} norms", lambdas.len(), norms.len()));
    }
    linear_fit(&logs(lambdas, "λ", 1.0)?, &logs(norms, "norms", 0.0)?)
}

/// Slope of `log y` against `log x`.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<ScalingFit> {
    if x.len() != y.len() {
        return invalid(format!("length mismatch: {} abscissae, {} values", x.len(), y.len()));
    }
    linear_fit(&logs(x, "abscissae", 0.0)?, &logs(y, "values", 0.0)?)
}

/// Indices of strict local maxima of `v`, interior points only.
pub fn local_maxima(v: &[f64]) -> Vec<usize> {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).collect()
}
