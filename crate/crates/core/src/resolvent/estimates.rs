//! Grid checks of the symbol bounds for `ν_j` and `m₂, m₃`.

use serde::{Deserialize, Serialize};

use super::multipliers::{multipliers, xi_norm_at};
use super::params::{nu, nu_gradient_norm, FrequencyParams};
use crate::error::{invalid, Result};
use crate::spectral::GridSpec;

/// Constants in `1 + |ξ| ≤ C |ν_j| √(1 + |∇ν_j|²) ≤ C' (1 + |ξ|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuSandwich {
    pub lower: f64,
    pub upper: f64,
}

/// Smallest constants for the two-sided bound over the frequency nodes of
/// `grid` (at `ε = 0`), skipping nodes within `1e-12` of `|ξ| = μ_j`.
pub fn nu_sandwich(grid: &GridSpec, j: usize, params: &FrequencyParams) -> Result<NuSandwich> {
    if !(1..=2).contains(&j) {
        return invalid(format!("ν index must be 1 or 2, got {j}"));
    }
    let mu = params.mu(j);
    let mut lower: f64 = 0.0;
    let mut ratio_max: f64 = 0.0;
    for flat in 0..grid.len() {
        let xi = xi_norm_at(grid, flat);
        if (xi - mu).abs() < 1e-12 {
            continue;
        }
        let x = nu(xi, j, &params.with_eps(0.0)?).norm() * (1.0 + nu_gradient_norm(xi, j, params).powi(2)).sqrt();
        lower = lower.max((1.0 + xi) / x);
        ratio_max = ratio_max.max(x / (1.0 + xi));
    }
    Ok(NuSandwich { lower, upper: lower * ratio_max })
}

/// `max |m₂(ξ)|(1 + |ξ|)` (with `sign y = +1`) and `max |m₃(ξ)|(1 + |ξ|)`
/// (with `sign y = -1`) over the frequency nodes of `grid`.
pub fn multiplier_decay(grid: &GridSpec, params: &FrequencyParams) -> [f64; 2] {
    let mut out = [0.0f64; 2];
    for flat in 0..grid.len() {
        let xi = xi_norm_at(grid, flat);
        let (nu1, nu2) = params.nu_pair(xi);
        let m2 = multipliers(nu1, nu2, 1.0)[1];
        let m3 = multipliers(nu1, nu2, -1.0)[2];
        out[0] = out[0].max(m2.norm() * (1.0 + xi));
        out[1] = out[1].max(m3.norm() * (1.0 + xi));
    }
    out
}
