//! Positivity of `∫ f (Kf)` for the profiles `f(x, y) = w(x) e^{-y} 1_{y>0}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::multipliers::{multipliers, xi_norm_at};
use super::params::FrequencyParams;
use crate::error::{invalid, Result};
use crate::spectral::{dft, pairwise_sum, Direction, SampledField};

/// The two summands of `∫ f (Kf)` and whether both are positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MountainPassCertificate {
    pub volume_term: f64,
    pub interface_term: f64,
    pub positive: bool,
}

/// Evaluates, for `ŵ` supported in `{|ξ| > μ₂}` and `c = √(|ξ|² - μ₁²)`,
///
/// * `volume_term = ∫ |ŵ|² / (2c(1 + c)) dξ`, the closed form of
///   `∫ |𝔉f|² / (|ξ|² + η² - μ₁²) dξ dη` after the `η` integral;
/// * `interface_term = (2π)^{-1/2} ∫ m₁ |ŵ|² / (1 + |ν₁|)² dξ`, with `m₁`
///   real and positive on the support.
///
/// `params.eps` must be 0. Spectral mass of `w` inside `|ξ| ≤ μ₂` above
/// `1e-8` of the total is rejected.
pub fn mountain_pass_certificate(w_profile: &SampledField, params: &FrequencyParams) -> Result<MountainPassCertificate> {
    if params.eps != 0.0 {
        return invalid("the mountain-pass certificate is evaluated at eps = 0");
    }
    let what = dft(w_profile, Direction::Forward)?;
    let grid = &what.grid;
    let (mu1, mu2) = (params.mu1(), params.mu2());
    let mut inside = Vec::new();
    let mut total = Vec::new();
    let mut volume = Vec::new();
    let mut interface = Vec::new();
    for (flat, v) in what.values.iter().enumerate() {
        let xi = xi_norm_at(grid, flat);
        let m2 = v.norm_sqr();
        total.push(m2);
        if xi <= mu2 {
            inside.push(m2);
            continue;
        }
        let c = ((xi - mu1) * (xi + mu1)).sqrt();
        let (nu1, nu2) = params.nu_pair(xi);
        let m1 = multipliers(nu1, nu2, 1.0)[0].re;
        volume.push(m2 / (2.0 * c * (1.0 + c)));
        interface.push(m1 * m2 / (1.0 + nu1.norm()).powi(2));
    }
    let total = pairwise_sum(&total);
    if total == 0.0 {
        return invalid("the profile w vanishes");
    }
    let leak = pairwise_sum(&inside) / total;
    if leak > 1e-8 {
        return invalid(format!(
            "the transform of w must be supported in |ξ| > μ₂ = {mu2}; relative mass {leak:.3e} lies inside"
        ));
    }
    let cell = grid.dual_cell_volume();
    let volume_term = pairwise_sum(&volume) * cell;
    let interface_term = pairwise_sum(&interface) * cell / (2.0 * PI).sqrt();
    Ok(MountainPassCertificate {
        volume_term,
        interface_term,
        positive: volume_term > 0.0 && interface_term > 0.0,
    })
}
