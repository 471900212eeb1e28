use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::FrequencyParams;
use crate::error::{invalid, Error, Result};
use crate::spectral::GridSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The four interface symbols for given `ν₁, ν₂` and `sign(y)`:
/// `m₁ = c(s - ν₂/ν₁)`, `m₂ = c(1 + s)`, `m₃ = c(1 - s)`,
/// `m₄ = c(-s - ν₁/ν₂)` with `c = i√(π/2)/(ν₁ + ν₂)`.
pub(crate) fn multipliers(nu1: Complex64, nu2: Complex64, s: f64) -> [Complex64; 4] {
    let c = I * (PI / 2.0).sqrt() / (nu1 + nu2);
    [c * (s - nu2 / nu1), c * (1.0 + s), c * (1.0 - s), c * (-s - nu1 / nu2)]
}

/// `m_j(ξ)` at `|ξ| = xi_norm` on the half-space `sign(y) = sign_y`.
pub fn interface_multiplier(
    xi_norm: f64,
    j: usize,
    sign_y: f64,
    params: &FrequencyParams,
) -> Result<Complex64> {
    if !(1..=4).contains(&j) {
        return invalid(format!("multiplier index {j} not in 1..=4"));
    }
    if sign_y != 1.0 && sign_y != -1.0 {
        return invalid(format!("sign_y must be ±1, got {sign_y}"));
    }
    let (nu1, nu2) = params.nu_pair(xi_norm);
    let pole = match j {
        1 => nu1 == Complex64::new(0.0, 0.0),
        4 => nu2 == Complex64::new(0.0, 0.0),
        _ => false,
    } || nu1 + nu2 == Complex64::new(0.0, 0.0);
    if pole {
        return Err(Error::Singularity(format!("m_{j} has a pole at |ξ| = {xi_norm}")));
    }
    Ok(multipliers(nu1, nu2, sign_y)[j - 1])
}

/// `g_±` on the `(n-1)`-dimensional frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTrace {
    pub grid: GridSpec,
    pub g_plus: Vec<Complex64>,
    pub g_minus: Vec<Complex64>,
}

/// Fourier transforms of `u(·,0)` and `∂_y u(·,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceData {
    pub trace0: Vec<Complex64>,
    pub trace1: Vec<Complex64>,
}

/// Solves the 2×2 interface system:
/// `(trace0, trace1) = √(2π)/(ν₁+ν₂) · (i(g₊ + g₋), ν₂g₊ − ν₁g₋)`.
pub fn interface_data(traces: &BoundaryTrace, params: &FrequencyParams) -> Result<InterfaceData> {
    let n = traces.grid.len();
    if traces.g_plus.len() != n || traces.g_minus.len() != n {
        return invalid("trace arrays do not match their grid");
    }
    let s = (2.0 * PI).sqrt();
    let mut trace0 = Vec::with_capacity(n);
    let mut trace1 = Vec::with_capacity(n);
    for flat in 0..n {
        let xi = xi_norm_at(&traces.grid, flat);
        let (nu1, nu2) = params.nu_pair(xi);
        let den = nu1 + nu2;
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::Singularity(format!("ν₁ + ν₂ vanishes at |ξ| = {xi}")));
        }
        let (gp, gm) = (traces.g_plus[flat], traces.g_minus[flat]);
        trace0.push(s / den * I * (gp + gm));
        trace1.push(s / den * (nu2 * gp - nu1 * gm));
    }
    Ok(InterfaceData { trace0, trace1 })
}

pub(crate) fn xi_norm_at(grid: &GridSpec, flat: usize) -> f64 {
    let idx = grid.unravel(flat);
    idx.iter()
        .enumerate()
        .map(|(a, &k)| grid.freq(a, k).powi(2))
        .sum::<f64>()
        .sqrt()
}
