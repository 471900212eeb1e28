//! Herglotz waves `x ↦ (2π)^{-n/2} ∫_{|ξ|=μ} 𝔉f(ξ) e^{ix·ξ} dσ_μ(ξ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{dft, interp_cubic, sphere_nodes, Direction, Domain, SampledField};

/// How `𝔉f` is evaluated on the sphere nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereSampling {
    /// Trapezoid sum of `f` at each node; the same quadrature as the grid
    /// transform, so no interpolation error.
    #[default]
    Direct,
    /// Cubic interpolation of the grid transform.
    Cubic,
}

/// Herglotz wave of `f` on the sphere of radius `mu`.
pub fn herglotz(f: &SampledField, mu: f64) -> Result<SampledField> {
    herglotz_with(f, mu, SphereSampling::Direct)
}

/// [`herglotz`] with a chosen evaluation of `𝔉f` on the sphere.
pub fn herglotz_with(f: &SampledField, mu: f64, sampling: SphereSampling) -> Result<SampledField> {
    let n = f.grid.ndim();
    if !(2..=3).contains(&n) {
        return invalid(format!("herglotz supports n = 2, 3, got {n}"));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return invalid(format!("sphere radius {mu} must be positive"));
    }
    let radius = f.grid.half_width().iter().map(|l| l * l).sum::<f64>().sqrt();
    let resolution = (mu * radius).ceil() as usize;
    let count = match n {
        2 => 2 * resolution + 32,
        _ => resolution + 16,
    };
    let nodes = sphere_nodes(mu, n, count)?;
    let norm = (2.0 * PI).powf(-(n as f64) / 2.0);
    let transform: Vec<Complex64> = match sampling {
        SphereSampling::Cubic => {
            let fhat = dft(f, Direction::Forward)?;
            nodes.iter().map(|(p, _)| interp_cubic(&fhat, &p[..n])).collect()
        }
        SphereSampling::Direct => nodes.par_iter().map(|(p, _)| direct_transform(f, &p[..n])).collect(),
    };
    let samples: Vec<([f64; 3], Complex64)> =
        nodes.iter().zip(&transform).map(|((p, w), t)| (*p, t * (*w * norm))).collect();
    let values: Vec<Complex64> = (0..f.len())
        .into_par_iter()
        .map(|flat| {
            let x = f.point(flat);
            samples
                .iter()
                .map(|(p, v)| {
                    let phase: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
                    v * Complex64::from_polar(1.0, phase)
                })
                .sum()
        })
        .collect();
    SampledField::new(f.grid.clone(), values, Domain::Physical)
}

/// `(2π)^{-n/2} h^n Σ_j f(x_j) e^{-ix_j·ξ}`, summed over the last axis
/// first so only one exponential per node and axis is needed.
fn direct_transform(f: &SampledField, xi: &[f64]) -> Complex64 {
    let grid = &f.grid;
    let n = grid.ndim();
    let phases: Vec<Vec<Complex64>> = (0..n)
        .map(|a| (0..grid.points()[a]).map(|j| Complex64::from_polar(1.0, -grid.coord(a, j) * xi[a])).collect())
        .collect();
    let mut partial = f.values.clone();
    let mut len = partial.len();
    for a in (0..n).rev() {
        let m = grid.points()[a];
        len /= m;
        partial = (0..len)
            .map(|r| partial[r * m..(r + 1) * m].iter().zip(&phases[a]).map(|(v, e)| v * e).sum())
            .collect();
    }
    partial[0] * grid.cell_volume() * (2.0 * PI).powf(-(n as f64) / 2.0)
}
