use std::f64::consts::PI;

use num_complex::Complex64;

use super::quad::gauss_legendre;
use crate::error::{invalid, Result};

/// Quadrature nodes and weights for the surface measure of the sphere of
/// radius `mu` in `ℝ^d`. Points are padded to three coordinates.
///
/// `d = 2`: `n_nodes`-point trapezoid rule on the circle.
/// `d = 3`: `n_nodes` Gauss-Legendre nodes in `cos θ` times `2 n_nodes`
/// trapezoid nodes in the azimuth.
pub fn sphere_nodes(mu: f64, d: usize, n_nodes: usize) -> Result<Vec<([f64; 3], f64)>> {
    if !(mu > 0.0 && mu.is_finite()) {
        return invalid(format!("sphere radius {mu} must be positive"));
    }
    if n_nodes < 16 {
        return invalid(format!("sphere quadrature needs at least 16 nodes, got {n_nodes}"));
    }
    match d {
        2 => {
            let w = 2.0 * PI * mu / n_nodes as f64;
            Ok((0..n_nodes)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / n_nodes as f64;
                    ([mu * t.cos(), mu * t.sin(), 0.0], w)
                })
                .collect())
        }
        3 => {
            let rule = gauss_legendre(n_nodes);
            let n_phi = 2 * n_nodes;
            let dphi = 2.0 * PI / n_phi as f64;
            let mut out = Vec::with_capacity(n_nodes * n_phi);
            for (&z, &wz) in rule.nodes.iter().zip(&rule.weights) {
                let s = (1.0 - z * z).sqrt();
                for k in 0..n_phi {
                    let phi = k as f64 * dphi;
                    out.push(([mu * s * phi.cos(), mu * s * phi.sin(), mu * z], mu * mu * wz * dphi));
                }
            }
            Ok(out)
        }
        _ => invalid(format!("sphere quadrature supports d = 2, 3, got {d}")),
    }
}

/// `∫_{𝕊^{d-1}_μ} g dσ_μ`.
pub fn sphere_quad(g: &dyn Fn(&[f64]) -> Complex64, mu: f64, d: usize, n_nodes: usize) -> Result<Complex64> {
    let nodes = sphere_nodes(mu, d, n_nodes)?;
    Ok(nodes.iter().map(|(p, w)| g(&p[..d]) * *w).sum())
}
