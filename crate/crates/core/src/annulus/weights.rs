//! Multiplier values on a periodic frequency grid.
//!
//! Away from the inner circle the symbol is sampled at the node. Nodes
//! within two grid spacings of `|ξ| = a` carry the average of the symbol
//! over their frequency cell instead, which keeps the mass of the
//! integrable singularity `(|ξ|² - a²)^{-s}` that nodal sampling misses.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::spec::MultiplierSpec;
use crate::error::{invalid, Result};
use crate::spectral::{GridSpec, SingularRule};

const ORDER: usize = 12;
const SMOOTH_LEVELS: i32 = 24;

/// Multiplier of order `s` at every node of the dual grid, in flat order.
pub fn multiplier_weights(spec: &MultiplierSpec, s: Complex64, grid: &GridSpec) -> Result<Vec<Complex64>> {
    spec.validate()?;
    if grid.ndim() != spec.d {
        return invalid(format!("{}-dimensional grid for a {}-dimensional multiplier", grid.ndim(), spec.d));
    }
    let singular = s != Complex64::new(0.0, 0.0);
    let collar = 2.0 * (0..grid.ndim()).map(|i| grid.dual_spacing(i)).fold(0.0, f64::max);
    Ok((0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let idx = grid.unravel(flat);
            let xi: Vec<f64> = idx.iter().enumerate().map(|(ax, &k)| grid.freq(ax, k)).collect();
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let t = r - spec.a;
            if singular && t.abs() < collar {
                match spec.d {
                    1 => cell_average_1d(spec, s, r, grid.dual_spacing(0)),
                    _ => cell_average_2d(spec, s, [xi[0], xi[1]], [grid.dual_spacing(0), grid.dual_spacing(1)]),
                }
            } else {
                spec.weight(s, t)
            }
        })
        .collect())
}

/// `∫_0^T W(a + τ) dτ`.
fn from_edge(spec: &MultiplierSpec, s: Complex64, top: f64) -> Complex64 {
    if top <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    SingularRule::new(0.0, top, s.re, top, ORDER).integrate_offset(|_, t| spec.weight_regular(s, t))
}

fn cell_average_1d(spec: &MultiplierSpec, s: Complex64, r: f64, width: f64) -> Complex64 {
    let len = spec.b - spec.a;
    let t = r - spec.a;
    let lo = (t - 0.5 * width).clamp(0.0, len);
    let hi = (t + 0.5 * width).clamp(0.0, len);
    (from_edge(spec, s, hi) - from_edge(spec, s, lo)) / width
}

fn cell_average_2d(spec: &MultiplierSpec, s: Complex64, centre: [f64; 2], width: [f64; 2]) -> Complex64 {
    let rect = Rect {
        x0: centre[0] - 0.5 * width[0],
        x1: centre[0] + 0.5 * width[0],
        y0: centre[1] - 0.5 * width[1],
        y1: centre[1] + 0.5 * width[1],
    };
    let a = spec.a;
    let lo = (rect.min_radius() - a).max(0.0);
    let hi = (rect.max_radius() - a).min(spec.b - a);
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let mut breaks = vec![lo, hi];
    let corners = [(rect.x0, rect.y0), (rect.x0, rect.y1), (rect.x1, rect.y0), (rect.x1, rect.y1)];
    let radii = [rect.x0.abs(), rect.x1.abs(), rect.y0.abs(), rect.y1.abs()]
        .into_iter()
        .chain(corners.iter().map(|&(x, y)| x.hypot(y)));
    for c in radii {
        let t = c - a;
        if t > lo && t < hi {
            breaks.push(t);
        }
    }
    breaks.sort_by(|x, y| x.total_cmp(y));
    breaks.dedup();
    let arc = |t: f64| rect.arc_length(a + t);
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = 0.5 * (p + q);
        total += if p == 0.0 {
            SingularRule::new(0.0, mid, s.re, mid, ORDER).integrate_offset(|_, t| spec.weight_regular(s, t) * arc(t))
        } else {
            SingularRule::with_levels(p, mid, 0.0, mid - p, ORDER, SMOOTH_LEVELS)
                .integrate_offset(|_, u| spec.weight(s, p + u) * arc(p + u))
        };
        // Graded towards the upper break as well, where the arc length has
        // a square-root kink.
        total += SingularRule::with_levels(0.0, q - mid, 0.0, q - mid, ORDER, SMOOTH_LEVELS)
            .integrate_offset(|_, u| spec.weight(s, q - u) * arc(q - u));
    }
    total / (width[0] * width[1])
}

/// Axis-aligned rectangle in the frequency plane.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    fn min_radius(&self) -> f64 {
        let dx = (self.x0.max(0.0) + (-self.x1).max(0.0)).max(0.0);
        let dy = (self.y0.max(0.0) + (-self.y1).max(0.0)).max(0.0);
        dx.hypot(dy)
    }

    fn max_radius(&self) -> f64 {
        self.x0.abs().max(self.x1.abs()).hypot(self.y0.abs().max(self.y1.abs()))
    }

    /// Length of the circle of radius `rho` about the origin inside the
    /// rectangle.
    pub fn arc_length(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let two_pi = 2.0 * PI;
        let mut angles = vec![0.0, two_pi];
        for x in [self.x0, self.x1] {
            if x.abs() < rho {
                let t = (x / rho).acos();
                angles.push(t);
                angles.push(two_pi - t);
            }
        }
        for y in [self.y0, self.y1] {
            if y.abs() < rho {
                let t = (y / rho).asin();
                angles.push(t.rem_euclid(two_pi));
                angles.push((PI - t).rem_euclid(two_pi));
            }
        }
        angles.sort_by(|x, y| x.total_cmp(y));
        let mut len = 0.0;
        for w in angles.windows(2) {
            let (s, e) = (w[0], w[1]);
            if e > s {
                let m = 0.5 * (s + e);
                if self.contains(rho * m.cos(), rho * m.sin()) {
                    len += (e - s) * rho;
                }
            }
        }
        len
    }
}
