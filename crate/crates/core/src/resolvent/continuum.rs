//! Quadrature over lateral frequencies `ξ ∈ ℝ^{n-1}` for the non-periodic
//! evaluation mode.
//!
//! The integrands depend on `ξ` through `ν_j(ξ)`, which has a square-root
//! branch point on the circles `|ξ| = μ_j`. Inside a collar around each
//! circle the radial variable is replaced by `ρ = √|ξ² - μ_j²|`; in `ρ`
//! both `ν_j` and the Jacobian `dξ = ρ/ξ dρ` are smooth, and `1/ν_j · ρ/ξ`
//! is bounded. Elsewhere Gauss-Legendre panels are sized from the local
//! phase speed of `e^{ix·ξ}` and `e^{iν|y-z|}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::FrequencyParams;
use crate::spectral::gauss_legendre;

const PANEL_ORDER: usize = 24;
const PHASE_PER_PANEL: f64 = 16.0;
const SAMPLES: usize = 33;

/// One lateral frequency and the data the column kernels need there.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Lateral {
    pub xi: f64,
    pub nu1: Complex64,
    pub nu2: Complex64,
    /// `|ξ| > μ_j`, decided by construction rather than by comparing
    /// floating-point radii.
    pub above: [bool; 2],
}

impl Lateral {
    pub fn at(xi: f64, params: &FrequencyParams) -> Self {
        let (nu1, nu2) = params.nu_pair(xi);
        Self { xi, nu1, nu2, above: [xi > params.mu1(), xi > params.mu2()] }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LateralNode {
    pub point: [f64; 2],
    pub weight: f64,
    pub lateral: Lateral,
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Plain,
    /// Collar around `μ_j` on the inside (`ξ < μ_j`) or outside.
    Collar { j: usize, outside: bool },
}

fn map(piece: Piece, t: f64, params: &FrequencyParams) -> (Lateral, f64) {
    match piece {
        Piece::Plain => (Lateral::at(t, params), 1.0),
        Piece::Collar { j, outside } => {
            let mu = params.mu(j);
            let xi = if outside { mu.hypot(t) } else { ((mu - t) * (mu + t)).max(0.0).sqrt() };
            let own = if params.eps > 0.0 {
                let r2 = if outside { -t * t } else { t * t };
                Complex64::new(r2, params.eps).sqrt()
            } else if outside {
                Complex64::new(0.0, t)
            } else {
                Complex64::new(t, 0.0)
            };
            let mut lat = Lateral::at(xi, params);
            let other = 1 - (j - 1);
            let same = params.mu1() == params.mu2();
            for k in [j - 1, other] {
                if k == j - 1 || same {
                    if k == 0 {
                        lat.nu1 = own;
                    } else {
                        lat.nu2 = own;
                    }
                    lat.above[k] = outside;
                }
            }
            (lat, t / xi.max(f64::MIN_POSITIVE))
        }
    }
}

/// Radial nodes `(r, weight, lateral)` on `[0, cutoff]` for
/// `∫_0^cutoff g(r) dr`. `x_extent` bounds `|x|` on the output grid and
/// `y_span` bounds `|y - z|`.
pub(crate) fn radial_nodes(
    params: &FrequencyParams,
    cutoff: f64,
    x_extent: f64,
    y_span: f64,
) -> Vec<(f64, f64, Lateral)> {
    let (mu1, mu2) = (params.mu1(), params.mu2());
    let gap = mu2 - mu1;
    let collar = |mu: f64| {
        if gap > 0.0 {
            (0.1 * mu).min(0.45 * gap).min(0.45 * mu1)
        } else {
            0.1 * mu
        }
    };
    let mut circles = vec![(1usize, mu1, collar(mu1))];
    if gap > 0.0 {
        circles.push((2, mu2, collar(mu2)));
    }
    let mut cutoff = cutoff;
    for &(_, mu, c) in &circles {
        if cutoff > mu - c && cutoff < mu + c {
            cutoff = mu + c;
        }
    }

    // (piece, t0, t1) in the piece's own variable.
    let mut pieces: Vec<(Piece, f64, f64)> = Vec::new();
    let mut plain_breaks = vec![0.0, cutoff];
    if mu1 + mu2 < cutoff {
        plain_breaks.push(mu1 + mu2);
    }
    for &(j, mu, c) in &circles {
        if mu - c >= cutoff {
            continue;
        }
        plain_breaks.push(mu - c);
        plain_breaks.push(mu + c);
        let inner = ((mu - (mu - c)) * (mu + (mu - c))).sqrt();
        let outer = ((mu + c - mu) * (mu + c + mu)).sqrt();
        pieces.push((Piece::Collar { j, outside: false }, 0.0, inner));
        pieces.push((Piece::Collar { j, outside: true }, 0.0, outer));
    }
    plain_breaks.sort_by(|a, b| a.total_cmp(b));
    plain_breaks.dedup();
    for w in plain_breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let in_collar = circles.iter().any(|&(_, mu, c)| (mid - mu).abs() < c);
        if b > a && !in_collar && b <= cutoff {
            pieces.push((Piece::Plain, a, b));
        }
    }

    let rule = gauss_legendre(PANEL_ORDER);
    let mut nodes = Vec::new();
    for (piece, t0, t1) in pieces {
        let mut cuts = vec![t1];
        if let (Piece::Collar { .. }, true) = (piece, params.eps > 0.0) {
            let floor = params.eps.sqrt() / 8.0;
            let mut t = t1 / 2.0;
            while t > floor {
                cuts.push(t);
                t /= 2.0;
            }
        }
        cuts.push(t0);
        cuts.reverse();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let omega = phase_speed(piece, a, b, params, x_extent, y_span);
            let panels = ((b - a) * omega / PHASE_PER_PANEL).ceil().max(1.0) as usize;
            let width = (b - a) / panels as f64;
            let mut stack: Vec<(f64, f64)> = (0..panels).rev().map(|p| (a + p as f64 * width, a + (p + 1) as f64 * width)).collect();
            while let Some((lo, hi)) = stack.pop() {
                // Plain panels stay no wider than their distance to a branch circle.
                if let Piece::Plain = piece {
                    let dist = circles.iter().map(|&(_, mu, _)| (lo - mu).abs().min((hi - mu).abs())).fold(f64::INFINITY, f64::min);
                    if hi - lo > dist {
                        let mid = 0.5 * (lo + hi);
                        stack.push((mid, hi));
                        stack.push((lo, mid));
                        continue;
                    }
                }
                let width = hi - lo;
                for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                    let t = lo + 0.5 * width * (1.0 + x);
                    let (lat, jac) = map(piece, t, params);
                    nodes.push((lat.xi, 0.5 * width * wt * jac, lat));
                }
            }
        }
    }
    nodes
}

fn phase_speed(piece: Piece, a: f64, b: f64, params: &FrequencyParams, x_extent: f64, y_span: f64) -> f64 {
    let sample = |t: f64| {
        let (lat, _) = map(piece, t, params);
        (lat.xi, lat.nu1, lat.nu2)
    };
    let dt = (b - a) / (SAMPLES - 1) as f64;
    let mut prev = sample(a);
    let mut omega: f64 = 0.0;
    for i in 1..SAMPLES {
        let cur = sample(a + i as f64 * dt);
        let dxi = (cur.0 - prev.0).abs() / dt;
        let dnu = ((cur.1 - prev.1).norm()).max((cur.2 - prev.2).norm()) / dt;
        omega = omega.max(x_extent * dxi + y_span * dnu);
        prev = cur;
    }
    // Finite differences underestimate near the branch points of ν.
    let edge = |t: f64| {
        let (lat, _) = map(piece, t, params);
        let g = |nu: Complex64| if nu.norm() > 0.0 { lat.xi / nu.norm() } else { 0.0 };
        g(lat.nu1).max(g(lat.nu2))
    };
    if let Piece::Plain = piece {
        omega = omega.max(y_span * edge(a).max(edge(b)));
    }
    1.2 * omega
}

/// Nodes for `∫_{ℝ^{n-1}} g(ξ) dξ` with `n - 1 ∈ {1, 2}`.
pub(crate) fn lateral_nodes(
    params: &FrequencyParams,
    dims: usize,
    cutoff: f64,
    x_extent: f64,
    y_span: f64,
) -> Vec<LateralNode> {
    let radial = radial_nodes(params, cutoff, x_extent, y_span);
    let mut out = Vec::new();
    for (r, w, lat) in radial {
        if dims == 1 {
            out.push(LateralNode { point: [r, 0.0], weight: w, lateral: lat });
            out.push(LateralNode { point: [-r, 0.0], weight: w, lateral: lat });
        } else {
            let n_theta = (4.0 * x_extent * r).ceil() as usize + 16;
            let dth = 2.0 * PI / n_theta as f64;
            for k in 0..n_theta {
                let th = k as f64 * dth;
                out.push(LateralNode {
                    point: [r * th.cos(), r * th.sin()],
                    weight: w * r * dth,
                    lateral: lat,
                });
            }
        }
    }
    out
}
