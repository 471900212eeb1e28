//! Gauss-Legendre rules, adaptive panel integration and the graded-mesh
//! engine for integrands with an endpoint power singularity.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// The `n`-point Gauss-Legendre rule, computed once per `n`.
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n).or_insert_with(|| Box::leak(Box::new(compute_gauss_legendre(n))))
}

fn compute_gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Fixed Gauss-Legendre rule mapped to `[a, b]`.
pub fn gl_panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let rule = gauss_legendre(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        s += f(c + h * x) * *w;
    }
    s * h
}

/// [`gl_panel`] together with `Σ w_i |f(x_i)|`.
fn gl_panel_mass(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> (Complex64, f64) {
    let rule = gauss_legendre(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(c + h * x);
        s += v * *w;
        mass += v.norm() * w;
    }
    (s * h, mass * h.abs())
}

const PANEL_ORDER: usize = 16;
const MAX_DEPTH: usize = 48;

/// Adaptive bisection with 16-point panels. Accepts a panel when the
/// coarse and refined estimates agree to `tol · (b - a) / span`, or when
/// the disagreement has stopped shrinking at the level of rounding noise
/// (for instance in the phase of a fast oscillation).
pub fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let whole = gl_panel(f, a, b, PANEL_ORDER);
    let density = tol / (b - a);
    bisect(f, a, b, whole, density, f64::INFINITY, MAX_DEPTH)
}

/// Relative size of a stalled difference still attributed to rounding.
const NOISE: f64 = 1e-11;

fn bisect(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    whole: Complex64,
    density: f64,
    parent_err: f64,
    depth: usize,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let (left, left_mass) = gl_panel_mass(f, a, m, PANEL_ORDER);
    let (right, right_mass) = gl_panel_mass(f, m, b, PANEL_ORDER);
    let refined = left + right;
    let mass = left_mass + right_mass;
    let err = (refined - whole).norm();
    let local_tol = (density * (b - a)).max(16.0 * f64::EPSILON * mass);
    let stalled = err >= 0.25 * parent_err && err <= NOISE * mass;
    let at_resolution = b - a <= 64.0 * f64::EPSILON * a.abs().max(b.abs());
    if err <= local_tol || stalled || at_resolution {
        return Ok(refined);
    }
    if depth == 0 {
        return Err(Error::Accuracy {
            message: format!("adaptive panel [{a}, {b}] did not converge"),
            last: refined,
            previous: whole,
        });
    }
    // Each half inherits half the parent's disagreement as its reference.
    let half = 0.5 * err;
    Ok(bisect(f, a, m, left, density, half, depth - 1)? + bisect(f, m, b, right, density, half, depth - 1)?)
}

/// Tolerances and mesh parameters for [`singular_quad`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of geometric mesh levels towards the singular endpoint.
    pub max_subdivisions: usize,
    pub singularity_exponent: Option<f64>,
    pub graded_mesh_ratio: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 60,
            singularity_exponent: None,
            graded_mesh_ratio: 0.5,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return invalid("quadrature tolerances must be positive");
        }
        if self.max_subdivisions < 4 {
            return invalid("max_subdivisions must be at least 4");
        }
        if !(self.graded_mesh_ratio > 0.0 && self.graded_mesh_ratio < 1.0) {
            return invalid("graded_mesh_ratio must lie in (0, 1)");
        }
        if let Some(d) = self.singularity_exponent {
            if !(0.0..1.0).contains(&d) {
                return invalid("singularity exponent must lie in [0, 1)");
            }
        }
        Ok(())
    }
}

/// `∫₀¹ φ(ρ) ρ^{-δ} dρ` on a geometric mesh clustered at 0.
///
/// Panels `[q^{j+1}, q^j]` are integrated adaptively; the innermost panel
/// `[0, q^J]` uses the substitution `t = ρ^{1-δ}`, which removes the
/// singularity. `J` grows by two until consecutive totals agree.
pub fn singular_quad(
    phi: &dyn Fn(f64) -> Complex64,
    delta: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.validate()?;
    if !(0.0..1.0).contains(&delta) {
        return invalid(format!("singularity exponent {delta} outside [0, 1)"));
    }
    let integrand = |r: f64| phi(r) * r.powf(-delta);
    // A loose pass fixes the scale for the relative tolerance.
    let rough = graded_pass(&integrand, phi, delta, spec, f64::max(spec.abs_tol, 1e-6))?;
    let tol = spec.abs_tol.max(spec.rel_tol * rough.norm());
    graded_pass(&integrand, phi, delta, spec, tol)
}

fn graded_pass(
    integrand: &dyn Fn(f64) -> Complex64,
    phi: &dyn Fn(f64) -> Complex64,
    delta: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<Complex64> {
    let q = spec.graded_mesh_ratio;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut level = 0usize;
    let mut previous: Option<Complex64> = None;
    let mut levels = 8usize.min(spec.max_subdivisions);
    loop {
        while level < levels {
            let hi = q.powi(level as i32);
            let lo = hi * q;
            sum += adaptive(integrand, lo, hi, 0.5 * tol * (hi - lo))?;
            level += 1;
        }
        let estimate = sum + inner_panel(phi, delta, q.powi(levels as i32));
        if let Some(p) = previous {
            if (estimate - p).norm() <= 0.25 * tol {
                return Ok(estimate);
            }
        }
        if levels >= spec.max_subdivisions {
            return Err(Error::Accuracy {
                message: format!("graded mesh did not converge within {levels} levels"),
                last: estimate,
                previous: previous.unwrap_or(estimate),
            });
        }
        previous = Some(estimate);
        levels = (levels + 2).min(spec.max_subdivisions);
    }
}

/// `∫₀^r φ(ρ) ρ^{-δ} dρ` after `t = ρ^{1-δ}`.
fn inner_panel(phi: &dyn Fn(f64) -> Complex64, delta: f64, r: f64) -> Complex64 {
    let e = 1.0 - delta;
    let top = r.powf(e);
    gl_panel(&|t: f64| phi(t.powf(1.0 / e)), 0.0, top, 32) / e
}

/// Precomputed rule for `∫_a^b g(ξ) (ξ - a)^{-δ} dξ ≈ Σ w_i g(ξ_i)` with the
/// singular factor folded into the weights. Geometric panels towards `a`,
/// each split so no panel is wider than `max_width`.
#[derive(Clone, Debug)]
pub struct SingularRule {
    pub nodes: Vec<f64>,
    /// `nodes[i] - a`, kept separately because it underflows relative to `a`.
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SingularRule {
    pub fn new(a: f64, b: f64, delta: f64, max_width: f64, order: usize) -> Self {
        Self::with_levels(a, b, delta, max_width, order, 44)
    }

    /// [`Self::new`] with `levels` geometric panels before the substituted
    /// innermost one.
    pub fn with_levels(a: f64, b: f64, delta: f64, max_width: f64, order: usize, levels: i32) -> Self {
        let len = b - a;
        let rule = gauss_legendre(order);
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        for level in 0..levels {
            let hi = 0.5f64.powi(level) * len;
            let lo = 0.5 * hi;
            let pieces = ((hi - lo) / max_width).ceil().max(1.0) as usize;
            let w = (hi - lo) / pieces as f64;
            for p in 0..pieces {
                let (s, e) = (lo + p as f64 * w, lo + (p + 1) as f64 * w);
                let (c, h) = (0.5 * (s + e), 0.5 * (e - s));
                for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                    let t = c + h * x;
                    offsets.push(t);
                    weights.push(wt * h * t.powf(-delta));
                }
            }
        }
        // Innermost panel [0, r] with t = u^{1/(1-δ)}.
        let r = 0.5f64.powi(levels) * len;
        let e = 1.0 - delta;
        let top = r.powf(e);
        for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
            let u = 0.5 * top * (1.0 + x);
            offsets.push(u.powf(1.0 / e));
            weights.push(wt * 0.5 * top / e);
        }
        let nodes = offsets.iter().map(|t| a + t).collect();
        Self { nodes, offsets, weights }
    }

    pub fn integrate(&self, g: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| g(x) * w).sum()
    }

    /// Like [`Self::integrate`] with `g(node, node - a)`.
    pub fn integrate_offset(&self, g: impl Fn(f64, f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.offsets)
            .zip(&self.weights)
            .map(|((&x, &t), &w)| g(x, t) * w)
            .sum()
    }
}
