//! The operators `T_{λ,α}`, `𝒯_{λ,s}` and `S_λ`, `S_λ*`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::spec::{check_order, MultiplierSpec};
use super::weights::multiplier_weights;
use crate::error::{invalid, Result};
use crate::resolvent::Evaluation;
use crate::spectral::{dft, gamma, pairwise_sum_complex, Direction, Domain, GridSpec, SampledField, SingularRule};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Largest phase change of `e^{ix·ξ}` across one radial panel.
const PHASE_PER_PANEL: f64 = 8.0;
const RESET: usize = 128;

fn check_input(spec: &MultiplierSpec, h: &SampledField) -> Result<()> {
    spec.validate()?;
    if h.domain != Domain::Physical {
        return invalid("annulus operators act on physical fields");
    }
    if h.grid.ndim() != spec.d {
        return invalid(format!("{}-dimensional field for a {}-dimensional multiplier", h.grid.ndim(), spec.d));
    }
    Ok(())
}

/// `T_{λ,α} h = 𝔉^{-1}(1_A e^{-λ√(|ξ|²-a²)} (|ξ|²-a²)^{-α} m 𝔉 h)` on the
/// periodic grid, with cell-averaged weights next to `|ξ| = a`.
pub fn apply_t(spec: &MultiplierSpec, h: &SampledField) -> Result<SampledField> {
    apply_t_with(spec, h, Evaluation::Periodic)
}

/// [`apply_t`] with a chosen evaluation. `Continuum` treats `h` as a sum of
/// point masses on its grid and integrates the multiplier over `A` with a
/// graded rule, so the output is the non-periodic convolution `K_λ ⋆ h`.
pub fn apply_t_with(spec: &MultiplierSpec, h: &SampledField, evaluation: Evaluation) -> Result<SampledField> {
    check_input(spec, h)?;
    match evaluation {
        Evaluation::Periodic => {
            let w = multiplier_weights(spec, Complex64::new(spec.alpha, 0.0), &h.grid)?;
            apply_weights(&w, h)
        }
        Evaluation::Continuum => {
            let points: Vec<Vec<f64>> = (0..h.len()).map(|i| h.point(i)).collect();
            let values = apply_t_at(spec, h, &points)?;
            SampledField::new(h.grid.clone(), values, Domain::Physical)
        }
    }
}

/// Multiplies `𝔉 h` by precomputed node weights (see
/// [`multiplier_weights`](super::multiplier_weights)) and transforms back.
pub fn apply_weights(weights: &[Complex64], h: &SampledField) -> Result<SampledField> {
    if weights.len() != h.len() {
        return invalid("weight array does not match the grid");
    }
    let mut hat = dft(h, Direction::Forward)?;
    for (v, w) in hat.values.iter_mut().zip(weights) {
        *v *= w;
    }
    dft(&hat, Direction::Inverse)
}

/// `𝒯_{λ,s} h`: the multiplier of order `s` times `e^{(1-s)²}/Γ(1-s)`.
pub fn apply_t_family(spec: &MultiplierSpec, s: Complex64, h: &SampledField) -> Result<SampledField> {
    check_input(spec, h)?;
    check_order(s)?;
    let w = multiplier_weights(spec, s, &h.grid)?;
    let out = apply_weights(&w, h)?;
    Ok(out.scale(family_prefactor(s)))
}

/// `e^{(1-s)²} / Γ(1-s)`.
pub fn family_prefactor(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    ((one - s) * (one - s)).exp() / gamma(one - s)
}

/// Nonzero samples of a physical field as sources for direct transforms.
struct Sources {
    grid: GridSpec,
    /// Per row of the leading axis (one row in `d = 1`): first index and
    /// scaled values along the last axis.
    rows: Vec<(usize, usize, Vec<Complex64>)>,
    extent: f64,
}

impl Sources {
    fn new(h: &SampledField) -> Self {
        let grid = h.grid.clone();
        let d = grid.ndim();
        let scale = grid.cell_volume() / (2.0 * PI).powf(d as f64 / 2.0);
        let n_last = grid.points()[d - 1];
        let n_rows = grid.len() / n_last;
        let mut rows = Vec::new();
        let mut extent: f64 = 0.0;
        for r in 0..n_rows {
            let line = &h.values[r * n_last..(r + 1) * n_last];
            let (Some(first), Some(last)) = (line.iter().position(|v| *v != ZERO), line.iter().rposition(|v| *v != ZERO))
            else {
                continue;
            };
            let vals = line[first..=last].iter().map(|v| v * scale).collect();
            let x_row = if d == 2 { grid.coord(0, r) } else { 0.0 };
            let far = grid.coord(d - 1, first).abs().max(grid.coord(d - 1, last).abs());
            extent = extent.max(x_row.hypot(far));
            rows.push((r, first, vals));
        }
        Self { grid, rows, extent }
    }

    /// `𝔉 h(ξ)` by direct summation.
    fn transform(&self, xi: &[f64]) -> Complex64 {
        let d = self.grid.ndim();
        let dx = self.grid.spacing(d - 1);
        let k = xi[d - 1];
        let mut total = ZERO;
        for (r, first, vals) in &self.rows {
            let x0 = self.grid.coord(d - 1, *first);
            let mut s = line_sum(vals, x0, dx, k);
            if d == 2 {
                s *= Complex64::from_polar(1.0, -self.grid.coord(0, *r) * xi[0]);
            }
            total += s;
        }
        total
    }
}

/// `Σ_j v_j e^{-i (x0 + j dx) k}` with a phase recurrence reset every
/// [`RESET`] steps.
fn line_sum(vals: &[Complex64], x0: f64, dx: f64, k: f64) -> Complex64 {
    let step = Complex64::from_polar(1.0, -dx * k);
    let mut total = ZERO;
    for (c, chunk) in vals.chunks(RESET).enumerate() {
        let mut phase = Complex64::from_polar(1.0, -(x0 + (c * RESET) as f64 * dx) * k);
        let mut s = ZERO;
        for v in chunk {
            s += v * phase;
            phase *= step;
        }
        total += s;
    }
    total
}

/// Quadrature nodes `(ξ, weight, W(ξ))` over the annulus for the order
/// `s`, with phase resolution for `|x| ≤ extent`. The radial rule is
/// graded towards `|ξ| = a`, where the factor `(|ξ| - a)^{-Re s}` sits in
/// the weight; `W` is the regular remainder.
fn annulus_nodes(spec: &MultiplierSpec, s: Complex64, extent: f64) -> Vec<([f64; 2], f64, Complex64)> {
    let len = spec.b - spec.a;
    let width = (PHASE_PER_PANEL / extent.max(1e-300)).min(0.25 * len);
    let rule = SingularRule::new(0.0, len, s.re, width, 16);
    let radial = rule.offsets.iter().zip(&rule.weights).map(|(t, w)| (spec.a + t, *w, spec.weight_regular(s, *t)));
    let mut nodes = Vec::new();
    for (r, w, v) in radial {
        if spec.d == 1 {
            nodes.push(([r, 0.0], w, v));
            nodes.push(([-r, 0.0], w, v));
        } else {
            let n_theta = (r * extent).ceil() as usize + 24;
            let dth = 2.0 * PI / n_theta as f64;
            for k in 0..n_theta {
                let th = k as f64 * dth;
                nodes.push(([r * th.cos(), r * th.sin()], w * r * dth, v));
            }
        }
    }
    nodes
}

/// `T_{λ,α} h` at arbitrary points without periodization:
/// `(2π)^{-d/2} ∫_A e^{ix·ξ} W(ξ) 𝔉h(ξ) dξ` with `𝔉h` the trapezoidal
/// transform of the samples.
pub fn apply_t_at(spec: &MultiplierSpec, h: &SampledField, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    check_input(spec, h)?;
    if points.iter().any(|p| p.len() != spec.d) {
        return invalid("evaluation points must have the multiplier's dimension");
    }
    let src = Sources::new(h);
    if src.rows.is_empty() {
        return Ok(vec![ZERO; points.len()]);
    }
    let reach = points.iter().map(|p| p.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let s = Complex64::new(spec.alpha, 0.0);
    let nodes = annulus_nodes(spec, s, src.extent + reach);
    let norm = (2.0 * PI).powf(-(spec.d as f64) / 2.0);
    let coef: Vec<([f64; 2], Complex64)> =
        nodes.par_iter().map(|(xi, w, v)| (*xi, v * src.transform(&xi[..spec.d]) * (w * norm))).collect();
    Ok(points
        .par_iter()
        .map(|p| {
            let terms: Vec<Complex64> = coef
                .iter()
                .map(|(xi, c)| {
                    let phase: f64 = p.iter().zip(xi).map(|(x, k)| x * k).sum();
                    c * Complex64::from_polar(1.0, phase)
                })
                .collect();
            pairwise_sum_complex(&terms)
        })
        .collect())
}

/// Samples of a function on the annulus nodes of a frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusSamples {
    pub grid: GridSpec,
    /// Flat indices of the dual-grid nodes with `a ≤ |ξ| ≤ b`.
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl AnnulusSamples {
    /// `Σ f conj(g) Δξ^d`, the discrete `L²(A)` inner product.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid || self.indices != other.indices {
            return invalid("annulus samples on different node sets");
        }
        let terms: Vec<Complex64> = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).collect();
        Ok(pairwise_sum_complex(&terms) * self.grid.dual_cell_volume())
    }

    /// Discrete `L^s(A)` norm over the nodes.
    pub fn norm(&self, s: f64) -> Result<f64> {
        crate::spectral::lp_norm_slice(&self.values, self.grid.dual_cell_volume(), s)
    }
}

/// Dual-grid nodes inside the closed annulus.
pub fn annulus_indices(spec: &MultiplierSpec, grid: &GridSpec) -> Vec<usize> {
    (0..grid.len())
        .filter(|&flat| {
            let idx = grid.unravel(flat);
            let r = idx.iter().enumerate().map(|(ax, &k)| grid.freq(ax, k).powi(2)).sum::<f64>().sqrt();
            r >= spec.a && r <= spec.b
        })
        .collect()
}

/// `e^{-λ√(r²-a²)} m(r)` at a node.
fn restriction_weight(spec: &MultiplierSpec, grid: &GridSpec, flat: usize) -> Complex64 {
    let idx = grid.unravel(flat);
    let r = idx.iter().enumerate().map(|(ax, &k)| grid.freq(ax, k).powi(2)).sum::<f64>().sqrt();
    spec.weight(ZERO, (r - spec.a).max(0.0))
}

/// `S_λ h = 1_A e^{-λ√(|ξ|²-a²)} m 𝔉h` on the annulus nodes. The order
/// `α` of `spec` is not used.
pub fn apply_s(spec: &MultiplierSpec, h: &SampledField) -> Result<AnnulusSamples> {
    check_input(spec, h)?;
    let hat = dft(h, Direction::Forward)?;
    let indices = annulus_indices(spec, &h.grid);
    let values = indices.iter().map(|&i| restriction_weight(spec, &h.grid, i) * hat.values[i]).collect();
    Ok(AnnulusSamples { grid: h.grid.clone(), indices, values })
}

/// `S_λ* g = 𝔉^{-1}(1_A e^{-λ√(|ξ|²-a²)} conj(m) g)`.
pub fn apply_s_adjoint(spec: &MultiplierSpec, g: &AnnulusSamples) -> Result<SampledField> {
    spec.validate()?;
    if g.grid.ndim() != spec.d || g.indices.len() != g.values.len() {
        return invalid("annulus samples do not match the multiplier");
    }
    let mut hat = SampledField::zeros(g.grid.clone(), Domain::Frequency);
    for (&i, v) in g.indices.iter().zip(&g.values) {
        if i >= hat.len() {
            return invalid("annulus sample index outside the grid");
        }
        hat.values[i] = restriction_weight(spec, &g.grid, i).conj() * v;
    }
    dft(&hat, Direction::Inverse)
}

/// `‖S_λ h‖_{L^s(A)}` by polar quadrature of `|e^{-λ√(|ξ|²-a²)} m 𝔉h|^s`
/// with `𝔉h` evaluated exactly at the quadrature nodes.
pub fn restriction_norm(spec: &MultiplierSpec, h: &SampledField, s: f64) -> Result<f64> {
    check_input(spec, h)?;
    if s.is_nan() || s < 1.0 {
        return invalid(format!("L^s exponent {s} below 1"));
    }
    let src = Sources::new(h);
    if src.rows.is_empty() {
        return Ok(0.0);
    }
    let nodes = annulus_nodes(spec, ZERO, src.extent);
    let vals: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|(xi, w, v)| (v.norm() * src.transform(&xi[..spec.d]).norm(), *w))
        .collect();
    if s.is_infinite() {
        return Ok(vals.iter().map(|v| v.0).fold(0.0, f64::max));
    }
    let max = vals.iter().map(|v| v.0).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    let terms: Vec<f64> = vals.iter().map(|(v, q)| (v / max).powf(s) * q).collect();
    Ok(max * crate::spectral::pairwise_sum(&terms).powf(1.0 / s))
}
