//! Solution operators for `-Δu + V u - (λ + iε) u = f` with a step potential.
//!
//! Every operator here is assembled column by column: for a lateral
//! frequency `ξ` the data `𝔉_{n-1}[f(·,z)](ξ)` are fed to the exact
//! one-dimensional Green's function along `y`, and the interface terms
//! `e^{i|y|ν₁}(m₁g₊ + m₂g₋) + e^{i|y|ν₂}(m₃g₊ + m₄g₋)` are added. The lateral
//! integral is then either a periodic inverse FFT (`ε > 0`) or a
//! quadrature over `ℝ^{n-1}` adapted to the branch points of `ν_j`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use super::continuum::{lateral_nodes, Lateral};
use super::lines::{ColumnSolver, YLine};
use super::multipliers::{multipliers, xi_norm_at, BoundaryTrace};
use super::params::FrequencyParams;
use crate::error::{invalid, Result};
use crate::spectral::{dft, transform_axes, Direction, Domain, GridSpec, SampledField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Half-space `{±y > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// `λ + i0` (outgoing) or `λ - i0` (incoming).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Outgoing,
    Incoming,
}

/// How the lateral frequency integral is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// Lateral variables periodic on the grid box; inverse FFT. Needs `ε > 0`.
    Periodic,
    /// Quadrature over `ℝ^{n-1}` with output by direct summation, so the
    /// result does not wrap around the box. Cost grows like
    /// (nodes) × (grid size); meant for `n = 2` or small `n = 3` grids.
    Continuum,
}

/// The interface correction split by lateral frequency windows.
#[derive(Clone, Debug)]
pub struct FrequencyDecomposition {
    /// Small frequencies: `|ξ| ≤ μ₁`, and `|ξ| ≤ μ₂` for the `m₄` term.
    pub w: SampledField,
    /// `m₂, m₃` terms on `μ₁ < |ξ| ≤ μ₂`.
    pub frak_w: SampledField,
    /// Intermediate frequencies up to `μ₁ + μ₂`.
    pub frak_big_w: SampledField,
    /// `|ξ| > μ₁ + μ₂`.
    pub w_large: SampledField,
}

impl FrequencyDecomposition {
    pub fn sum(&self) -> Result<SampledField> {
        let one = Complex64::new(1.0, 0.0);
        self.w
            .combine(one, &self.frak_w, one)?
            .combine(one, &self.frak_big_w, one)?
            .combine(one, &self.w_large, one)
    }
}

/// `𝔉_n(f · 1_{±y > 0})`, the line `y = 0` weighted by 1/2 on each side.
pub fn one_sided_ft(f: &SampledField, side: Side) -> Result<SampledField> {
    check_field(f)?;
    let n = f.grid.ndim();
    let ny = f.grid.points()[n - 1];
    let k0 = ny / 2;
    let mut g = f.clone();
    for (idx, v) in g.values.iter_mut().enumerate() {
        let k = idx % ny;
        let keep = match (side, k.cmp(&k0)) {
            (_, std::cmp::Ordering::Equal) => 0.5,
            (Side::Plus, std::cmp::Ordering::Greater) | (Side::Minus, std::cmp::Ordering::Less) => 1.0,
            _ => 0.0,
        };
        *v *= keep;
    }
    dft(&g, Direction::Forward)
}

/// The solution `u_ε` of the absorbing problem (`ε > 0`), lateral
/// variables periodic on the grid box.
pub fn solve_perturbed(f: &SampledField, params: &FrequencyParams) -> Result<SampledField> {
    solve_perturbed_with(f, params, Evaluation::Periodic)
}

/// [`solve_perturbed`] with an explicit lateral evaluation mode.
pub fn solve_perturbed_with(f: &SampledField, params: &FrequencyParams, mode: Evaluation) -> Result<SampledField> {
    if params.eps <= 0.0 {
        return invalid("solve_perturbed needs eps > 0; use solve_lap for the limiting problem");
    }
    Ok(run(f, params, mode, Kind::Full)?.remove(0))
}

/// The limiting-absorption solutions `u_± = ℛ(λ ± i0) f` (`ε = 0`).
///
/// The outgoing solution is evaluated directly at `ε = 0` in continuum
/// mode; the incoming one is `conj(u_+(conj f))`, so for real `f` the two
/// are exact conjugates.
pub fn solve_lap(f: &SampledField, params: &FrequencyParams, branch: Branch) -> Result<SampledField> {
    if params.eps != 0.0 {
        return invalid(format!("solve_lap needs eps = 0, got {}", params.eps));
    }
    match branch {
        Branch::Outgoing => Ok(run(f, params, Evaluation::Continuum, Kind::Full)?.remove(0)),
        Branch::Incoming => {
            let u = run(&f.conj(), params, Evaluation::Continuum, Kind::Full)?.remove(0);
            Ok(u.conj())
        }
    }
}

/// Only the interface terms of the solution (no volume term). Periodic
/// mode for `ε > 0`, continuum mode for `ε = 0`.
pub fn interface_correction(f: &SampledField, params: &FrequencyParams) -> Result<SampledField> {
    Ok(run(f, params, default_mode(params), Kind::Interface)?.remove(0))
}

/// The interface correction split into the `w, 𝔴, 𝔚, W` blocks. Periodic
/// mode for `ε > 0`, continuum mode for `ε = 0`.
pub fn frequency_decomposition(f: &SampledField, params: &FrequencyParams) -> Result<FrequencyDecomposition> {
    let mut blocks = run(f, params, default_mode(params), Kind::Blocks)?;
    let w_large = blocks.pop().expect("four blocks");
    let frak_big_w = blocks.pop().expect("four blocks");
    let frak_w = blocks.pop().expect("four blocks");
    let w = blocks.pop().expect("four blocks");
    Ok(FrequencyDecomposition { w, frak_w, frak_big_w, w_large })
}

/// `g₊, g₋` at every lateral frequency of the periodic grid.
pub fn boundary_traces(f: &SampledField, params: &FrequencyParams) -> Result<BoundaryTrace> {
    check_field(f)?;
    let (xgrid, ny, solver) = setup(f)?;
    let vals = lateral_transform(f);
    let pairs: Vec<(Complex64, Complex64)> = vals
        .par_chunks(ny)
        .enumerate()
        .map(|(c, data)| {
            let lat = Lateral::at(xi_norm_at(&xgrid, c), params);
            solver.traces(data, lat.nu1, lat.nu2)
        })
        .collect();
    let (g_plus, g_minus) = pairs.into_iter().unzip();
    Ok(BoundaryTrace { grid: xgrid, g_plus, g_minus })
}

/// Reference solution for a constant potential (`V₁ = V₂`, `ε > 0`):
/// `𝔉^{-1}(𝔉f / (|ξ|² + η² - μ² - iε))` with the lateral variables periodic
/// and `y` zero-padded until the wrapped tail of the Green's function is
/// below round-off.
pub fn direct_multiplier_solution(f: &SampledField, params: &FrequencyParams) -> Result<SampledField> {
    check_field(f)?;
    if params.potential.v1 != params.potential.v2 {
        return invalid("direct multiplier solution needs a constant potential");
    }
    if params.eps <= 0.0 {
        return invalid("direct multiplier solution needs eps > 0");
    }
    let (xgrid, ny, line) = {
        let (xg, ny, s) = setup(f)?;
        (xg, ny, *s.line())
    };
    let mu2 = params.mu1() * params.mu1();
    let mut vals = lateral_transform(f);
    vals.par_chunks_mut(ny).enumerate().for_each(|(c, col)| {
        let xi = xi_norm_at(&xgrid, c);
        let decay = Lateral::at(xi, params).nu1.im;
        let half = line.half_width + 30.0 / decay;
        let mut m = (2.0 * half / line.h).ceil() as usize;
        m = m.max(2 * ny).next_power_of_two();
        let off = (m - ny) / 2;
        let mut buf = vec![ZERO; m];
        buf[off..off + ny].copy_from_slice(col);
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft(m, FftDirection::Forward);
        let inv = planner.plan_fft(m, FftDirection::Inverse);
        let flip = |b: &mut [Complex64]| {
            for v in b.iter_mut().skip(1).step_by(2) {
                *v = -*v;
            }
        };
        flip(&mut buf);
        fwd.process(&mut buf);
        flip(&mut buf);
        let deta = 2.0 * PI / (m as f64 * line.h);
        for (k, v) in buf.iter_mut().enumerate() {
            let eta = (k as f64 - (m / 2) as f64) * deta;
            *v /= Complex64::new(xi * xi + eta * eta - mu2, -params.eps);
        }
        flip(&mut buf);
        inv.process(&mut buf);
        flip(&mut buf);
        // Forward and inverse scalings h/√(2π) and Δη/√(2π) multiply to 1/m.
        let scale = 1.0 / m as f64;
        for (dst, src) in col.iter_mut().zip(&buf[off..off + ny]) {
            *dst = src * scale;
        }
    });
    let n = f.grid.ndim();
    let xaxes: Vec<usize> = (0..n - 1).collect();
    let steps: Vec<f64> = xaxes.iter().map(|&a| f.grid.dual_spacing(a)).collect();
    transform_axes(&mut vals, f.grid.points(), &xaxes, &steps, Direction::Inverse);
    SampledField::new(f.grid.clone(), vals, Domain::Physical)
}

fn default_mode(params: &FrequencyParams) -> Evaluation {
    if params.eps > 0.0 {
        Evaluation::Periodic
    } else {
        Evaluation::Continuum
    }
}

pub(crate) fn check_field(f: &SampledField) -> Result<()> {
    if f.domain != Domain::Physical {
        return invalid("expected a physical-domain field");
    }
    let n = f.grid.ndim();
    if !(2..=3).contains(&n) {
        return invalid(format!("step-potential problems need n = 2 or 3, got {n}"));
    }
    let ny = f.grid.points()[n - 1];
    if ny < 8 || ny % 2 != 0 {
        return invalid(format!("the y axis needs an even number of at least 8 points, got {ny}"));
    }
    Ok(())
}

fn setup(f: &SampledField) -> Result<(GridSpec, usize, ColumnSolver)> {
    check_field(f)?;
    let n = f.grid.ndim();
    let xgrid = f.grid.leading(n - 1)?;
    let ny = f.grid.points()[n - 1];
    Ok((xgrid, ny, ColumnSolver::new(YLine::of(&f.grid))))
}

/// `𝔉_{n-1}` in the lateral variables for every `y`.
fn lateral_transform(f: &SampledField) -> Vec<Complex64> {
    let n = f.grid.ndim();
    let mut vals = f.values.clone();
    let xaxes: Vec<usize> = (0..n - 1).collect();
    let steps: Vec<f64> = xaxes.iter().map(|&a| f.grid.spacing(a)).collect();
    transform_axes(&mut vals, f.grid.points(), &xaxes, &steps, Direction::Forward);
    vals
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Full,
    Interface,
    Blocks,
}

impl Kind {
    fn outputs(self) -> usize {
        match self {
            Kind::Blocks => 4,
            _ => 1,
        }
    }
}

/// The four interface terms `e^{i|y|ν₁}m₁g₊, e^{i|y|ν₁}m₂g₋, e^{i|y|ν₂}m₃g₊,
/// e^{i|y|ν₂}m₄g₋` at node `k`.
struct Terms {
    line: YLine,
    m_up: [Complex64; 4],
    m_down: [Complex64; 4],
    g: (Complex64, Complex64),
    nu: (Complex64, Complex64),
}

impl Terms {
    fn new(line: YLine, lat: &Lateral, g: (Complex64, Complex64)) -> Self {
        Self {
            line,
            m_up: multipliers(lat.nu1, lat.nu2, 1.0),
            m_down: multipliers(lat.nu1, lat.nu2, -1.0),
            g,
            nu: (lat.nu1, lat.nu2),
        }
    }

    fn at(&self, k: usize) -> [Complex64; 4] {
        let m = if k >= self.line.k0 { &self.m_up } else { &self.m_down };
        let y = self.line.y(k).abs();
        let e1 = (I * self.nu.0 * y).exp();
        let e2 = (I * self.nu.1 * y).exp();
        let (gp, gm) = self.g;
        [e1 * m[0] * gp, e1 * m[1] * gm, e2 * m[2] * gp, e2 * m[3] * gm]
    }
}

/// Window index (`w, 𝔴, 𝔚, W`) of interface term `term` at `lat`.
fn block_of(term: usize, lat: &Lateral, params: &FrequencyParams) -> usize {
    if lat.xi > params.mu1() + params.mu2() {
        return 3;
    }
    let [above1, above2] = lat.above;
    match term {
        0 => usize::from(above1) * 2,
        1 | 2 => match (above1, above2) {
            (false, _) => 0,
            (true, false) => 1,
            (true, true) => 2,
        },
        _ => usize::from(above2) * 2,
    }
}

fn column(kind: Kind, solver: &ColumnSolver, data: &[Complex64], lat: &Lateral, params: &FrequencyParams) -> Vec<Vec<Complex64>> {
    let line = *solver.line();
    let ny = line.n;
    match kind {
        Kind::Full => {
            let sol = solver.solve(data, lat.nu1, lat.nu2);
            let terms = Terms::new(line, lat, (sol.g_plus, sol.g_minus));
            let mut u = sol.volume;
            for (k, v) in u.iter_mut().enumerate() {
                let t = terms.at(k);
                *v += (t[0] + t[1]) + (t[2] + t[3]);
            }
            vec![u]
        }
        Kind::Interface => {
            let terms = Terms::new(line, lat, solver.traces(data, lat.nu1, lat.nu2));
            vec![(0..ny)
                .map(|k| {
                    let t = terms.at(k);
                    (t[0] + t[1]) + (t[2] + t[3])
                })
                .collect()]
        }
        Kind::Blocks => {
            let terms = Terms::new(line, lat, solver.traces(data, lat.nu1, lat.nu2));
            let which: Vec<usize> = (0..4).map(|t| block_of(t, lat, params)).collect();
            let mut out = vec![vec![ZERO; ny]; 4];
            for k in 0..ny {
                let t = terms.at(k);
                for (term, &b) in which.iter().enumerate() {
                    out[b][k] += t[term];
                }
            }
            out
        }
    }
}

fn run(f: &SampledField, params: &FrequencyParams, mode: Evaluation, kind: Kind) -> Result<Vec<SampledField>> {
    let (xgrid, ny, solver) = setup(f)?;
    let values = match mode {
        Evaluation::Periodic => {
            if params.eps <= 0.0 {
                return invalid("periodic lateral evaluation needs eps > 0");
            }
            periodic(f, params, kind, &xgrid, ny, &solver)
        }
        Evaluation::Continuum => continuum(f, params, kind, &xgrid, ny, &solver),
    };
    values
        .into_iter()
        .map(|v| SampledField::new(f.grid.clone(), v, Domain::Physical))
        .collect()
}

fn periodic(
    f: &SampledField,
    params: &FrequencyParams,
    kind: Kind,
    xgrid: &GridSpec,
    ny: usize,
    solver: &ColumnSolver,
) -> Vec<Vec<Complex64>> {
    let vals = lateral_transform(f);
    let cols: Vec<Vec<Vec<Complex64>>> = vals
        .par_chunks(ny)
        .enumerate()
        .map(|(c, data)| {
            let lat = Lateral::at(xi_norm_at(xgrid, c), params);
            column(kind, solver, data, &lat, params)
        })
        .collect();
    let mut outs = vec![vec![ZERO; f.len()]; kind.outputs()];
    for (c, col) in cols.into_iter().enumerate() {
        for (o, v) in col.into_iter().enumerate() {
            outs[o][c * ny..(c + 1) * ny].copy_from_slice(&v);
        }
    }
    let n = f.grid.ndim();
    let xaxes: Vec<usize> = (0..n - 1).collect();
    let steps: Vec<f64> = xaxes.iter().map(|&a| f.grid.dual_spacing(a)).collect();
    for o in outs.iter_mut() {
        transform_axes(o, f.grid.points(), &xaxes, &steps, Direction::Inverse);
    }
    outs
}

fn continuum(
    f: &SampledField,
    params: &FrequencyParams,
    kind: Kind,
    xgrid: &GridSpec,
    ny: usize,
    solver: &ColumnSolver,
) -> Vec<Vec<Complex64>> {
    let n_out = kind.outputs();
    let dims = xgrid.ndim();
    let ncols = xgrid.len();

    // Effective lateral bandwidth of f.
    let vals = lateral_transform(f);
    let col_max: Vec<f64> = vals.par_chunks(ny).map(|c| c.iter().map(|v| v.norm()).fold(0.0, f64::max)).collect();
    let global = col_max.iter().cloned().fold(0.0, f64::max);
    if global == 0.0 {
        return vec![vec![ZERO; f.len()]; n_out];
    }
    let bw = col_max
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 1e-13 * global)
        .map(|(c, _)| xi_norm_at(xgrid, c))
        .fold(0.0, f64::max);
    let dxi = (0..dims).map(|a| xgrid.dual_spacing(a)).fold(0.0, f64::max);
    let cutoff = bw + 2.0 * dxi;
    let x_extent = xgrid.half_width().iter().map(|l| l * l).sum::<f64>().sqrt();
    let y_span = 2.0 * f.grid.half_width()[dims];
    let nodes = lateral_nodes(params, dims, cutoff, x_extent, y_span);

    let coords: Vec<Vec<f64>> = (0..dims).map(|a| (0..xgrid.points()[a]).map(|j| xgrid.coord(a, j)).collect()).collect();
    let n_last = if dims == 2 { xgrid.points()[1] } else { 1 };
    let phase = |c: usize, xi: &[f64; 2], sign: f64| -> Complex64 {
        let arg = if dims == 1 {
            coords[0][c] * xi[0]
        } else {
            coords[0][c / n_last] * xi[0] + coords[1][c % n_last] * xi[1]
        };
        Complex64::from_polar(1.0, sign * arg)
    };
    let norm = (2.0 * PI).powf(-(dims as f64) / 2.0);
    let active: Vec<usize> = (0..ncols)
        .filter(|&c| f.values[c * ny..(c + 1) * ny].iter().any(|v| *v != ZERO))
        .collect();

    // Column solutions at every node, already weighted.
    let scale_in = norm * xgrid.cell_volume();
    let columns: Vec<Vec<Vec<Complex64>>> = nodes
        .par_iter()
        .map(|node| {
            let mut hat = vec![ZERO; ny];
            for &c in &active {
                let e = phase(c, &node.point, -1.0) * scale_in;
                for (h, v) in hat.iter_mut().zip(&f.values[c * ny..(c + 1) * ny]) {
                    *h += e * v;
                }
            }
            let mut out = column(kind, solver, &hat, &node.lateral, params);
            for o in out.iter_mut() {
                for v in o.iter_mut() {
                    *v *= node.weight * norm;
                }
            }
            out
        })
        .collect();

    let rows: Vec<Vec<Vec<Complex64>>> = (0..ncols)
        .into_par_iter()
        .map(|c| {
            let mut r = vec![vec![ZERO; ny]; n_out];
            for (node, col) in nodes.iter().zip(&columns) {
                let e = phase(c, &node.point, 1.0);
                for (ro, co) in r.iter_mut().zip(col) {
                    for (a, b) in ro.iter_mut().zip(co) {
                        *a += e * b;
                    }
                }
            }
            r
        })
        .collect();
    let mut outs = vec![vec![ZERO; f.len()]; n_out];
    for (c, row) in rows.into_iter().enumerate() {
        for (o, v) in row.into_iter().enumerate() {
            outs[o][c * ny..(c + 1) * ny].copy_from_slice(&v);
        }
    }
    outs
}
