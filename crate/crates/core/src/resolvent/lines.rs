//! Exact one-dimensional outgoing Green's function applied along `y`.
//!
//! For a fixed lateral frequency `ξ` the volume term solves
//! `(-∂_y² - ν_j²) U = F` on each half-line data piece, i.e.
//! `U(y) = (i / 2ν) ∫ e^{iν|y-z|} F(z) dz`. The integral is split into the
//! forward and backward recursions
//! `P(y_{k+1}) = e^{iνh} P(y_k) + ∫_{y_k}^{y_{k+1}} e^{iν(y_{k+1}-z)} F`,
//! `Q(y_k) = e^{iνh} Q(y_{k+1}) + ∫_{y_k}^{y_{k+1}} e^{iν(z-y_k)} F`,
//! which are stable because `|e^{iνh}| ≤ 1`. Cell integrals use the
//! exponential moments of a local degree-7 Lagrange interpolant whose
//! stencil never crosses `y = 0`, so data are one-sided on each half-space
//! and the interface line itself is never used as data.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::spectral::{gauss_legendre, GridSpec};

const ORDER: usize = 8;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug)]
pub(crate) struct YLine {
    pub n: usize,
    pub h: f64,
    pub k0: usize,
    pub half_width: f64,
}

impl YLine {
    pub fn of(grid: &GridSpec) -> Self {
        let a = grid.ndim() - 1;
        let n = grid.points()[a];
        Self { n, h: grid.spacing(a), k0: n / 2, half_width: grid.half_width()[a] }
    }

    pub fn y(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.h
    }
}

/// Lagrange basis on `m` nodes `t = 0..m`, expanded on the cell
/// `t ∈ [o, o+1]` in powers of `s = t - o`.
#[derive(Clone, Debug)]
struct Pattern {
    m: usize,
    coeffs: [[f64; ORDER]; ORDER],
}

impl Pattern {
    fn new(m: usize, o: i64) -> Self {
        let mut coeffs = [[0.0; ORDER]; ORDER];
        for (a, row) in coeffs.iter_mut().enumerate().take(m) {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for b in 0..m {
                if b == a {
                    continue;
                }
                // multiply by (s + o - b)
                let shift = (o - b as i64) as f64;
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &c) in poly.iter().enumerate() {
                    next[p + 1] += c;
                    next[p] += c * shift;
                }
                poly = next;
                denom *= a as f64 - b as f64;
            }
            for (p, c) in poly.iter().enumerate() {
                row[p] = c / denom;
            }
        }
        Self { m, coeffs }
    }

    fn weights(&self, moments: &[Complex64; ORDER], h: f64) -> [Complex64; ORDER] {
        let mut w = [ZERO; ORDER];
        for (a, wa) in w.iter_mut().enumerate().take(self.m) {
            let mut s = ZERO;
            for p in 0..self.m {
                s += moments[p] * self.coeffs[a][p];
            }
            *wa = s * h;
        }
        w
    }
}

/// Cells `k_lo..k_hi` (between consecutive nodes) with data nodes
/// restricted to `s_lo..=s_hi`.
#[derive(Clone, Debug)]
struct Segment {
    k_lo: usize,
    k_hi: usize,
    s_lo: usize,
    s_hi: usize,
    /// Per cell: first stencil node and pattern index.
    cells: Vec<(usize, usize)>,
    patterns: Vec<Pattern>,
}

impl Segment {
    fn new(k_lo: usize, k_hi: usize, s_lo: usize, s_hi: usize) -> Self {
        let m = ORDER.min(s_hi + 1 - s_lo);
        let mut patterns: Vec<(i64, Pattern)> = Vec::new();
        let mut cells = Vec::with_capacity(k_hi - k_lo);
        for c in k_lo..k_hi {
            let st = (c as i64 - 3).clamp(s_lo as i64, (s_hi + 1 - m) as i64) as usize;
            let o = c as i64 - st as i64;
            let idx = match patterns.iter().position(|(po, _)| *po == o) {
                Some(i) => i,
                None => {
                    patterns.push((o, Pattern::new(m, o)));
                    patterns.len() - 1
                }
            };
            cells.push((st, idx));
        }
        Self { k_lo, k_hi, s_lo, s_hi, cells, patterns: patterns.into_iter().map(|p| p.1).collect() }
    }

    /// Adds `∫_seg e^{iν|y_k - z|} F(z) dz` to `out[k]` for every node and
    /// returns `(P(y_hi), Q(y_lo))`.
    fn apply(
        &self,
        data: &[Complex64],
        z: Complex64,
        h: f64,
        out: Option<&mut [Complex64]>,
    ) -> (Complex64, Complex64) {
        if data[self.s_lo..=self.s_hi].iter().all(|v| *v == ZERO) {
            return (ZERO, ZERO);
        }
        let (a, b) = moments(z);
        let wf: Vec<_> = self.patterns.iter().map(|p| p.weights(&a, h)).collect();
        let wb: Vec<_> = self.patterns.iter().map(|p| p.weights(&b, h)).collect();
        let ez = z.exp();
        let ncell = self.k_hi - self.k_lo;
        let mut p = vec![ZERO; ncell + 1];
        for (i, &(st, pat)) in self.cells.iter().enumerate() {
            let m = self.patterns[pat].m;
            let mut cell = ZERO;
            for j in 0..m {
                cell += wf[pat][j] * data[st + j];
            }
            p[i + 1] = ez * p[i] + cell;
        }
        let mut q = vec![ZERO; ncell + 1];
        for (i, &(st, pat)) in self.cells.iter().enumerate().rev() {
            let m = self.patterns[pat].m;
            let mut cell = ZERO;
            for j in 0..m {
                cell += wb[pat][j] * data[st + j];
            }
            q[i] = ez * q[i + 1] + cell;
        }
        let Some(out) = out else {
            return (p[ncell], q[0]);
        };
        for (k, o) in out.iter_mut().enumerate() {
            *o += if k < self.k_lo {
                (z * (self.k_lo - k) as f64).exp() * q[0]
            } else if k > self.k_hi {
                (z * (k - self.k_hi) as f64).exp() * p[ncell]
            } else {
                let i = k - self.k_lo;
                p[i] + q[i]
            };
        }
        (p[ncell], q[0])
    }
}

/// `A_p = ∫₀¹ e^{z(1-s)} s^p ds` and `B_p = ∫₀¹ e^{zs} s^p ds` for `Re z ≤ 0`.
fn moments(z: Complex64) -> ([Complex64; ORDER], [Complex64; ORDER]) {
    let mut a = [ZERO; ORDER];
    let mut b = [ZERO; ORDER];
    if z.norm() <= 8.0 {
        let rule = gauss_legendre(32);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = 0.5 * (1.0 + x);
            let ea = (z * (1.0 - s)).exp() * (0.5 * w);
            let eb = (z * s).exp() * (0.5 * w);
            let mut sp = 1.0;
            for p in 0..ORDER {
                a[p] += ea * sp;
                b[p] += eb * sp;
                sp *= s;
            }
        }
    } else {
        let ez = z.exp();
        a[0] = (ez - 1.0) / z;
        b[0] = a[0];
        for p in 1..ORDER {
            a[p] = (p as f64 * a[p - 1] - 1.0) / z;
            b[p] = (ez - p as f64 * b[p - 1]) / z;
        }
    }
    (a, b)
}

/// Per-frequency result: the volume term on every node and the traces.
pub(crate) struct ColumnSolution {
    pub volume: Vec<Complex64>,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
}

/// Volume term and boundary traces for one lateral frequency.
pub(crate) struct ColumnSolver {
    line: YLine,
    plus: Segment,
    minus: Segment,
}

impl ColumnSolver {
    pub fn new(line: YLine) -> Self {
        let k0 = line.k0;
        let n = line.n;
        Self {
            line,
            plus: Segment::new(k0, n - 1, k0 + 1, n - 1),
            minus: Segment::new(0, k0, 0, k0 - 1),
        }
    }

    pub fn line(&self) -> &YLine {
        &self.line
    }

    /// Only the traces `(g₊, g₋)`; unlike [`Self::solve`] this is defined
    /// when `ν` vanishes.
    pub fn traces(&self, data: &[Complex64], nu1: Complex64, nu2: Complex64) -> (Complex64, Complex64) {
        let h = self.line.h;
        let (_, q_plus) = self.plus.apply(data, I * nu1 * h, h, None);
        let (p_minus, _) = self.minus.apply(data, I * nu2 * h, h, None);
        let norm = 1.0 / (2.0 * PI).sqrt();
        (q_plus * norm, p_minus * norm)
    }

    /// `ν₁` governs `{y > 0}`, `ν₂` governs `{y < 0}`; both must be nonzero.
    pub fn solve(&self, data: &[Complex64], nu1: Complex64, nu2: Complex64) -> ColumnSolution {
        let n = self.line.n;
        let h = self.line.h;
        let mut up = vec![ZERO; n];
        let mut down = vec![ZERO; n];
        let (_, q_plus) = self.plus.apply(data, I * nu1 * h, h, Some(&mut up));
        let (p_minus, _) = self.minus.apply(data, I * nu2 * h, h, Some(&mut down));
        let c1 = I / (2.0 * nu1);
        let c2 = I / (2.0 * nu2);
        let volume = up.iter().zip(&down).map(|(u, d)| c1 * u + c2 * d).collect();
        let norm = 1.0 / (2.0 * PI).sqrt();
        ColumnSolution { volume, g_plus: q_plus * norm, g_minus: p_minus * norm }
    }
}
