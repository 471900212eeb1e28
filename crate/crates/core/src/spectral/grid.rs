use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniform rectangular grid covering `[-L_i, L_i)` along every axis.
///
/// Node `j` on axis `i` sits at `x = -L_i + j h_i` with `h_i = 2 L_i / N_i`;
/// the dual frequency node `k` sits at `ξ = (k - N_i/2) π / L_i`, so both
/// grids contain the origin at index `N_i / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    points: Vec<usize>,
    half_width: Vec<f64>,
}

impl GridSpec {
    pub fn new(points: Vec<usize>, half_width: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() > 3 {
            return invalid(format!("grid dimension {} not in 1..=3", points.len()));
        }
        if points.len() != half_width.len() {
            return invalid("points_per_dim and half_width_per_dim differ in length");
        }
        for &n in &points {
            if n < 8 || !n.is_power_of_two() {
                return invalid(format!("grid size {n} must be a power of two >= 8"));
            }
        }
        for &l in &half_width {
            if !(l > 0.0 && l.is_finite()) {
                return invalid(format!("half width {l} must be positive"));
            }
        }
        Ok(Self { points, half_width })
    }

    /// Same size and half width on every axis.
    pub fn cube(ndim: usize, n: usize, l: f64) -> Result<Self> {
        Self::new(vec![n; ndim], vec![l; ndim])
    }

    pub fn ndim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn half_width(&self) -> &[f64] {
        &self.half_width
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_width[axis] / self.points[axis] as f64
    }

    pub fn dual_spacing(&self, axis: usize) -> f64 {
        PI / self.half_width[axis]
    }

    pub fn nyquist(&self, axis: usize) -> f64 {
        PI * self.points[axis] as f64 / (2.0 * self.half_width[axis])
    }

    pub fn coord(&self, axis: usize, j: usize) -> f64 {
        -self.half_width[axis] + j as f64 * self.spacing(axis)
    }

    pub fn freq(&self, axis: usize, k: usize) -> f64 {
        (k as f64 - (self.points[axis] / 2) as f64) * self.dual_spacing(axis)
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.ndim()];
        for i in (0..self.ndim().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.points[i + 1];
        }
        s
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.ndim()];
        for i in (0..self.ndim()).rev() {
            idx[i] = flat % self.points[i];
            flat /= self.points[i];
        }
        idx
    }

    /// Grid made of the first `k` axes.
    pub fn leading(&self, k: usize) -> Result<Self> {
        Self::new(self.points[..k].to_vec(), self.half_width[..k].to_vec())
    }

    /// Product of physical spacings.
    pub fn cell_volume(&self) -> f64 {
        (0..self.ndim()).map(|i| self.spacing(i)).product()
    }

    /// Product of dual spacings.
    pub fn dual_cell_volume(&self) -> f64 {
        (0..self.ndim()).map(|i| self.dual_spacing(i)).product()
    }

    /// Whether node `idx` lies in the outer 10% shell of the box.
    pub fn in_shell(&self, idx: &[usize]) -> bool {
        idx.iter().zip(&self.points).any(|(&j, &n)| {
            let s = shell_width(n);
            j < s || j >= n - s
        })
    }
}

/// Number of nodes in the 10% boundary shell of an axis with `n` nodes.
pub(crate) fn shell_width(n: usize) -> usize {
    ((n as f64) * 0.1).ceil() as usize
}
