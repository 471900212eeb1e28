use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{invalid, Result};

/// Which side of the Fourier transform a field lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Physical,
    Frequency,
}

impl Domain {
    pub fn tag(self) -> u32 {
        match self {
            Domain::Physical => 0,
            Domain::Frequency => 1,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Self> {
        match tag {
            0 => Some(Domain::Physical),
            1 => Some(Domain::Frequency),
            _ => None,
        }
    }
}

/// Complex samples on a [`GridSpec`], row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    pub domain: Domain,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if values.len() != grid.len() {
            return invalid(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            ));
        }
        Ok(Self { grid, values, domain })
    }

    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values, domain }
    }

    /// Samples `f` at the nodes of the grid; coordinates are physical
    /// positions or frequencies according to `domain`.
    pub fn from_fn(grid: GridSpec, domain: Domain, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut point = vec![0.0; grid.ndim()];
        let values = (0..grid.len())
            .map(|flat| {
                fill_point(&grid, domain, flat, &mut point);
                f(&point)
            })
            .collect();
        Self { grid, values, domain }
    }

    /// Coordinates of node `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.grid.ndim()];
        fill_point(&self.grid, self.domain, flat, &mut p);
        p
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * c).collect();
        Self { grid: self.grid.clone(), values, domain: self.domain }
    }

    pub fn conj(&self) -> Self {
        let values = self.values.iter().map(|v| v.conj()).collect();
        Self { grid: self.grid.clone(), values, domain: self.domain }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self { grid: self.grid.clone(), values, domain: self.domain })
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest modulus in the outer 10% shell divided by the global maximum.
    pub fn shell_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let shell = (0..self.len())
            .filter(|&i| self.grid.in_shell(&self.grid.unravel(i)))
            .fold(0.0f64, |m, i| m.max(self.values[i].norm()));
        shell / max
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.domain != other.domain {
            return invalid("fields live on different grids or domains");
        }
        Ok(())
    }
}

fn fill_point(grid: &GridSpec, domain: Domain, mut flat: usize, point: &mut [f64]) {
    for axis in (0..grid.ndim()).rev() {
        let n = grid.points()[axis];
        let j = flat % n;
        flat /= n;
        point[axis] = match domain {
            Domain::Physical => grid.coord(axis, j),
            Domain::Frequency => grid.freq(axis, j),
        };
    }
}
