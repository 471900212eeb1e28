//! Finite-difference residual of `-Δu + V u - (λ + iε) u = f`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::FrequencyParams;
use crate::error::{invalid, Result};
use crate::spectral::{lp_norm_slice, SampledField};

/// Order of the centred second-difference stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FdOrder {
    #[default]
    Fourth,
    Sixth,
}

impl FdOrder {
    fn stencil(self) -> &'static [f64] {
        match self {
            FdOrder::Fourth => &[-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0],
            FdOrder::Sixth => &[-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0],
        }
    }

    fn radius(self) -> usize {
        self.stencil().len() - 1
    }
}

/// Discrete `L²` norm of `-Δu + (V - λ - iε)u - f` with a fourth-order
/// Laplacian. See [`residual_with`].
pub fn residual(u: &SampledField, f: &SampledField, params: &FrequencyParams) -> Result<f64> {
    residual_with(u, f, params, FdOrder::Fourth)
}

/// The residual with a chosen stencil. Nodes in the 10% boundary shell
/// and nodes whose `y`-stencil reaches across `y = 0` (where `u''` jumps
/// with the potential) are excluded.
pub fn residual_with(u: &SampledField, f: &SampledField, params: &FrequencyParams, order: FdOrder) -> Result<f64> {
    u.check_compatible(f)?;
    let grid = &u.grid;
    let n = grid.ndim();
    if n < 2 {
        return invalid("residual needs at least two dimensions");
    }
    let r = order.radius();
    let ny = grid.points()[n - 1];
    let k0 = ny / 2;
    let strides = grid.strides();
    let coef = order.stencil();
    let h2: Vec<f64> = (0..n).map(|a| grid.spacing(a).powi(2)).collect();
    let shift = Complex64::new(params.lambda, params.eps);
    let res: Vec<Complex64> = (0..u.len())
        .into_par_iter()
        .map(|flat| {
            let idx = grid.unravel(flat);
            let k = idx[n - 1];
            if grid.in_shell(&idx)
                || k.abs_diff(k0) < r
                || idx.iter().zip(grid.points()).any(|(&i, &m)| i < r || i + r >= m)
            {
                return Complex64::new(0.0, 0.0);
            }
            let mut lap = Complex64::new(0.0, 0.0);
            for a in 0..n {
                let mut d = u.values[flat] * coef[0];
                for (s, c) in coef.iter().enumerate().skip(1) {
                    d += (u.values[flat + s * strides[a]] + u.values[flat - s * strides[a]]) * *c;
                }
                lap += d / h2[a];
            }
            let v = params.potential.at(grid.coord(n - 1, k));
            -lap + (v - shift) * u.values[flat] - f.values[flat]
        })
        .collect();
    lp_norm_slice(&res, grid.cell_volume(), 2.0)
}
