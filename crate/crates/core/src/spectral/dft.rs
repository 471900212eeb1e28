use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use super::field::{Domain, SampledField};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Trapezoidal discretization of the symmetric Fourier transform
/// `𝔉 g(ξ) = (2π)^{-d/2} ∫ g(x) e^{-i x·ξ} dx` on the dual grid, or of its
/// inverse. The grids are centred, so the unnormalized FFT is sandwiched
/// between `(-1)^j` phase flips.
pub fn dft(field: &SampledField, direction: Direction) -> Result<SampledField> {
    let expected = match direction {
        Direction::Forward => Domain::Physical,
        Direction::Inverse => Domain::Frequency,
    };
    if field.domain != expected {
        return invalid(format!("{direction:?} transform applied to a {:?} field", field.domain));
    }
    let mut values = field.values.clone();
    let axes: Vec<usize> = (0..field.grid.ndim()).collect();
    let steps: Vec<f64> = axes
        .iter()
        .map(|&a| match direction {
            Direction::Forward => field.grid.spacing(a),
            Direction::Inverse => field.grid.dual_spacing(a),
        })
        .collect();
    transform_axes(&mut values, field.grid.points(), &axes, &steps, direction);
    let domain = match direction {
        Direction::Forward => Domain::Frequency,
        Direction::Inverse => Domain::Physical,
    };
    Ok(SampledField { grid: field.grid.clone(), values, domain })
}

/// Applies the centred, scaled 1-D transform along each listed axis of a
/// row-major array. `steps[i]` is the quadrature spacing for `axes[i]`
/// (physical spacing for forward transforms, dual spacing for inverse).
pub fn transform_axes(
    values: &mut [Complex64],
    shape: &[usize],
    axes: &[usize],
    steps: &[f64],
    direction: Direction,
) {
    let mut planner = FftPlanner::<f64>::new();
    for (&axis, &step) in axes.iter().zip(steps) {
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let fft = planner.plan_fft(
            n,
            match direction {
                Direction::Forward => FftDirection::Forward,
                Direction::Inverse => FftDirection::Inverse,
            },
        );
        let scale = step / (2.0 * PI).sqrt();
        values.par_chunks_mut(n * stride).for_each(|block| {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            for i in 0..stride {
                for (j, v) in line.iter_mut().enumerate() {
                    let x = block[j * stride + i];
                    *v = if j % 2 == 0 { x } else { -x };
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    let s = if k % 2 == 0 { scale } else { -scale };
                    block[k * stride + i] = v * s;
                }
            }
        });
    }
}
