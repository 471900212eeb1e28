use num_complex::Complex64;

use super::field::{Domain, SampledField};

/// Tensor-product cubic Lagrange interpolation of a field at an arbitrary
/// point (physical or frequency coordinates, matching the field's domain).
/// Nodes outside the grid count as zero.
pub fn interp_cubic(field: &SampledField, point: &[f64]) -> Complex64 {
    let grid = &field.grid;
    let d = grid.ndim();
    let mut base = [0isize; 3];
    let mut w = [[0.0f64; 4]; 3];
    for axis in 0..d {
        let (origin, step) = match field.domain {
            Domain::Physical => (-grid.half_width()[axis], grid.spacing(axis)),
            Domain::Frequency => (grid.freq(axis, 0), grid.dual_spacing(axis)),
        };
        let t = (point[axis] - origin) / step;
        let i0 = t.floor();
        let s = t - i0;
        base[axis] = i0 as isize - 1;
        w[axis] = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
    }
    let strides = grid.strides();
    let mut acc = Complex64::new(0.0, 0.0);
    let combos = 4usize.pow(d as u32);
    'outer: for c in 0..combos {
        let mut flat = 0usize;
        let mut weight = 1.0;
        let mut rem = c;
        for axis in 0..d {
            let k = rem % 4;
            rem /= 4;
            let j = base[axis] + k as isize;
            if j < 0 || j >= grid.points()[axis] as isize {
                continue 'outer;
            }
            flat += j as usize * strides[axis];
            weight *= w[axis][k];
        }
        acc += field.values[flat] * weight;
    }
    acc
}
