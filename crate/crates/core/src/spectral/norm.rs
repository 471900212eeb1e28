use num_complex::Complex64;

use super::field::{Domain, SampledField};
use crate::error::{invalid, Result};

const BLOCK: usize = 32;

/// Pairwise (tree) summation with a fixed split, so the rounding pattern
/// depends only on the length of the input.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

pub fn pairwise_sum_complex(v: &[Complex64]) -> Complex64 {
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum_complex(&v[..mid]) + pairwise_sum_complex(&v[mid..])
}

/// Discrete L^p norm `(Σ |v_i|^p Π h_j)^{1/p}`; `p = ∞` gives the maximum.
/// Frequency-domain fields use the dual spacing.
pub fn lp_norm(field: &SampledField, p: f64) -> Result<f64> {
    let cell = match field.domain {
        Domain::Physical => field.grid.cell_volume(),
        Domain::Frequency => field.grid.dual_cell_volume(),
    };
    lp_norm_slice(&field.values, cell, p)
}

/// [`lp_norm`] on raw samples with quadrature weight `cell`.
pub fn lp_norm_slice(values: &[Complex64], cell: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return invalid(format!("L^p exponent {p} below 1"));
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if p.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    // Scale by the maximum so large exponents neither overflow nor underflow.
    let terms: Vec<f64> = values.iter().map(|v| (v.norm() / max).powf(p)).collect();
    Ok(max * (pairwise_sum(&terms) * cell).powf(1.0 / p))
}

/// `Σ f_i conj(g_i) · cell`, the discrete L² inner product.
pub fn inner(f: &SampledField, g: &SampledField) -> Result<Complex64> {
    f.check_compatible(g)?;
    let cell = match f.domain {
        Domain::Physical => f.grid.cell_volume(),
        Domain::Frequency => f.grid.dual_cell_volume(),
    };
    let terms: Vec<Complex64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).collect();
    Ok(pairwise_sum_complex(&terms) * cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    #[test]
    fn indicator_two_norm() {
        let grid = GridSpec::cube(1, 1024, 8.0).unwrap();
        let h = grid.spacing(0);
        let f = SampledField::from_fn(grid, Domain::Physical, |x| {
            Complex64::new(if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 }, 0.0)
        });
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() <= h);
    }

    #[test]
    fn exponential_one_norm() {
        let grid = GridSpec::cube(1, 4096, 32.0).unwrap();
        let f = SampledField::from_fn(grid, Domain::Physical, |x| {
            Complex64::new((-x[0].abs()).exp(), 0.0)
        });
        // The Riemann sum of the kinked profile is h·coth(h/2) = 2 + h²/6 + O(h⁴).
        let h: f64 = 1.0 / 64.0;
        let v = lp_norm(&f, 1.0).unwrap();
        assert!((v - h / (h / 2.0).tanh()).abs() < 1e-12);
        assert!((v - 2.0).abs() < 1.01 * h * h / 6.0);
    }

    #[test]
    fn sup_norm_and_bad_exponent() {
        let grid = GridSpec::cube(1, 8, 1.0).unwrap();
        let mut f = SampledField::zeros(grid, Domain::Physical);
        f.values[3] = Complex64::new(3.0, 4.0);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 5.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499500.0);
    }
}
