//! Inputs on which `T_{0,α}` fails to be bounded outside its exponent
//! range, in one dimension with `A = {1 ≤ |ξ| ≤ 2}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::MultiplierSpec;
use crate::error::{invalid, Result};
use crate::spectral::{dft, lp_norm_slice, Direction, Domain, GridSpec, SampledField, SingularRule};

const PHASE_PER_PANEL: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CounterexampleId {
    /// `f = √(2π) 𝔉^{-1}(1_{[1,2]} (ξ² - 1)^{-β})`.
    BetaFamily { beta: f64 },
    /// As `BetaFamily` with the spectrum cut to `[1 + ε, 2]`.
    EpsFamily { beta: f64, eps: f64 },
    /// `f_k(y) ∝ 1_{[1,k+1]}(y) y^{-α} e^{iy}`, normalized in `L^{1/α}`.
    LogFamily { k: u64, alpha: f64 },
}

impl CounterexampleId {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CounterexampleId::BetaFamily { beta } => check_beta(beta),
            CounterexampleId::EpsFamily { beta, eps } => {
                check_beta(beta)?;
                if !(eps > 0.0 && eps < 1.0) {
                    return invalid(format!("cutoff ε={eps} outside (0, 1)"));
                }
                Ok(())
            }
            CounterexampleId::LogFamily { k, alpha } => {
                if k < 1 {
                    return invalid("log family needs k ≥ 1");
                }
                if !(0.0..1.0).contains(&alpha) {
                    return invalid(format!("order α={alpha} outside [0, 1)"));
                }
                Ok(())
            }
        }
    }

    /// Start of the spectral support and the exponent there.
    fn spectrum(&self) -> Option<(f64, f64)> {
        match *self {
            CounterexampleId::BetaFamily { beta } => Some((0.0, beta)),
            CounterexampleId::EpsFamily { beta, eps } => Some((eps, beta)),
            CounterexampleId::LogFamily { .. } => None,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return invalid(format!("exponent β={beta} outside [0, 1)"));
    }
    Ok(())
}

/// `∫_{1+t0}^2 e^{ixξ} (ξ² - 1)^{-β} W(ξ) dξ` at each point, where `W`
/// is the multiplier of `spec` (absent for the field itself).
fn spectral_synthesis(
    t0: f64,
    beta: f64,
    multiplier: Option<&MultiplierSpec>,
    points: &[f64],
) -> Vec<Complex64> {
    let extent = points.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let len = 1.0 - t0;
    let width = (PHASE_PER_PANEL / extent).min(0.25 * len);
    let alpha = multiplier.map_or(0.0, |s| s.alpha);
    let s = Complex64::new(alpha, 0.0);
    // With t0 = 0 both singularities sit at the rule's anchor.
    let delta = if t0 == 0.0 { beta + alpha } else { 0.0 };
    let rule = SingularRule::new(0.0, len, delta, width, 16);
    let coef: Vec<(f64, Complex64)> = rule
        .offsets
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| {
            let t = t0 + u;
            let base = if t0 == 0.0 { (2.0 + t).powf(-beta) } else { (t * (2.0 + t)).powf(-beta) };
            let m = match multiplier {
                None => Complex64::new(1.0, 0.0),
                Some(spec) if t0 == 0.0 => spec.weight_regular(s, t),
                Some(spec) => spec.weight(s, t),
            };
            (1.0 + t, m * base * w)
        })
        .collect();
    points
        .par_iter()
        .map(|&x| coef.iter().map(|(xi, c)| c * Complex64::from_polar(1.0, x * xi)).sum())
        .collect()
}

/// Samples the counterexample on a one-dimensional grid. Beta and ε
/// families are evaluated from their spectra by quadrature; the log family
/// is scaled so its discrete `L^{1/α}` norm is exactly one.
pub fn make_counterexample(id: &CounterexampleId, grid: &GridSpec) -> Result<SampledField> {
    id.validate()?;
    if grid.ndim() != 1 {
        return invalid("counterexamples live on one-dimensional grids");
    }
    let xs: Vec<f64> = (0..grid.points()[0]).map(|j| grid.coord(0, j)).collect();
    let values = match *id {
        CounterexampleId::LogFamily { k, alpha } => {
            let top = k as f64 + 1.0;
            if xs.last().copied().unwrap_or(0.0) < top {
                return invalid(format!("grid ends before y = {top}"));
            }
            let raw: Vec<Complex64> = xs
                .iter()
                .map(|&y| {
                    if (1.0..=top).contains(&y) {
                        Complex64::from_polar(y.powf(-alpha), y)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let p = if alpha == 0.0 { f64::INFINITY } else { 1.0 / alpha };
            let norm = lp_norm_slice(&raw, grid.spacing(0), p)?;
            raw.into_iter().map(|v| v / norm).collect()
        }
        _ => {
            let (t0, beta) = id.spectrum().expect("spectral family");
            spectral_synthesis(t0, beta, None, &xs)
        }
    };
    SampledField::new(grid.clone(), values, Domain::Physical)
}

/// `∫_0^t (u(2+u))^{-β} du`.
fn primitive(beta: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    SingularRule::new(0.0, t, beta, t, 12).integrate(|u| Complex64::new((2.0 + u).powf(-beta), 0.0)).re
}

/// The beta and ε families as periodic fields: `𝔉f = √(2π)(ξ² - 1)^{-β}`
/// on `[1 + ε, 2]`, averaged over each dual-grid cell that meets an end
/// of the support or the singularity, then transformed back. The log
/// family is returned as by [`make_counterexample`].
pub fn periodic_counterexample(id: &CounterexampleId, grid: &GridSpec) -> Result<SampledField> {
    id.validate()?;
    if grid.ndim() != 1 {
        return invalid("counterexamples live on one-dimensional grids");
    }
    let Some((t0, beta)) = id.spectrum() else {
        return make_counterexample(id, grid);
    };
    let dxi = grid.dual_spacing(0);
    let scale = (2.0 * std::f64::consts::PI).sqrt();
    let values: Vec<Complex64> = (0..grid.points()[0])
        .into_par_iter()
        .map(|k| {
            let xi = grid.freq(0, k);
            // Cell in t = ξ - 1, clipped to the support [t0, 1].
            let (lo, hi) = ((xi - 1.0 - 0.5 * dxi).max(t0), (xi - 1.0 + 0.5 * dxi).min(1.0));
            if lo >= hi {
                return Complex64::new(0.0, 0.0);
            }
            let t = xi - 1.0;
            let v = if lo == t - 0.5 * dxi && hi == t + 0.5 * dxi && lo > 2.0 * dxi {
                (t * (2.0 + t)).powf(-beta)
            } else {
                (primitive(beta, hi) - primitive(beta, lo)) / dxi
            };
            Complex64::new(scale * v, 0.0)
        })
        .collect();
    let hat = SampledField::new(grid.clone(), values, Domain::Frequency)?;
    dft(&hat, Direction::Inverse)
}

/// `T_{λ,α} f` at `points` for the beta and ε families, from the exact
/// spectrum of `f`. Needs `A = {1 ≤ |ξ| ≤ 2}` in one dimension and, for
/// the beta family, `α + β < 1`.
pub fn counterexample_image(id: &CounterexampleId, spec: &MultiplierSpec, points: &[f64]) -> Result<Vec<Complex64>> {
    id.validate()?;
    spec.validate()?;
    if spec.d != 1 || spec.a != 1.0 || spec.b != 2.0 {
        return invalid("counterexample images need the annulus 1 ≤ |ξ| ≤ 2 in one dimension");
    }
    let Some((t0, beta)) = id.spectrum() else {
        return invalid("the log family has no closed-form spectrum; use apply_t_at");
    };
    if t0 == 0.0 && spec.alpha + beta >= 1.0 {
        return invalid(format!("α + β = {} ≥ 1: T f is not defined; use the ε family", spec.alpha + beta));
    }
    Ok(spectral_synthesis(t0, beta, Some(spec), points))
}
