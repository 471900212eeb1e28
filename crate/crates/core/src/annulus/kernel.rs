//! The convolution kernel `K_λ = (2π)^{-d} ∫_A e^{ix·ξ} W(ξ) dξ` of
//! `T_{λ,α}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::spec::MultiplierSpec;
use crate::error::{invalid, Result};
use crate::spectral::quad::adaptive;
use crate::spectral::{singular_quad, QuadratureSpec};

/// Radial phase allowed on one chunk of the oscillatory part.
const PHASE_PER_CHUNK: f64 = 8.0;

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-11, ..QuadratureSpec::default() }
}

/// `K_λ(z)`. In `d = 1` this is `(1/π) ∫_a^b cos(ξz) W(ξ) dξ`; in `d = 2`
/// the radial profile `(1/2π) ∫_a^b r W(r) J₀(r|z|) dr` at `|z|`, with `J₀`
/// from its angular integral.
pub fn kernel_k(spec: &MultiplierSpec, z: f64) -> Result<Complex64> {
    spec.validate()?;
    if !z.is_finite() {
        return invalid("kernel argument must be finite");
    }
    let z = z.abs();
    let len = spec.b - spec.a;
    let s = Complex64::new(spec.alpha, 0.0);
    // Integrand in t = ξ - a, without the factor t^{-α}.
    let smooth = |t: f64| {
        let r = spec.a + t;
        let w = spec.weight_regular(s, t);
        match spec.d {
            1 => w * (r * z).cos() / PI,
            _ => w * r * bessel_j0(r * z) / (2.0 * PI),
        }
    };
    // Singular part on [0, t1] through the graded rule, oscillatory rest
    // in chunks of bounded phase.
    let t1 = (PHASE_PER_CHUNK / z.max(1e-300)).min(len);
    let scale = t1.powf(1.0 - spec.alpha);
    let mut total = singular_quad(&|u| smooth(t1 * u), spec.alpha, &quad_spec())? * scale;
    let rest = len - t1;
    if rest > 0.0 {
        let chunks = (rest * z / PHASE_PER_CHUNK).ceil().max(1.0) as usize;
        let w = rest / chunks as f64;
        let full = |t: f64| smooth(t) * t.powf(-spec.alpha);
        for c in 0..chunks {
            let lo = t1 + c as f64 * w;
            total += adaptive(&full, lo, lo + w, 1e-15)?;
        }
    }
    Ok(total)
}

/// `J₀(x) = (1/2π) ∫_0^{2π} cos(x cos θ) dθ` by the trapezoidal rule,
/// which converges geometrically once the node count exceeds `x`.
pub(crate) fn bessel_j0(x: f64) -> f64 {
    let n = x.abs().ceil() as usize + 40;
    let mut s = 0.0;
    for k in 0..n {
        let th = 2.0 * PI * (k as f64 + 0.5) / n as f64;
        s += (x * th.cos()).cos();
    }
    s / n as f64
}
