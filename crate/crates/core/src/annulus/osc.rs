//! Large-`c` behaviour of `∫₀¹ e^{icρ} a(ρ) ρ^{-δ} dρ`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::quad::adaptive;
use crate::spectral::{singular_quad, QuadratureSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Split point between quadrature and the asymptotic tail of `C_δ`.
const TAIL_START: f64 = 40.0;
const PHASE_PER_CHUNK: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscAsymptotics {
    pub integral: Complex64,
    pub leading: Complex64,
    pub remainder: f64,
}

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-12, ..QuadratureSpec::default() }
}

/// `∫₀¹ e^{icρ} φ(ρ) ρ^{-δ} dρ`: graded rule on the first few
/// oscillations, then chunks of bounded phase.
pub(crate) fn oscillatory(phi: &dyn Fn(f64) -> Complex64, delta: f64, c: f64) -> Result<Complex64> {
    let t1 = (PHASE_PER_CHUNK / c.abs().max(1e-300)).min(1.0);
    let f = |r: f64| phi(r) * Complex64::from_polar(1.0, c * r);
    let mut total = singular_quad(&|u| f(t1 * u), delta, &quad_spec())? * t1.powf(1.0 - delta);
    let rest = 1.0 - t1;
    if rest > 0.0 {
        let chunks = (rest * c.abs() / PHASE_PER_CHUNK).ceil().max(1.0) as usize;
        let w = rest / chunks as f64;
        let full = |r: f64| f(r) * r.powf(-delta);
        for k in 0..chunks {
            let lo = t1 + k as f64 * w;
            total += adaptive(&full, lo, lo + w, 1e-16)?;
        }
    }
    Ok(total)
}

/// `C_δ = ∫₀^∞ e^{iρ} ρ^{-δ} dρ`, computed once per `δ` and cached.
pub fn c_delta(delta: f64) -> Result<Complex64> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("C_δ needs 0 < δ < 1, got {delta}"));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, Complex64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("C_δ cache poisoned").get(&delta.to_bits()) {
        return Ok(*v);
    }
    // ∫₀^R = R^{1-δ} ∫₀¹ e^{iRu} u^{-δ} du.
    let head = oscillatory(&|_| Complex64::new(1.0, 0.0), delta, TAIL_START)? * TAIL_START.powf(1.0 - delta);
    let value = head + tail(delta, TAIL_START);
    cache.lock().expect("C_δ cache poisoned").insert(delta.to_bits(), value);
    Ok(value)
}

/// `∫_R^∞ e^{iρ} ρ^{-s} dρ = i e^{iR} R^{-s} Σ_k (-i)^k (s)_k R^{-k}`,
/// the repeated integration by parts, summed to its smallest term.
fn tail(s: f64, r: f64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..200 {
        let next = term * (-I) * ((s + k as f64) / r);
        if next.norm() >= term.norm() || next.norm() < 1e-18 {
            break;
        }
        sum += next;
        term = next;
    }
    I * Complex64::from_polar(r.powf(-s), r) * sum
}

/// Integral, leading asymptotic term and remainder of
/// `∫₀¹ e^{icρ} a(ρ) ρ^{-δ} dρ`. For `δ > 0` the leading term is
/// `a(0) c^{δ-1} C_δ`; for `δ = 0` it is `(a(1) e^{ic} - a(0))/(ic)`.
pub fn osc_asymptotics(a_fn: &dyn Fn(f64) -> Complex64, delta: f64, c: f64) -> Result<OscAsymptotics> {
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("frequency c={c} must be positive"));
    }
    if !(0.0..1.0).contains(&delta) {
        return invalid(format!("exponent δ={delta} outside [0, 1)"));
    }
    let integral = oscillatory(a_fn, delta, c)?;
    let leading = if delta > 0.0 {
        a_fn(0.0) * c.powf(delta - 1.0) * c_delta(delta)?
    } else {
        (a_fn(1.0) * Complex64::from_polar(1.0, c) - a_fn(0.0)) / (I * c)
    };
    Ok(OscAsymptotics { integral, leading, remainder: (integral - leading).norm() })
}
