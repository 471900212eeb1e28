use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Potential equal to `V1` on `{y > 0}` and `V2` on `{y < 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepPotential {
    pub v1: f64,
    pub v2: f64,
}

impl StepPotential {
    /// `V1 = V2` (constant potential) is accepted as the degenerate case.
    pub fn new(v1: f64, v2: f64) -> Result<Self> {
        if !(v1.is_finite() && v2.is_finite()) || v1 < v2 {
            return invalid(format!("step potential needs V1 >= V2, got V1={v1}, V2={v2}"));
        }
        Ok(Self { v1, v2 })
    }

    /// Value at height `y`; the interface line takes the upper value.
    pub fn at(&self, y: f64) -> f64 {
        if y >= 0.0 {
            self.v1
        } else {
            self.v2
        }
    }
}

/// Spectral parameter `λ`, absorption `ε ≥ 0` and the derived wave numbers
/// `μ_j = √(λ - V_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyParams {
    pub lambda: f64,
    pub eps: f64,
    pub potential: StepPotential,
    mu1: f64,
    mu2: f64,
}

impl FrequencyParams {
    pub fn new(lambda: f64, eps: f64, potential: StepPotential) -> Result<Self> {
        if !(lambda.is_finite() && lambda > potential.v1) {
            return invalid(format!("λ={lambda} must exceed V1={}", potential.v1));
        }
        if !(eps.is_finite() && eps >= 0.0) {
            return invalid(format!("ε={eps} must be finite and nonnegative"));
        }
        Ok(Self {
            lambda,
            eps,
            potential,
            mu1: (lambda - potential.v1).sqrt(),
            mu2: (lambda - potential.v2).sqrt(),
        })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn mu(&self, j: usize) -> f64 {
        if j == 1 {
            self.mu1
        } else {
            self.mu2
        }
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.lambda, eps, self.potential)
    }

    pub(crate) fn nu_pair(&self, xi: f64) -> (Complex64, Complex64) {
        (nu_of(self.mu1, xi, self.eps), nu_of(self.mu2, xi, self.eps))
    }
}

/// `ν_j(ξ)` for `|ξ| = xi_norm`: the root of `μ_j² - |ξ|² + iε` with
/// positive imaginary part when `ε > 0`, and for `ε = 0` the real root
/// inside the sphere and `i√(|ξ|² - μ_j²)` outside.
pub fn nu(xi_norm: f64, j: usize, params: &FrequencyParams) -> Complex64 {
    nu_of(params.mu(j), xi_norm, params.eps)
}

pub(crate) fn nu_of(mu: f64, xi: f64, eps: f64) -> Complex64 {
    if eps > 0.0 {
        Complex64::new((mu - xi) * (mu + xi), eps).sqrt()
    } else if xi <= mu {
        Complex64::new(((mu - xi) * (mu + xi)).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, ((xi - mu) * (xi + mu)).sqrt())
    }
}

/// `|∇ν_j(ξ)| = |ξ| / |ν_j(ξ)|` at `ε = 0`.
pub fn nu_gradient_norm(xi_norm: f64, j: usize, params: &FrequencyParams) -> f64 {
    let n = nu_of(params.mu(j), xi_norm, 0.0).norm();
    xi_norm / n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: f64) -> FrequencyParams {
        FrequencyParams::new(5.0, eps, StepPotential::new(1.0, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn branch_values() {
        let p = params(0.0);
        assert_eq!(nu(0.0, 1, &p), Complex64::new(2.0, 0.0));
        let xi = (p.mu2() * p.mu2() + 1.0).sqrt();
        assert!((nu(xi, 2, &p) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let p2 = params(2.0);
        assert!((nu(p2.mu1(), 1, &p2) - Complex64::new(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn epsilon_continuity_off_the_sphere() {
        for xi in [0.0, 0.7, 1.9, 2.1, 3.0, 10.0] {
            let limit = nu(xi, 1, &params(0.0));
            let close = nu(xi, 1, &params(1e-10));
            assert!((limit - close).norm() < 1e-8, "ξ={xi}");
            assert!(close.im > 0.0);
        }
    }

    #[test]
    fn validation() {
        assert!(StepPotential::new(0.0, 1.0).is_err());
        let v = StepPotential::new(1.0, 0.0).unwrap();
        assert!(FrequencyParams::new(0.5, 0.1, v).is_err());
        assert!(FrequencyParams::new(5.0, -0.1, v).is_err());
        assert_eq!(v.at(0.0), 1.0);
    }
}
