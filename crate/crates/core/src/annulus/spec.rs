use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Radial symbol `m(r)` on `[a, b]`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Symbol {
    Constant { re: f64, im: f64 },
    /// `Σ c_k r^k`.
    Polynomial { coefficients: Vec<f64> },
    /// Arbitrary function; not serializable.
    #[serde(skip)]
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl Symbol {
    pub fn one() -> Self {
        Symbol::Constant { re: 1.0, im: 0.0 }
    }

    pub fn custom(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Symbol::Custom(Arc::new(f))
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        match self {
            Symbol::Constant { re, im } => Complex64::new(*re, *im),
            Symbol::Polynomial { coefficients } => {
                Complex64::new(coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c), 0.0)
            }
            Symbol::Custom(f) => f(r),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Symbol::Constant { re, im } => re.is_finite() && im.is_finite(),
            Symbol::Polynomial { coefficients } => coefficients.iter().all(|c| c.is_finite()),
            Symbol::Custom(_) => true,
        }
    }
}

impl Default for Symbol {
    fn default() -> Self {
        Self::one()
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Constant { re, im } => write!(f, "Constant({re}+{im}i)"),
            Symbol::Polynomial { coefficients } => write!(f, "Polynomial({coefficients:?})"),
            Symbol::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Declared regularity of `m`. Advisory: no operation differentiates `m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Continuous,
    #[default]
    C1,
}

/// The multiplier `1_A(ξ) e^{-λ√(|ξ|²-a²)} (|ξ|²-a²)^{-α} m(|ξ|)` on the
/// annulus `A = {a ≤ |ξ| ≤ b} ⊂ ℝ^d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub lambda: f64,
    #[serde(default)]
    pub symbol: Symbol,
    #[serde(default)]
    pub smoothness: Smoothness,
}

impl MultiplierSpec {
    /// `m ≡ 1`.
    pub fn new(d: usize, a: f64, b: f64, alpha: f64, lambda: f64) -> Result<Self> {
        let spec = Self { d, a, b, alpha, lambda, symbol: Symbol::one(), smoothness: Smoothness::C1 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_symbol(mut self, symbol: Symbol, smoothness: Smoothness) -> Self {
        self.symbol = symbol;
        self.smoothness = smoothness;
        self
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..self.clone() }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d == 1 || self.d == 2) {
            return invalid(format!("annulus dimension {} not in {{1, 2}}", self.d));
        }
        if !(self.a > 0.0 && self.b > self.a && self.b.is_finite()) {
            return invalid(format!("annulus radii must satisfy 0 < a < b, got a={} b={}", self.a, self.b));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return invalid(format!("order α={} outside [0, 1)", self.alpha));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return invalid(format!("damping λ={} must be finite and nonnegative", self.lambda));
        }
        if !self.symbol.is_finite() {
            return invalid("symbol coefficients must be finite");
        }
        Ok(())
    }

    /// `W(a + t)` for the order `s`, with `t = |ξ| - a` passed exactly.
    /// Zero outside `[0, b - a]`.
    pub(crate) fn weight(&self, s: Complex64, t: f64) -> Complex64 {
        if !(0.0..=self.b - self.a).contains(&t) {
            return Complex64::new(0.0, 0.0);
        }
        if t == 0.0 {
            return if s == Complex64::new(0.0, 0.0) {
                self.symbol.eval(self.a)
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            };
        }
        self.weight_regular(s, t) * t.powf(-s.re)
    }

    /// `W(a + t) · t^{Re s}`, bounded as `t → 0`; the factor a graded rule
    /// with exponent `Re s` expects.
    pub(crate) fn weight_regular(&self, s: Complex64, t: f64) -> Complex64 {
        let (a, r) = (self.a, self.a + t);
        let q = t * (2.0 * a + t);
        let damp = (-self.lambda * q.sqrt()).exp();
        let mut w = Complex64::new(2.0 * a + t, 0.0).powc(-s) * damp * self.symbol.eval(r);
        if s.im != 0.0 && t > 0.0 {
            w *= Complex64::new(0.0, -s.im * t.ln()).exp();
        }
        w
    }
}

/// Checks the strip `0 ≤ Re s < 1`.
pub(crate) fn check_order(s: Complex64) -> Result<()> {
    if !(s.re >= 0.0 && s.re < 1.0 && s.im.is_finite()) {
        return invalid(format!("order s={s} outside the strip 0 ≤ Re s < 1"));
    }
    Ok(())
}
