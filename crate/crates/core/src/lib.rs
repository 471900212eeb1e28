//! Numerical laboratory for the Helmholtz equation with a half-space step
//! potential and for singular Fourier multipliers supported on annuli.
//!
//! * [`spectral`] grids, sampled fields, scaled FFTs, discrete L^p norms and
//!   the quadrature engines.
//! * [`resolvent`] the step-potential solver: one-sided transforms, interface
//!   multipliers, perturbed and limiting-absorption solutions.
//! * [`annulus`] the operators T_{λ,α}, 𝒯_{λ,s}, S_λ, the kernel K_λ,
//!   oscillatory asymptotics and the unboundedness examples.
//! * [`normlab`] exponent regions, predicted decay exponents, empirical norm
//!   lower bounds and power-law fits.

pub mod annulus;
pub mod error;
pub mod normlab;
pub mod resolvent;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
