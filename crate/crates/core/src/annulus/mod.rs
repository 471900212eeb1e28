//! Singular Fourier multipliers supported on an annulus
//! `A = {a ≤ |ξ| ≤ b} ⊂ ℝ^d`, `d ∈ {1, 2}`.
//!
//! `T_{λ,α}` multiplies by `e^{-λ√(|ξ|²-a²)} (|ξ|²-a²)^{-α} m(|ξ|)` on `A`,
//! `𝒯_{λ,s}` is the analytic family in the order, and `S_λ` restricts the
//! damped Fourier transform to `A`. The kernel `K_λ`, the oscillatory
//! integral asymptotics behind its decay and the unboundedness examples
//! complete the module.

mod apply;
mod counterexample;
mod kernel;
mod osc;
mod spec;
mod weights;

pub use apply::{
    annulus_indices, apply_s, apply_s_adjoint, apply_t, apply_t_at, apply_t_family, apply_t_with, apply_weights,
    family_prefactor, restriction_norm, AnnulusSamples,
};
pub use counterexample::{counterexample_image, make_counterexample, periodic_counterexample, CounterexampleId};
pub use kernel::kernel_k;
pub use osc::{c_delta, osc_asymptotics, OscAsymptotics};
pub use spec::{MultiplierSpec, Smoothness, Symbol};
pub use weights::multiplier_weights;
