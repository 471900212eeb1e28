//! Step-potential resolvent: multipliers, solvers and diagnostics.

mod continuum;
mod estimates;
mod herglotz;
mod lines;
mod mountain;
mod multipliers;
mod params;
mod residual;
mod solve;

pub use estimates::{multiplier_decay, nu_sandwich, NuSandwich};
pub use herglotz::{herglotz, herglotz_with, SphereSampling};
pub use mountain::{mountain_pass_certificate, MountainPassCertificate};
pub use multipliers::{interface_data, interface_multiplier, BoundaryTrace, InterfaceData};
pub use params::{nu, nu_gradient_norm, FrequencyParams, StepPotential};
pub use residual::{residual, residual_with, FdOrder};
pub use solve::{
    boundary_traces, direct_multiplier_solution, frequency_decomposition, interface_correction, one_sided_ft,
    solve_lap, solve_perturbed, solve_perturbed_with, Branch, Evaluation, FrequencyDecomposition, Side,
};
