//! Exponent bookkeeping and empirical norms.
//!
//! Regions of admissible `(1/p, 1/q)` are decided in exact rational
//! arithmetic. The predicted exponents `β` and `γ` follow the case analysis
//! of the restriction and multiplier estimates, and the estimator measures
//! `‖op h‖_q/‖h‖_p` over deterministic test families so sweeps in `λ` can
//! be fitted against `(1 + λ)^γ`.

mod estimate;
mod exponents;
mod fit;
mod gamma;
mod regions;

pub use estimate::{
    estimate_norm_lower, norm_ratio, EstimateMethod, FnOperator, FourierMultiplier, LinearOperator,
    OperatorNormEstimate, Restriction, TestFamily,
};
pub use exponents::{farey, parse_rational, rational_from_f64, ExponentPair, Q};
pub use fit::{fit_power_law, fit_scaling_exponent, linear_fit, local_maxima, ScalingFit};
pub use gamma::{compute_beta, gamma_conditions, predicted_gamma, GammaCase, GammaPrediction, GAMMA_EPS};
pub use regions::{inv_p_star, inv_q_star, region_membership, RegionId};
