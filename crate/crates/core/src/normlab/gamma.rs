//! Predicted decay exponents: `β` for the restriction-type operator `S_λ`
//! and `γ` for `T_{λ,α}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exponents::{add, div, int, mul, q, sub, to_f64, ExponentPair, Q};
use super::regions::{inv_p_star, region_membership, RegionId};
use crate::error::{invalid, Result};

/// The "sufficiently small" ε used wherever a formula carries one.
pub const GAMMA_EPS: f64 = 1e-6;

/// `β(p, s)` in dimension `d`: the minimum of
/// `(d-1)/p - (d-1)/s'`, `2((d+1)/p - (d-1)/s' - 1)/p_*' - ε`,
/// `(2/p_*')(1/p - 1/2)/(1/p_* - 1/2) - ε` and `2/p'`; zero for `d = 1`.
/// With `restriction_conjecture` the exponent `p_*` becomes `2d/(d+1)`.
pub fn compute_beta(inv_p: Q, inv_s: Q, d: u32, eps: Q, restriction_conjecture: bool) -> Result<f64> {
    let one = Q::one();
    let half = q(1, 2);
    if !(inv_p <= one && inv_p >= half) {
        return invalid(format!("1/p = {inv_p} outside [1/2, 1]"));
    }
    let inv_p_dual = sub(one, inv_p)?;
    if !(inv_s <= one && inv_s >= inv_p_dual) {
        return invalid(format!("1/s = {inv_s} outside [1/p', 1] = [{inv_p_dual}, 1]"));
    }
    if d == 0 {
        return invalid("dimension must be positive");
    }
    if eps <= Q::zero() {
        return invalid("ε must be positive");
    }
    if d == 1 {
        return Ok(0.0);
    }
    let dd = int(d as i64);
    let inv_ps = if restriction_conjecture { q(d as i64 + 1, 2 * d as i64) } else { inv_p_star(d) };
    let inv_ps_dual = sub(one, inv_ps)?;
    let inv_s_dual = sub(one, inv_s)?;
    let dm1 = sub(dd, one)?;
    let dp1 = add(dd, one)?;

    let t1 = sub(mul(dm1, inv_p)?, mul(dm1, inv_s_dual)?)?;
    let inner = sub(sub(mul(dp1, inv_p)?, mul(dm1, inv_s_dual)?)?, one)?;
    let t2 = sub(mul(mul(int(2), inner)?, inv_ps_dual)?, eps)?;
    let t3 = sub(div(mul(mul(int(2), inv_ps_dual)?, sub(inv_p, half)?)?, sub(inv_ps, half)?)?, eps)?;
    let t4 = mul(int(2), inv_p_dual)?;
    Ok(to_f64(t1.min(t2).min(t3).min(t4)))
}

/// Which regime of the `γ` formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaCase {
    A,
    B,
    C,
    D1,
}

/// `γ = rational + (ε if with_eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaPrediction {
    pub gamma: f64,
    pub case: GammaCase,
    /// Exact part of `γ`.
    pub rational: Q,
    /// Whether `γ` carries `+ε`.
    pub with_eps: bool,
}

/// Predicted exponent `γ` in `‖T_{λ,α}‖_{p→q} ≲ (1+λ)^γ`.
///
/// For `d ≥ 2` the pair must lie in `D_α`; the cases are
/// (a) `(p,q) ∈ 𝒟`: `γ = 2α - 2`;
/// (b) `1/p - 1/q < min{2/(d+1), (2d/(d+1))(2m-1)}`: `γ = 2α - (d+1)(1/p - 1/q)`;
/// (c) `m ≤ (d+1)/(2d)` and `1/p - 1/q ≥ (2d/(d+1))(2m-1)`:
/// `γ = 2α - (d+1)(1/p - 1/q)` when `2dm - (d+1)(1/p - 1/q) ≥ d - 1`,
/// otherwise `γ = 2α + d - 1 - 2dm + ε`,
/// with `m = min{1/p, 1 - 1/q}`. For `d = 1` the pair must satisfy
/// `1/p - 1/q ≥ α`, `1/p > α`, `1/q < 1 - α` and `γ = 2α - 2/p + 2/q`.
pub fn predicted_gamma(pair: &ExponentPair, d: u32, alpha: Q) -> Result<GammaPrediction> {
    let (rational, with_eps, case) = gamma_exact(pair, d, alpha)?;
    let gamma = to_f64(rational) + if with_eps { GAMMA_EPS } else { 0.0 };
    Ok(GammaPrediction { gamma, case, rational, with_eps })
}

fn gamma_exact(pair: &ExponentPair, d: u32, alpha: Q) -> Result<(Q, bool, GammaCase)> {
    let one = Q::one();
    let gap = pair.gap();
    let two_alpha = mul(int(2), alpha)?;
    if d == 1 {
        if !region_membership(pair, &RegionId::AnnulusLine { alpha })? {
            return invalid(format!("{pair} is outside the one-dimensional range for α = {alpha}"));
        }
        return Ok((sub(two_alpha, mul(int(2), gap)?)?, false, GammaCase::D1));
    }
    if d == 0 {
        return invalid("dimension must be positive");
    }
    if !region_membership(pair, &RegionId::DAlphaAnnulus { d, alpha })? {
        return invalid(format!("{pair} is outside D_α for d = {d}, α = {alpha}"));
    }
    let dd = int(d as i64);
    let dp1 = add(dd, one)?;
    let m = pair.inv_p.min(sub(one, pair.inv_q)?);
    // Case (a): (p, q) ∈ 𝒟 without the upper gap bound.
    if pair.inv_p > div(dp1, mul(int(2), dd)?)?
        && pair.inv_q < div(sub(dd, one)?, mul(int(2), dd)?)?
        && gap >= div(int(2), dp1)?
    {
        return Ok((sub(two_alpha, int(2))?, false, GammaCase::A));
    }
    let slope = div(mul(int(2), dd)?, dp1)?;
    let threshold = mul(slope, sub(mul(int(2), m)?, one)?)?;
    let linear = sub(two_alpha, mul(dp1, gap)?)?;
    if gap < div(int(2), dp1)?.min(threshold) {
        return Ok((linear, false, GammaCase::B));
    }
    if m <= div(dp1, mul(int(2), dd)?)? && gap >= threshold {
        let two_dm = mul(mul(int(2), dd)?, m)?;
        return if sub(two_dm, mul(dp1, gap)?)? >= sub(dd, one)? {
            Ok((linear, false, GammaCase::C))
        } else {
            Ok((sub(add(two_alpha, sub(dd, one)?)?, two_dm)?, true, GammaCase::C))
        };
    }
    invalid(format!("{pair} falls in none of the cases (a), (b), (c)"))
}

/// Outcome of the check `γ ≤ 2α - 2 + 1/p - 1/q` (strict if `p = 1` or
/// `q = ∞`) for a pair with `1/p - 1/q ≥ 2/(d+2)`; `None` when the pair is
/// outside that range. The comparison is exact, with `ε` taken
/// arbitrarily small.
pub fn gamma_conditions(pair: &ExponentPair, d: u32, alpha: Q) -> Result<Option<bool>> {
    if pair.gap() < q(2, d as i64 + 2) {
        return Ok(None);
    }
    let (rational, with_eps, _) = gamma_exact(pair, d, alpha)?;
    let bound = add(sub(mul(int(2), alpha)?, int(2))?, pair.gap())?;
    let strict = pair.p_is_one() || pair.q_is_infinite();
    Ok(Some(if with_eps || strict { rational < bound } else { rational <= bound }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: Q, b: Q) -> ExponentPair {
        ExponentPair::new(a, b).unwrap()
    }

    #[test]
    fn beta_examples() {
        let e = q(1, 1_000_000);
        assert_eq!(compute_beta(q(2, 3), q(1, 2), 1, e, false).unwrap(), 0.0);
        // d = 2, p = s = 1: terms {1, 1-ε, 1-ε, 0}.
        assert_eq!(compute_beta(int(1), int(1), 2, e, false).unwrap(), 0.0);
        // d = 2, p = s = 2: the second and third terms are -ε.
        let b = compute_beta(q(1, 2), q(1, 2), 2, q(1, 100), false).unwrap();
        assert!((b + 0.01).abs() < 1e-15);
        assert!(compute_beta(q(1, 3), q(1, 2), 2, e, false).is_err());
        assert!(compute_beta(q(1, 2), q(1, 3), 2, e, false).is_err());
    }

    #[test]
    fn gamma_examples() {
        let g = predicted_gamma(&pair(q(7, 8), q(1, 8)), 2, q(1, 4)).unwrap();
        assert_eq!(g.case, GammaCase::A);
        assert_eq!(g.gamma, -1.5);
        let g = predicted_gamma(&pair(q(1, 2), q(1, 2)), 1, q(1, 2));
        // 1/p - 1/q = 0 < α is outside the one-dimensional range.
        assert!(g.is_err());
        let g = predicted_gamma(&pair(q(3, 4), q(1, 4)), 1, q(1, 2)).unwrap();
        assert_eq!((g.case, g.gamma), (GammaCase::D1, 0.0));
    }

    #[test]
    fn case_c_second_branch() {
        // m = 10/19, 2dm - 3(1/p - 1/q) < 1.
        let e = pair(q(37, 38), q(9, 19));
        let g = predicted_gamma(&e, 2, q(1, 10)).unwrap();
        assert_eq!(g.case, GammaCase::C);
        assert!(g.with_eps);
        assert_eq!(g.rational, q(1, 5) + int(1) - q(40, 19));
        assert_eq!(gamma_conditions(&e, 2, q(1, 10)).unwrap(), Some(false));
    }
}
