//! Admissible exponent sets, evaluated exactly in `(1/p, 1/q)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exponents::{add, div, int, mul, q, sub, ExponentPair, Q};
use crate::error::{invalid, Result};

/// A named exponent region with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "region")]
pub enum RegionId {
    /// Resolvent region `𝒟` in dimension `n ≥ 2`.
    #[serde(rename = "D_n")]
    DN { n: u32 },
    /// The smaller resolvent region `𝒟̃`, equal to `𝒟` for `n = 2`.
    #[serde(rename = "D_tilde_n")]
    DTildeN { n: u32 },
    /// `D_α` for the annulus multipliers in dimension `d ≥ 2`;
    /// `D₀ = [1,2] × [2,∞]`.
    #[serde(rename = "D_alpha_annulus")]
    DAlphaAnnulus { d: u32, alpha: Q },
    /// Boundedness range of negative-order Bochner-Riesz means.
    #[serde(rename = "cal_D_alpha")]
    CalDAlpha { d: u32, alpha: Q },
    /// Large-frequency resolvent estimate hypotheses.
    #[serde(rename = "largefreq_P38")]
    LargeFreq { n: u32 },
    /// Small-frequency resolvent estimate hypotheses.
    #[serde(rename = "smallfreq_P35")]
    SmallFreq { n: u32 },
    /// One-dimensional range `1/p - 1/q ≥ α`, `1/p > α`, `1/q < 1 - α`.
    #[serde(rename = "annulus_d1")]
    AnnulusLine { alpha: Q },
}

impl RegionId {
    pub fn validate(&self) -> Result<()> {
        let alpha_ok = |a: Q| a >= Q::zero() && a < Q::one();
        match *self {
            RegionId::DN { n } | RegionId::DTildeN { n } | RegionId::LargeFreq { n } | RegionId::SmallFreq { n } => {
                if n < 2 {
                    return invalid(format!("dimension n = {n} below 2"));
                }
            }
            RegionId::DAlphaAnnulus { d, alpha } => {
                if d < 2 {
                    return invalid(format!("D_α needs d ≥ 2, got {d}"));
                }
                if !alpha_ok(alpha) {
                    return invalid(format!("α = {alpha} outside [0, 1)"));
                }
            }
            RegionId::CalDAlpha { d, alpha } => {
                if d < 1 {
                    return invalid("dimension must be positive");
                }
                if !alpha_ok(alpha) {
                    return invalid(format!("α = {alpha} outside [0, 1)"));
                }
            }
            RegionId::AnnulusLine { alpha } => {
                if !alpha_ok(alpha) {
                    return invalid(format!("α = {alpha} outside [0, 1)"));
                }
            }
        }
        Ok(())
    }
}

/// `1/p_*(n)` with `p_*(n) = 2(n+2)/(n+4)`; `p_*(2) = 4/3`.
pub fn inv_p_star(n: u32) -> Q {
    q(n as i64 + 4, 2 * (n as i64 + 2))
}

/// `1/q_*(n)` with `q_*(n) = 2(n+2)/n`.
pub fn inv_q_star(n: u32) -> Q {
    q(n as i64, 2 * (n as i64 + 2))
}

/// Gap conditions shared by `𝒟` and `𝒟̃`.
fn resolvent_gap(pair: &ExponentPair, n: u32) -> bool {
    let n = n as i64;
    let gap = pair.gap();
    let lower = gap >= q(2, n + 1);
    let upper = if n == 2 { gap < q(2, n) } else { gap <= q(2, n) };
    lower && upper
}

/// Exact membership of `pair` in `region`.
pub fn region_membership(pair: &ExponentPair, region: &RegionId) -> Result<bool> {
    region.validate()?;
    let (ip, iq) = (pair.inv_p, pair.inv_q);
    let gap = sub(ip, iq)?;
    let half = q(1, 2);
    Ok(match *region {
        RegionId::DN { n } => {
            let m = n as i64;
            ip > q(m + 1, 2 * m) && iq < q(m - 1, 2 * m) && resolvent_gap(pair, n)
        }
        RegionId::DTildeN { n } => ip > inv_p_star(n) && iq < inv_q_star(n) && resolvent_gap(pair, n),
        RegionId::DAlphaAnnulus { d, alpha } => {
            if alpha.is_zero() {
                ip >= half && iq <= half
            } else {
                let d = int(d as i64);
                let shift = div(alpha, mul(int(2), d)?)?;
                ip > add(half, shift)?
                    && iq < sub(half, shift)?
                    && gap >= div(mul(int(2), alpha)?, add(d, int(1))?)?
            }
        }
        RegionId::CalDAlpha { d, alpha } => {
            let dd = int(d as i64);
            let two_a = mul(int(2), alpha)?;
            let two_d = mul(int(2), dd)?;
            gap >= div(two_a, add(dd, int(1))?)?
                && ip > div(add(sub(dd, int(1))?, two_a)?, two_d)?
                && iq < div(sub(add(dd, int(1))?, two_a)?, two_d)?
        }
        RegionId::LargeFreq { n } => {
            let top = q(2, n as i64);
            let strict = pair.p_is_one() || pair.q_is_infinite();
            ip >= half && iq <= half && gap >= Q::zero() && if strict { gap < top } else { gap <= top }
        }
        RegionId::SmallFreq { n } => ip > inv_p_star(n) && iq < inv_q_star(n) && gap >= q(2, n as i64 + 1),
        RegionId::AnnulusLine { alpha } => gap >= alpha && ip > alpha && iq < sub(int(1), alpha)?,
    })
}
