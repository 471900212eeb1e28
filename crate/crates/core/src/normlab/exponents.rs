use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Exact rational with 64-bit parts.
pub type Q = Ratio<i64>;

fn overflow() -> Error {
    Error::InvalidInput("rational arithmetic overflowed 64 bits".into())
}

pub(crate) fn add(a: Q, b: Q) -> Result<Q> {
    a.checked_add(&b).ok_or_else(overflow)
}

pub(crate) fn sub(a: Q, b: Q) -> Result<Q> {
    a.checked_sub(&b).ok_or_else(overflow)
}

pub(crate) fn mul(a: Q, b: Q) -> Result<Q> {
    a.checked_mul(&b).ok_or_else(overflow)
}

pub(crate) fn div(a: Q, b: Q) -> Result<Q> {
    if b.is_zero() {
        return invalid("division by zero in exponent arithmetic");
    }
    a.checked_div(&b).ok_or_else(overflow)
}

pub(crate) fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub(crate) fn int(n: i64) -> Q {
    Q::from_integer(n)
}

pub(crate) fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Nearest rational with denominator at most `1e6`.
pub fn rational_from_f64(x: f64) -> Result<Q> {
    if !x.is_finite() {
        return invalid(format!("{x} is not a finite number"));
    }
    let r = Ratio::<i64>::approximate_float(x).ok_or_else(overflow)?;
    // Snap to a small denominator when that is within rounding.
    for den in 1..=1_000_000i64 {
        let num = (x * den as f64).round();
        if (num / den as f64 - x).abs() <= 1e-12 * x.abs().max(1.0) {
            return Ok(Q::new(num as i64, den));
        }
        if den > 10_000 {
            break;
        }
    }
    Ok(r)
}

/// Parses `"3/4"`, `"0.25"`, `"2"`, `"inf"` or `"∞"`.
pub fn parse_rational(s: &str) -> Result<Option<Q>> {
    let t = s.trim();
    if matches!(t, "inf" | "infinity" | "∞" | "Inf") {
        return Ok(None);
    }
    if let Some((a, b)) = t.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
        let b: i64 = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
        if b == 0 {
            return invalid(format!("zero denominator in {s:?}"));
        }
        return Ok(Some(Q::new(a, b)));
    }
    let x: f64 = t.parse().map_err(|_| Error::InvalidInput(format!("bad number {s:?}")))?;
    rational_from_f64(x).map(Some)
}

/// `(1/p, 1/q)` with `∞ ↔ 0`, both in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentPair {
    pub inv_p: Q,
    pub inv_q: Q,
}

impl ExponentPair {
    pub fn new(inv_p: Q, inv_q: Q) -> Result<Self> {
        for (name, v) in [("1/p", inv_p), ("1/q", inv_q)] {
            if v < Q::zero() || v > Q::one() {
                return invalid(format!("{name} = {v} outside [0, 1]"));
            }
        }
        Ok(Self { inv_p, inv_q })
    }

    /// From exponents; `None` stands for `∞`.
    pub fn from_exponents(p: Option<Q>, q: Option<Q>) -> Result<Self> {
        let inv = |e: Option<Q>| match e {
            None => Ok(Q::zero()),
            Some(e) if e >= Q::one() => div(Q::one(), e),
            Some(e) => invalid(format!("exponent {e} below 1")),
        };
        Self::new(inv(p)?, inv(q)?)
    }

    /// Parses exponent strings such as `"4/3"` and `"inf"`.
    pub fn parse(p: &str, q: &str) -> Result<Self> {
        Self::from_exponents(parse_rational(p)?, parse_rational(q)?)
    }

    pub fn p(&self) -> f64 {
        if self.inv_p.is_zero() {
            f64::INFINITY
        } else {
            1.0 / to_f64(self.inv_p)
        }
    }

    pub fn q(&self) -> f64 {
        if self.inv_q.is_zero() {
            f64::INFINITY
        } else {
            1.0 / to_f64(self.inv_q)
        }
    }

    /// `1/p - 1/q`.
    pub fn gap(&self) -> Q {
        self.inv_p - self.inv_q
    }

    pub fn p_is_one(&self) -> bool {
        self.inv_p.is_one()
    }

    pub fn q_is_infinite(&self) -> bool {
        self.inv_q.is_zero()
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1/p, 1/q) = ({}, {})", self.inv_p, self.inv_q)
    }
}

/// All fractions in `[0, 1]` with denominator at most `max_den`, sorted.
pub fn farey(max_den: i64) -> Vec<Q> {
    let mut v: Vec<Q> = (1..=max_den).flat_map(|d| (0..=d).map(move |n| Q::new(n, d))).collect();
    v.sort();
    v.dedup();
    v
}
