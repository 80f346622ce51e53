//! Bounding functions for extremal values of slowly oscillating periodic
//! solutions of `x'(t) = f(x(t-1))`, built from the comparison function
//! `r(x) = a x / (1 + x)`.

mod dmax;
mod envelope;
mod lower;
mod sigma;

pub use dmax::{d_enclosure, DConfig};
pub use envelope::{z_eval, EnvelopeKind, PiecewiseBound};
pub use lower::{dl_dm, l_at_infinity, l_value};
pub use sigma::{sigma_enclosure, sigma_from_d, tilde_breakpoints};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{frac, Interval, IntervalError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("invalid parameters: {0}")]
    Domain(String),
    #[error("outside the admissible region: {0}")]
    Admissibility(String),
}

/// Which side of a quantity a computation certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnclosurePair {
    pub lower: f64,
    pub upper: f64,
}

/// The slope `a = f'(0)` and a candidate extremal pair `(M, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub a: Interval,
    #[serde(rename = "M")]
    pub big_m: Interval,
    pub m: Interval,
}

impl BoundParams {
    pub fn new(a: Interval, big_m: Interval, m: Interval) -> Result<Self, BoundsError> {
        if !(a.hi() < 0.0 && a.lo() > -2.0) {
            return Err(BoundsError::Domain(format!("slope {a} not inside (-2, 0)")));
        }
        if !(big_m.lo() > 0.0 && big_m.hi().is_finite()) {
            return Err(BoundsError::Domain(format!(
                "M = {big_m} must be positive and finite"
            )));
        }
        if !(m.lo() > -1.0 && m.hi() < 0.0) {
            return Err(BoundsError::Domain(format!("m = {m} must lie in (-1, 0)")));
        }
        Ok(BoundParams { a, big_m, m })
    }

    pub fn points(a: Interval, big_m: f64, m: f64) -> Result<Self, BoundsError> {
        Self::new(a, Interval::point(big_m), Interval::point(m))
    }

    /// `M / (1 + M)`, the comparison function without its slope.
    pub(crate) fn frac_m_big(&self) -> Interval {
        frac(self.big_m).expect("M > 0")
    }

    /// `m / (1 + m)`.
    pub(crate) fn frac_m(&self) -> Interval {
        frac(self.m).expect("m > -1")
    }
}

/// The critical slope `-37/24`.
pub fn a_critical() -> Interval {
    Interval::ratio(-37, 24)
}

/// The slope `-3/2`.
pub fn a_three_halves() -> Interval {
    Interval::point(-1.5)
}

/// `r(x, a) = a x / (1 + x)`.
pub fn r(x: Interval, a: Interval) -> Result<Interval, BoundsError> {
    if x.lo() <= -1.0 {
        return Err(BoundsError::Domain(format!("r: x = {x} touches -1")));
    }
    Ok(a * frac(x)?)
}

/// `A_a(m) = a m/(1+m) - 1 + (1+m) ln(1+m) / m`, an upper bound for `M`.
pub fn big_a(m: Interval, a: Interval) -> Result<Interval, BoundsError> {
    if !(m.lo() > -1.0 && m.hi() < 0.0) {
        return Err(BoundsError::Domain(format!(
            "A: m = {m} not inside (-1, 0)"
        )));
    }
    let eval = |m: Interval| -> Result<Interval, BoundsError> {
        let one_m = m + 1.0;
        Ok(a * frac(m)? - 1.0 + (one_m * one_m.ln()?).div(m)?)
    };
    // A is decreasing in m for slopes at or below -1; the endpoint form avoids
    // the dependency blow-up of the natural extension.
    if a.hi() <= -1.0 {
        m.map_decreasing(eval)
    } else {
        eval(m)
    }
}

/// `(alpha_+, beta_+)` for the upper envelope `z_+`.
pub fn breakpoints_plus(p: &BoundParams) -> Result<(Interval, Interval), BoundsError> {
    let q = p.frac_m_big().div(p.frac_m())? * 0.5;
    let base = p.big_m + 1.0;
    let inv_a = p.a.recip()?;
    Ok((inv_a * (base - q), inv_a * (base + q)))
}

/// `(beta_-, alpha_-)` for the lower envelope `z_-`.
pub fn breakpoints_minus(p: &BoundParams) -> Result<(Interval, Interval), BoundsError> {
    let c = (p.m * (p.big_m + 1.0)).div(p.big_m)?;
    let inv_a = p.a.recip()?;
    Ok((inv_a * (c + 0.5), inv_a * (c - 0.5)))
}

/// The four breakpoints of the combined envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoints {
    pub alpha_plus: Interval,
    pub beta_plus: Interval,
    pub beta_minus: Interval,
    pub alpha_minus: Interval,
}

impl Breakpoints {
    pub fn of(p: &BoundParams) -> Result<Self, BoundsError> {
        let (alpha_plus, beta_plus) = breakpoints_plus(p)?;
        let (beta_minus, alpha_minus) = breakpoints_minus(p)?;
        Ok(Breakpoints {
            alpha_plus,
            beta_plus,
            beta_minus,
            alpha_minus,
        })
    }

    /// Certified `beta_+ < 0 < beta_-`.
    pub fn straddle_zero(&self) -> bool {
        self.beta_plus.hi() < 0.0 && self.beta_minus.lo() > 0.0
    }
}
