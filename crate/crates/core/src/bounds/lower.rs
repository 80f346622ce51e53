//! `L_a(M, m) = ∫_{-1}^0 r(z_+(s)) ds`, a lower bound for the minimum, and its
//! derivative in `m`.
//!
//! The closed form has three branches according to where `-1` falls relative
//! to `alpha_+ < beta_+`. When an interval argument leaves the branch
//! ambiguous, every candidate branch is evaluated and the results are hulled;
//! the integral is continuous across branches, so this is sound.

use super::{big_a, breakpoints_plus, BoundParams, BoundsError};
use crate::interval::{Interval, IntervalError};

struct Common {
    a: Interval,
    inv_a: Interval,
    big_m: Interval,
    /// `M / (1 + M)`
    rb: Interval,
    /// `m / (1 + m)`
    rs: Interval,
    /// `sqrt(-2 (1 + M) m/(1+m))`
    b: Interval,
    alpha: Interval,
    beta: Interval,
}

impl Common {
    fn new(p: &BoundParams) -> Result<Self, BoundsError> {
        let (alpha, beta) = breakpoints_plus(p)?;
        if beta.hi() >= 0.0 {
            return Err(BoundsError::Admissibility(format!(
                "L needs beta_+ < 0, got {beta} at M = {}, m = {}",
                p.big_m, p.m
            )));
        }
        let rb = p.frac_m_big();
        let rs = p.frac_m();
        let b = ((p.big_m + 1.0) * rs * -2.0).sqrt()?;
        Ok(Common {
            a: p.a,
            inv_a: p.a.recip()?,
            big_m: p.big_m,
            rb,
            rs,
            b,
            alpha,
            beta,
        })
    }

    fn branches(&self) -> [bool; 3] {
        [
            self.alpha.hi() >= -1.0,
            self.alpha.lo() < -1.0 && self.beta.hi() >= -1.0,
            self.beta.lo() < -1.0,
        ]
    }

    /// `ln(1 + M + rb^2 / (2 rs)) / rb`
    fn log_term(&self) -> Result<Interval, IntervalError> {
        let inner = self.big_m + 1.0 + (self.rb.sqr() * 0.5).div(self.rs)?;
        inner.ln()?.div(self.rb)
    }

    /// `B / (a rs)`
    fn c(&self) -> Result<Interval, IntervalError> {
        self.b.div(self.a * self.rs)
    }

    /// `ln(|(alpha+1-C)/(alpha+1+C)| |(beta-alpha-C)/(beta-alpha+C)|)`
    fn log_ratio(&self) -> Result<Interval, IntervalError> {
        let c = self.c()?;
        let a1 = self.alpha + 1.0;
        let gap = self.inv_a * self.rb.div(self.rs)?;
        let prod = (a1 - c).div(a1 + c)?.abs() * (gap - c).div(gap + c)?.abs();
        prod.ln()
    }
}

/// Enclosure of `L_a(M, m)`. Requires `beta_+ < 0`.
pub fn l_value(p: &BoundParams) -> Result<Interval, BoundsError> {
    let k = Common::new(p)?;
    let [b1, b2, b3] = k.branches();
    let mut acc: Option<Interval> = None;
    let mut push = |v: Interval| acc = Some(acc.map_or(v, |a: Interval| a.hull(&v)));
    let half_ratio = k.rb.div(k.rs)? * 0.5;
    if b1 {
        let i13 = k.a * k.rb - 1.0 - (half_ratio * (k.rb + 1.0)) + k.log_term()?;
        let i2 = k.rb.div(k.rs)? + (k.rb + k.b).div(k.b - k.rb)?.ln()?.div(k.b)?;
        push(i2 + i13);
    }
    if b2 {
        let v = -1.0 - k.big_m - half_ratio + k.log_term()? + k.a * (k.beta + 1.0)
            - k.log_ratio()?.div(k.b)?;
        push(v);
    }
    if b3 {
        push(k.a + (1.0 - k.a * k.rb).ln()?.div(k.rb)?);
    }
    Ok(acc.expect("some branch applies"))
}

/// `lim_{M -> ∞} L_a(M, m) = a + ln(1 - a)`, independent of `m`.
pub fn l_at_infinity(a: Interval) -> Result<Interval, BoundsError> {
    Ok(a + (1.0 - a).ln()?)
}

/// Enclosure of `∂L_a/∂m`. Requires `beta_+ < 0` and that the box is not
/// entirely above the curve `M = A_a(m)`.
pub fn dl_dm(p: &BoundParams) -> Result<Interval, BoundsError> {
    let a_lo_m = big_a(Interval::point(p.m.lo()), p.a)?;
    if p.big_m.lo() >= a_lo_m.hi() {
        return Err(BoundsError::Admissibility(format!(
            "dL/dm needs M < A(m), got M = {} and A(m) <= {}",
            p.big_m,
            a_lo_m.hi()
        )));
    }
    let k = Common::new(p)?;
    let [b1, b2, b3] = k.branches();
    let one_m = p.m + 1.0;
    let drs = one_m.sqr().recip()?;
    let rs2 = k.rs.sqr();
    let db = -(k.big_m + 1.0).div(k.b)?;
    let inner = k.big_m + 1.0 + (k.rb.sqr() * 0.5).div(k.rs)?;
    // derivative of the shared log term with respect to rs
    let dlog = -((k.rb.sqr() * 0.5).div(rs2)?).div(inner)?.div(k.rb)?;

    let mut acc: Option<Interval> = None;
    let mut push = |v: Interval| acc = Some(acc.map_or(v, |a: Interval| a.hull(&v)));
    if b1 {
        let i13 = ((k.rb * (k.rb + 1.0) * 0.5).div(rs2)? + dlog) * drs;
        let lg = (k.rb + k.b).div(k.b - k.rb)?.ln()?;
        let i2 = (-k.rb.div(rs2)? - (db * lg).div(k.b.sqr())?
            + (db * ((k.rb + k.b).recip()? - (k.b - k.rb).recip()?)).div(k.b)?)
            * drs;
        push(i2 + i13);
    }
    if b2 {
        let dbeta = -(k.inv_a * 0.5) * k.rb * drs.div(rs2)?;
        let dalpha = -dbeta;
        let dc = k.inv_a * (db * k.rs - k.b) * drs.div(rs2)?;
        let c = k.c()?;
        let a1 = k.alpha + 1.0;
        let gap = k.inv_a * k.rb.div(k.rs)?;
        let dgap = dbeta - dalpha;
        let frac_terms = (dalpha - dc).div(a1 - c)? - (dalpha + dc).div(a1 + c)?
            + (dgap - dc).div(gap - c)?
            - (dgap + dc).div(gap + c)?;
        let v = (k.rb * 0.5).div(rs2)? * drs
            + dlog * drs
            + k.a * dbeta
            + (k.log_ratio()? * db * drs).div(k.b.sqr())?
            - frac_terms.div(k.b)?;
        push(v);
    }
    if b3 {
        push(Interval::point(0.0));
    }
    Ok(acc.expect("some branch applies"))
}
