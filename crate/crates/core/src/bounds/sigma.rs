//! `Σ_a(M, m) = ∫_{-1}^0 r(z~(s)) ds`, an upper bound for the maximum.
//!
//! `Σ` grows with the curvature `D` of `z~`, so a lower (upper) bound on `D`
//! yields a lower (upper) bound on `Σ`.

use super::{d_enclosure, BoundParams, BoundsError, DConfig, Mode, PiecewiseBound};
use crate::interval::{frac, Interval};

/// `(alpha~, beta~)` for curvature `d`.
pub fn tilde_breakpoints(
    p: &BoundParams,
    d: Interval,
) -> Result<(Interval, Interval), BoundsError> {
    let z = d.div(p.a.sqr())?;
    let q = (p.frac_m() * 0.5).div(z)?;
    let inv_a = p.a.recip()?;
    let base = p.m + 1.0;
    Ok((inv_a * (base - q), inv_a * (base + q)))
}

/// Closed form of `Σ` for a given curvature enclosure `d`. Requires
/// `beta~ < 0`.
pub fn sigma_from_d(p: &BoundParams, d: Interval) -> Result<Interval, BoundsError> {
    let (at, bt) = tilde_breakpoints(p, d)?;
    if bt.hi() >= 0.0 {
        return Err(BoundsError::Admissibility(format!(
            "Sigma needs beta~ < 0, got {bt} at M = {}, m = {}",
            p.big_m, p.m
        )));
    }
    let a = p.a;
    let z = d.div(a.sqr())?;
    let rs = frac(p.m)?;
    let one_m = p.m + 1.0;
    let b = (one_m * z * 2.0).sqrt()?;
    let log_term = (one_m + (rs.sqr() * 0.5).div(z)?).ln()?.div(rs)?;
    let atan_rs = rs.div(b)?.atan();

    let mut acc: Option<Interval> = None;
    let mut push = |v: Interval| acc = Some(acc.map_or(v, |x: Interval| x.hull(&v)));
    if at.hi() >= -1.0 {
        let i13 = a * rs - 1.0 - (rs * (rs + 1.0) * 0.5).div(z)? + log_term;
        let i2 = rs.div(z)? - (atan_rs * 2.0).div(b)?;
        push(i2 + i13);
    }
    if at.lo() < -1.0 && bt.hi() >= -1.0 {
        let scale = (z * 0.5).div(one_m)?.sqrt()?;
        let tail = (a * (at + 1.0) * scale).atan();
        push(a + log_term - ((atan_rs + tail) * 2.0).div(b)?);
    }
    if bt.lo() < -1.0 {
        push(a + (1.0 - a * rs).ln()?.div(rs)?);
    }
    Ok(acc.expect("some branch applies"))
}

/// Certified lower or upper bound for `Σ_a(M, m)`.
pub fn sigma_enclosure(p: &BoundParams, mode: Mode, cfg: &DConfig) -> Result<f64, BoundsError> {
    if mode == Mode::Upper {
        // beta~ falls as D grows, so it must already be negative at a value
        // known to be below the true D.
        let floor = d_floor(p)?;
        let (_, bt) = tilde_breakpoints(p, Interval::point(floor))?;
        if bt.hi() >= 0.0 {
            let d_lo = d_enclosure(p, Mode::Lower, cfg)?;
            sigma_from_d(p, Interval::point(d_lo))?;
        }
    }
    let d = d_enclosure(p, mode, cfg)?;
    let v = sigma_from_d(p, Interval::point(d))?;
    Ok(match mode {
        Mode::Lower => v.lo(),
        Mode::Upper => v.hi(),
    })
}

/// Cheap lower bound for `D`: the integrand at `s = 0`, where `z(0) = 0`.
fn d_floor(p: &BoundParams) -> Result<f64, BoundsError> {
    let env = PiecewiseBound::combined(p)?;
    let x = super::z_eval(&env, Interval::point(-1.0));
    Ok((p.a.sqr() * frac(Interval::point(x.lo()))?).lo())
}
