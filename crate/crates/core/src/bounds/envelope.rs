//! Piecewise constant / parabolic / linear envelopes of the periodic solution.

use serde::{Deserialize, Serialize};

use super::{r, BoundParams, BoundsError, Breakpoints};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    /// `z_+` on `[-1, 0]`: `M`, then a falling parabola, then `r(M) s`.
    Plus,
    /// `z_-` on `[0, 1]`: `r(M) s`, then a parabola down to `m`, then `m`.
    Minus,
    /// `z_+` for `s <= 0` glued to `z_-` for `s >= 0`.
    Combined,
    /// `z~` on `[-1, 0]`: `m`, then a rising parabola of curvature `D`, then `r(m) s`.
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum Piece {
    Const(Interval),
    /// `base + half_curv (s - center)^2`
    Parabola {
        base: Interval,
        half_curv: Interval,
        center: Interval,
    },
    Line {
        slope: Interval,
    },
}

impl Piece {
    fn eval(&self, s: Interval) -> Interval {
        match *self {
            Piece::Const(v) => v,
            Piece::Parabola {
                base,
                half_curv,
                center,
            } => base + half_curv * (s - center).sqr(),
            Piece::Line { slope } => slope * s,
        }
    }
}

/// A continuous piecewise envelope with interval breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseBound {
    pub kind: EnvelopeKind,
    pub params: BoundParams,
    pub breakpoints: Breakpoints,
    /// `(alpha~, beta~)`, only for [`EnvelopeKind::Tilde`].
    pub tilde_breakpoints: Option<(Interval, Interval)>,
    /// Leading coefficient of the parabola: `a r(m)` on the plus side,
    /// `a r(M)` on the minus side, `D` for the tilde envelope. The combined
    /// envelope records its plus side.
    pub curvature: Interval,
    pieces: Vec<Piece>,
    knots: Vec<Interval>,
}

impl PiecewiseBound {
    pub fn plus(p: &BoundParams) -> Result<Self, BoundsError> {
        let bp = Breakpoints::of(p)?;
        let curv = p.a * r(p.m, p.a)?;
        let pieces = vec![
            Piece::Const(p.big_m),
            Piece::Parabola {
                base: p.big_m,
                half_curv: curv * 0.5,
                center: bp.alpha_plus,
            },
            Piece::Line {
                slope: r(p.big_m, p.a)?,
            },
        ];
        Ok(Self::build(
            EnvelopeKind::Plus,
            p,
            bp,
            None,
            curv,
            pieces,
            vec![bp.alpha_plus, bp.beta_plus],
        ))
    }

    pub fn minus(p: &BoundParams) -> Result<Self, BoundsError> {
        let bp = Breakpoints::of(p)?;
        let r_big = r(p.big_m, p.a)?;
        let curv = p.a * r_big;
        let pieces = vec![
            Piece::Line { slope: r_big },
            Piece::Parabola {
                base: p.m,
                half_curv: curv * 0.5,
                center: bp.alpha_minus,
            },
            Piece::Const(p.m),
        ];
        Ok(Self::build(
            EnvelopeKind::Minus,
            p,
            bp,
            None,
            curv,
            pieces,
            vec![bp.beta_minus, bp.alpha_minus],
        ))
    }

    /// Requires `beta_+ < 0 < beta_-`.
    pub fn combined(p: &BoundParams) -> Result<Self, BoundsError> {
        let bp = Breakpoints::of(p)?;
        if !bp.straddle_zero() {
            return Err(BoundsError::Admissibility(format!(
                "combined envelope needs beta_+ < 0 < beta_-, got beta_+ = {}, beta_- = {}",
                bp.beta_plus, bp.beta_minus
            )));
        }
        let r_big = r(p.big_m, p.a)?;
        let curv_plus = p.a * r(p.m, p.a)?;
        let pieces = vec![
            Piece::Const(p.big_m),
            Piece::Parabola {
                base: p.big_m,
                half_curv: curv_plus * 0.5,
                center: bp.alpha_plus,
            },
            Piece::Line { slope: r_big },
            Piece::Parabola {
                base: p.m,
                half_curv: p.a * r_big * 0.5,
                center: bp.alpha_minus,
            },
            Piece::Const(p.m),
        ];
        let knots = vec![bp.alpha_plus, bp.beta_plus, bp.beta_minus, bp.alpha_minus];
        Ok(Self::build(
            EnvelopeKind::Combined,
            p,
            bp,
            None,
            curv_plus,
            pieces,
            knots,
        ))
    }

    /// Lower envelope on `[-1, 0]` with parabola curvature `d`.
    pub fn tilde(p: &BoundParams, d: Interval) -> Result<Self, BoundsError> {
        let bp = Breakpoints::of(p)?;
        let (at, bt) = super::tilde_breakpoints(p, d)?;
        let pieces = vec![
            Piece::Const(p.m),
            Piece::Parabola {
                base: p.m,
                half_curv: d * 0.5,
                center: at,
            },
            Piece::Line {
                slope: r(p.m, p.a)?,
            },
        ];
        Ok(Self::build(
            EnvelopeKind::Tilde,
            p,
            bp,
            Some((at, bt)),
            d,
            pieces,
            vec![at, bt],
        ))
    }

    fn build(
        kind: EnvelopeKind,
        p: &BoundParams,
        breakpoints: Breakpoints,
        tilde_breakpoints: Option<(Interval, Interval)>,
        curvature: Interval,
        pieces: Vec<Piece>,
        knots: Vec<Interval>,
    ) -> Self {
        PiecewiseBound {
            kind,
            params: *p,
            breakpoints,
            tilde_breakpoints,
            curvature,
            pieces,
            knots,
        }
    }

    /// Breakpoints in increasing order.
    pub fn knots(&self) -> &[Interval] {
        &self.knots
    }
}

/// Enclosure of the envelope over `s`. Pieces whose domain may meet `s` are
/// evaluated on that overlap and the results are hulled.
pub fn z_eval(b: &PiecewiseBound, s: Interval) -> Interval {
    let n = b.pieces.len();
    let mut acc: Option<Interval> = None;
    for (i, piece) in b.pieces.iter().enumerate() {
        let start = if i == 0 {
            f64::NEG_INFINITY
        } else {
            b.knots[i - 1].lo()
        };
        let end = if i + 1 == n {
            f64::INFINITY
        } else {
            b.knots[i].hi()
        };
        let lo = s.lo().max(start);
        let hi = s.hi().min(end);
        if lo > hi {
            continue;
        }
        let v = piece.eval(Interval::raw(lo, hi));
        acc = Some(acc.map_or(v, |a| a.hull(&v)));
    }
    acc.expect("pieces cover the real line")
}
