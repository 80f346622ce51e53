//! Enclosures of
//! `D_a(M, m) = a^2 max_{s∈[0,1]} z(s-1) / ((1 + z(s))^2 (1 + z(s-1)))`.
//!
//! With `x(s) = z(s-1)` and `y(s) = z(s)`, both envelope traces are
//! nonincreasing on `[0, 1]` and the integrand `G(x, y)` is increasing in `x`
//! and decreasing in `y`. On any `[s1, s2]` the integrand therefore lies in
//! `[G(x(s2), y(s1)), G(x(s1), y(s2))]`, which is what every box evaluation
//! below uses. The upper bound covers `[0, 1]` with such boxes, except on the
//! stretch where `s - 1` is on the plus parabola and `s` on the minus line:
//! there the maximum sits at an endpoint or at a root of a quartic, and the
//! roots are enclosed rigorously.

use serde::{Deserialize, Serialize};

use super::{r, z_eval, BoundParams, BoundsError, Breakpoints, Mode, PiecewiseBound};
use crate::interval::{frac, Interval};
use crate::roots::{verified_real_roots_interval, RootEnclosure, RootError, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DConfig {
    /// Boxes on the stretch where both `s - 1` and `s` sit on parabolas.
    pub upper_parts_l: usize,
    /// Boxes on the stretch where `s - 1` is on the plus line.
    pub upper_parts_h: usize,
    /// Cut fractions for the lower-bound splits of the same two stretches.
    pub lower_fractions: [f64; 3],
    pub root_budget: usize,
}

impl Default for DConfig {
    fn default() -> Self {
        DConfig {
            upper_parts_l: 32,
            upper_parts_h: 10,
            lower_fractions: [0.125, 0.25, 0.5],
            root_budget: DEFAULT_BUDGET,
        }
    }
}

struct Ctx {
    p: BoundParams,
    env: PiecewiseBound,
    bp: Breakpoints,
    a2: Interval,
}

impl Ctx {
    fn new(p: &BoundParams) -> Result<Self, BoundsError> {
        let env = PiecewiseBound::combined(p)?;
        let bp = env.breakpoints;
        Ok(Ctx {
            p: *p,
            env,
            bp,
            a2: p.a.sqr(),
        })
    }

    fn g(&self, x: f64, y: f64) -> Result<Interval, BoundsError> {
        let one_y = Interval::point(y) + 1.0;
        Ok((self.a2 * frac(Interval::point(x))?).div(one_y.sqr())?)
    }

    /// Range of the integrand over `[s.lo, s.hi]`.
    fn g_box(&self, s: Interval) -> Result<Interval, BoundsError> {
        let x = z_eval(&self.env, s - 1.0);
        let y = z_eval(&self.env, s);
        let lo = self.g(x.lo(), y.hi())?.lo();
        let hi = self.g(x.hi(), y.lo())?.hi();
        Ok(Interval::raw(lo, hi))
    }

    fn g_at(&self, s: f64) -> Result<Interval, BoundsError> {
        self.g_box(Interval::point(s.clamp(0.0, 1.0)))
    }

    /// Critical points of the integrand on `[c1, c2]`, where `s - 1` is on the
    /// plus parabola and `s` on the minus line. With `u = s - 1 - alpha_+`
    /// they solve `a r(m) u (1 + y) = 2 r(M) x (1 + x)`, a quartic in `u`.
    fn critical_boxes(&self, c1: f64, c2: f64, budget: usize) -> Vec<RootEnclosure> {
        let ap = self.bp.alpha_plus;
        let Ok(coeffs) = self.quartic() else {
            return fallback(c1, c2);
        };
        let search = Interval::raw(c1, c2) - 1.0 - ap;
        let shift = |e: RootEnclosure| -> Option<RootEnclosure> {
            let s = e.bracket + 1.0 + ap;
            s.intersect(&Interval::raw(c1, c2)).map(|b| RootEnclosure {
                bracket: b,
                certified: e.certified,
            })
        };
        match verified_real_roots_interval(&coeffs, search, budget) {
            Ok(v) => v.into_iter().filter_map(shift).collect(),
            Err(RootError::Certification { cover, .. }) => {
                cover.into_iter().filter_map(shift).collect()
            }
            Err(_) => fallback(c1, c2),
        }
    }

    fn quartic(&self) -> Result<Vec<Interval>, BoundsError> {
        let p = &self.p;
        let a = p.a;
        let rb = r(p.big_m, a)?;
        let rs = r(p.m, a)?;
        Ok(vec![
            self.a2 * rb * rs.sqr() * -0.5,
            Interval::point(0.0),
            a * p.big_m * rs * rb * -2.0,
            a * rs * (rb * (self.bp.alpha_plus + 1.0) + 1.0),
            a * p.big_m.sqr() * -2.0,
        ])
    }

    /// `G(M, m)`, the trivial upper bound.
    fn ceiling(&self) -> Result<Interval, BoundsError> {
        let one_m = self.p.m + 1.0;
        Ok((self.a2 * frac(self.p.big_m)?).div(one_m.sqr())?)
    }
}

fn fallback(c1: f64, c2: f64) -> Vec<RootEnclosure> {
    Interval::raw(c1, c2)
        .split(64)
        .into_iter()
        .map(|b| RootEnclosure {
            bracket: b,
            certified: false,
        })
        .collect()
}

/// Cut points of `[0, 1]`, nondecreasing.
struct Layout {
    /// `alpha_+ + 1`, rounded up.
    c1: f64,
    /// end of the critical stretch, rounded down
    c2: f64,
    /// boundary between the two box stretches
    k1: f64,
    k2: f64,
    /// `min(alpha_-, 1)`
    k3: f64,
    /// true when `beta_- >= beta_+ + 1`: both traces are linear on `[k1, k2]`
    lines: bool,
}

impl Layout {
    fn new(bp: &Breakpoints) -> Self {
        let ap1 = bp.alpha_plus + 1.0;
        let bp1 = bp.beta_plus + 1.0;
        let c1 = ap1.hi().clamp(0.0, 1.0);
        let c2 = bp.beta_minus.min(&bp1).lo().clamp(c1, 1.0);
        let lines = bp.beta_minus.mid() >= bp1.mid();
        let (first, second) = if lines {
            (bp1.mid(), bp.beta_minus.mid())
        } else {
            (bp.beta_minus.mid(), bp1.mid())
        };
        let k1 = first.clamp(c2, 1.0);
        let k2 = second.clamp(k1, 1.0);
        let k3 = bp.alpha_minus.mid().min(1.0).clamp(k2, 1.0);
        Layout {
            c1,
            c2,
            k1,
            k2,
            k3,
            lines,
        }
    }
}

/// Certified lower or upper bound for `D_a(M, m)`. Requires
/// `beta_+ < 0 < beta_-`.
pub fn d_enclosure(p: &BoundParams, mode: Mode, cfg: &DConfig) -> Result<f64, BoundsError> {
    let ctx = Ctx::new(p)?;
    let lay = Layout::new(&ctx.bp);
    match mode {
        Mode::Upper => upper(&ctx, &lay, cfg),
        Mode::Lower => lower(&ctx, &lay, cfg),
    }
}

fn upper(ctx: &Ctx, lay: &Layout, cfg: &DConfig) -> Result<f64, BoundsError> {
    let mut best = f64::NEG_INFINITY;
    let mut take = |v: Interval| best = best.max(v.hi());
    take(ctx.g_box(Interval::raw(0.0, lay.c1))?);
    if lay.c2 > lay.c1 {
        take(ctx.g_at(lay.c1)?);
        take(ctx.g_at(lay.c2)?);
        for e in ctx.critical_boxes(lay.c1, lay.c2, cfg.root_budget) {
            take(ctx.g_box(e.bracket)?);
        }
    }
    let segments = [
        (lay.c2, lay.k1, 1),
        (lay.k1, lay.k2, cfg.upper_parts_l.max(1)),
        (lay.k2, lay.k3, cfg.upper_parts_h.max(1)),
        (lay.k3, 1.0, 1),
    ];
    for (lo, hi, parts) in segments {
        if hi > lo {
            for b in Interval::raw(lo, hi).split(parts) {
                take(ctx.g_box(b)?);
            }
        }
    }
    Ok(best.min(ctx.ceiling()?.hi()))
}

fn lower(ctx: &Ctx, lay: &Layout, cfg: &DConfig) -> Result<f64, BoundsError> {
    let bp = &ctx.bp;
    let mut best = f64::NEG_INFINITY;
    let mut take = |v: Interval| best = best.max(v.lo());
    take(ctx.g_at(0.0)?);
    take(ctx.g_at((bp.alpha_plus + 1.0).mid().max(0.0))?);
    take(ctx.g_at(bp.beta_minus.mid())?);
    take(ctx.g_at((bp.beta_plus + 1.0).mid())?);
    if lay.c2 > lay.c1 {
        for e in ctx.critical_boxes(lay.c1, lay.c2, cfg.root_budget) {
            take(ctx.g_at(e.bracket.mid())?);
        }
    }
    let stretches = [(lay.k1, lay.k2), (lay.k2, lay.k3)];
    for (lo, hi) in stretches {
        if hi <= lo {
            continue;
        }
        if lay.lines {
            take(ctx.g_box(Interval::raw(lo, hi))?);
            continue;
        }
        let w = hi - lo;
        let f = cfg.lower_fractions;
        let cuts = [lo, lo + f[0] * w, lo + f[1] * w, lo + f[2] * w, hi];
        for c in cuts.windows(2) {
            if c[1] > c[0] {
                take(ctx.g_box(Interval::raw(c[0], c[1]))?);
            }
        }
    }
    Ok(best)
}
