//! One check per computational claim, each returning a serializable verdict
//! with the evidence that backs it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::billiard::{self, BilliardOutcome, BilliardProblem, DEFAULT_MAX_STEPS};
use crate::bounds::{
    a_critical, a_three_halves, big_a, d_enclosure, dl_dm, l_value, sigma_enclosure,
    tilde_breakpoints, BoundParams, BoundsError, DConfig, Mode,
};
use crate::interval::Interval;
use crate::roots::{verified_real_roots, RootEnclosure};
use crate::separation::{m_k, M_EXIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "2.15a")]
    L2_15a,
    #[serde(rename = "2.15b")]
    L2_15b,
    #[serde(rename = "2.15c")]
    L2_15c,
    #[serde(rename = "2.15d")]
    L2_15d,
    #[serde(rename = "4.8")]
    L4_8,
    #[serde(rename = "4.18")]
    L4_18,
    #[serde(rename = "remark-2.18")]
    Remark2_18,
    #[serde(rename = "appendix-1")]
    Appendix1,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::L2_15a,
        LemmaId::L2_15b,
        LemmaId::L2_15c,
        LemmaId::L2_15d,
        LemmaId::L4_8,
        LemmaId::L4_18,
        LemmaId::Remark2_18,
        LemmaId::Appendix1,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::L2_15a => "2.15a",
            LemmaId::L2_15b => "2.15b",
            LemmaId::L2_15c => "2.15c",
            LemmaId::L2_15d => "2.15d",
            LemmaId::L4_8 => "4.8",
            LemmaId::L4_18 => "4.18",
            LemmaId::Remark2_18 => "remark-2.18",
            LemmaId::Appendix1 => "appendix-1",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown lemma {s:?}"))
    }
}

/// A single certified (or failed) inequality or enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(with = "crate::serde_float")]
    pub lower: f64,
    #[serde(with = "crate::serde_float")]
    pub upper: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedBilliard {
    pub name: String,
    pub outcome: BilliardOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    #[serde(rename = "M")]
    pub big_m: Interval,
    pub m: Interval,
    pub value: Interval,
}

/// Summary of the derivative grid over the region `-m <= M <= A(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub m_range: (f64, f64),
    pub mesh_m: f64,
    #[serde(rename = "mesh_M")]
    pub mesh_big_m: f64,
    pub boxes: usize,
    pub bisections: usize,
    pub bound: f64,
    #[serde(with = "crate::serde_float")]
    pub sup_upper: f64,
    #[serde(with = "crate::serde_float")]
    pub inf_lower: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
    /// Same quantities restricted to `m <= -0.13`.
    #[serde(with = "crate::serde_float")]
    pub sup_upper_reference_part: f64,
    #[serde(with = "crate::serde_float")]
    pub inf_lower_reference_part: f64,
    /// Boxes that stayed ambiguous after bisection (at most 32 listed).
    pub violations: Vec<GridBox>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub billiards: Vec<NamedBilliard>,
    pub checks: Vec<Check>,
    pub grid: Option<GridSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma_id: LemmaId,
    pub holds: bool,
    pub evidence: Evidence,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Slope used wherever the critical value appears.
    pub a: Interval,
    pub d: DConfig,
    pub max_steps: usize,
    /// Depth of interval bisection for derivative boxes that fail.
    pub grid_bisection_depth: u32,
    /// Extra ulps taken off every billiard step.
    #[serde(default)]
    pub extra_down_ulps: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            a: a_critical(),
            d: DConfig::default(),
            max_steps: DEFAULT_MAX_STEPS,
            grid_bisection_depth: 24,
            extra_down_ulps: 0,
        }
    }
}

pub fn verify(id: LemmaId, cfg: &VerifyConfig) -> LemmaVerdict {
    match id {
        LemmaId::L2_15a => verify_2_15a(cfg),
        LemmaId::L2_15b => verify_2_15b(cfg),
        LemmaId::L2_15c => verify_2_15c(cfg),
        LemmaId::L2_15d => verify_2_15d(cfg),
        LemmaId::L4_8 => verify_4_8(cfg),
        LemmaId::L4_18 => verify_4_18(cfg),
        LemmaId::Remark2_18 => verify_remark_2_18(cfg),
        LemmaId::Appendix1 => verify_appendix1(cfg),
    }
}

fn finish(id: LemmaId, t0: Instant, evidence: Evidence) -> LemmaVerdict {
    let holds = evidence.checks.iter().all(|c| c.holds)
        && evidence.billiards.iter().all(|b| b.outcome.separated)
        && evidence
            .grid
            .as_ref()
            .is_none_or(|g| g.upper_holds && g.lower_holds);
    LemmaVerdict {
        lemma_id: id,
        holds,
        evidence,
        runtime_ms: t0.elapsed().as_secs_f64() * 1e3,
    }
}

/// Builds a check from an enclosure and a predicate on it.
fn check<E: fmt::Display>(
    name: &str,
    v: Result<Interval, E>,
    pred: impl Fn(Interval) -> bool,
) -> Check {
    match v {
        Ok(x) => Check {
            name: name.into(),
            holds: pred(x),
            lower: x.lo(),
            upper: x.hi(),
            note: None,
        },
        Err(e) => Check {
            name: name.into(),
            holds: false,
            lower: f64::NAN,
            upper: f64::NAN,
            note: Some(e.to_string()),
        },
    }
}

fn flag(name: &str, holds: bool, note: Option<String>) -> Check {
    Check {
        name: name.into(),
        holds,
        lower: f64::NAN,
        upper: f64::NAN,
        note,
    }
}

fn err_str(e: BoundsError) -> String {
    e.to_string()
}

/// `[lo, hi]` widened so it covers the decimal interval it stands for.
fn table(lo: f64, hi: f64) -> (f64, f64) {
    (lo.next_down(), hi.next_up())
}

fn named(name: &str, pb: BilliardProblem<'_>) -> NamedBilliard {
    NamedBilliard {
        name: name.into(),
        outcome: billiard::run(&pb),
    }
}

fn l_at(a: Interval, big_m: f64, m: f64) -> Result<Interval, BoundsError> {
    l_value(&BoundParams::points(a, big_m, m)?)
}

/// `C(m) = L(A(m), m)`.
fn c_of(a: Interval, m: f64) -> Result<Interval, BoundsError> {
    let am = big_a(Interval::point(m), a)?;
    l_value(&BoundParams::new(a, am, Interval::point(m))?)
}

/// `m < L(-m, m)` on `[-0.61, -0.009]`.
pub fn verify_2_15a(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let (lo, hi) = table(-0.61, -0.009);
    let pb = BilliardProblem::identity(move |t| l_at(a, -t, t).map_err(err_str), lo, hi)
        .with_max_steps(cfg.max_steps)
        .with_extra_down_ulps(cfg.extra_down_ulps);
    let ev = Evidence {
        billiards: vec![named("q(t) = L(-t, t), p(t) = t", pb)],
        checks: vec![
            check("L(0.3, -0.3) > -0.3", l_at(a, 0.3, -0.3), |v| v.lo() > -0.3),
            check("L(0.009, -0.009) > -0.009", l_at(a, 0.009, -0.009), |v| {
                v.lo() > -0.009
            }),
        ],
        grid: None,
    };
    finish(LemmaId::L2_15a, t0, ev)
}

const MESH_M: f64 = 4e-4;
const MESH_BIG_M: f64 = 1e-3;
const DERIVATIVE_BOUND: f64 = 0.91;

#[derive(Default)]
struct StripResult {
    boxes: usize,
    bisections: usize,
    sup: f64,
    inf: f64,
    bad: Vec<GridBox>,
}

fn merge(mut x: StripResult, y: StripResult) -> StripResult {
    x.boxes += y.boxes;
    x.bisections += y.bisections;
    x.sup = x.sup.max(y.sup);
    x.inf = x.inf.min(y.inf);
    x.bad.extend(y.bad);
    x
}

/// Certifies a derivative box, bisecting the wider side on failure.
fn grid_box(a: Interval, big_m: Interval, m: Interval, depth: u32, out: &mut StripResult) {
    // A is decreasing, so a box with M above A(m.lo) misses the region
    if big_a(Interval::point(m.lo()), a).is_ok_and(|t| big_m.lo() >= t.hi()) {
        return;
    }
    let v = BoundParams::new(a, big_m, m).and_then(|p| dl_dm(&p));
    let good = matches!(v, Ok(x) if x.hi() < DERIVATIVE_BOUND && x.lo() >= 0.0);
    if !good && depth > 0 {
        out.bisections += 1;
        let (p, q) = if big_m.width() >= m.width() * 2.5 {
            let (l, r) = big_m.bisect();
            ((l, m), (r, m))
        } else {
            let (l, r) = m.bisect();
            ((big_m, l), (big_m, r))
        };
        grid_box(a, p.0, p.1, depth - 1, out);
        grid_box(a, q.0, q.1, depth - 1, out);
        return;
    }
    out.boxes += 1;
    match v {
        Ok(x) => {
            out.sup = out.sup.max(x.hi());
            out.inf = out.inf.min(x.lo());
            if !good {
                out.bad.push(GridBox { big_m, m, value: x });
            }
        }
        Err(_) => {
            out.sup = f64::INFINITY;
            out.inf = f64::NEG_INFINITY;
            out.bad.push(GridBox {
                big_m,
                m,
                value: Interval::raw(f64::NEG_INFINITY, f64::INFINITY),
            });
        }
    }
}

/// One strip `m in [m2, m1]`, `M` from `-m1` up past `A(m2)` in steps of `h`.
fn grid_strip(a: Interval, m2: f64, m1: f64, depth: u32) -> StripResult {
    let mut out = StripResult {
        sup: f64::NEG_INFINITY,
        inf: f64::INFINITY,
        ..Default::default()
    };
    let m = Interval::raw(m2, m1);
    let Ok(top) = big_a(Interval::point(m2), a) else {
        out.sup = f64::INFINITY;
        return out;
    };
    let start = -m1;
    let n = ((top.hi() - start) / MESH_BIG_M).floor() as usize + 1;
    let mut lo = start;
    for k in 1..=n {
        let hi = if k == n {
            (start + k as f64 * MESH_BIG_M).max(top.hi())
        } else {
            start + k as f64 * MESH_BIG_M
        };
        grid_box(a, Interval::raw(lo, hi), m, depth, &mut out);
        lo = hi;
    }
    out
}

/// `0 <= dL/dm < 0.91` on `-m <= M <= A(m)`, `m in [-0.25, -0.009]`.
pub fn verify_2_15b(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let (m_lo, m_hi) = table(-0.25, -0.009);
    let mut cuts = vec![m_hi];
    let mut k = 1;
    loop {
        let c = -0.009 - k as f64 * MESH_M;
        if c <= m_lo {
            cuts.push(m_lo);
            break;
        }
        cuts.push(c);
        k += 1;
    }
    let depth = cfg.grid_bisection_depth;
    let strips: Vec<(f64, StripResult)> = cuts
        .par_windows(2)
        .map(|w| (w[0], grid_strip(a, w[1], w[0], depth)))
        .collect();
    let (reference, extension): (Vec<_>, Vec<_>) =
        strips.into_iter().partition(|(m1, _)| *m1 <= -0.13 + 1e-12);
    let empty = || StripResult {
        sup: f64::NEG_INFINITY,
        inf: f64::INFINITY,
        ..Default::default()
    };
    let r = reference.into_iter().map(|s| s.1).fold(empty(), merge);
    let e = extension.into_iter().map(|s| s.1).fold(empty(), merge);
    let (r_sup, r_inf) = (r.sup, r.inf);
    let all = merge(r, e);
    let mut violations = all.bad;
    violations.truncate(32);
    let grid = GridSummary {
        m_range: (m_lo, m_hi),
        mesh_m: MESH_M,
        mesh_big_m: MESH_BIG_M,
        boxes: all.boxes,
        bisections: all.bisections,
        bound: DERIVATIVE_BOUND,
        sup_upper: all.sup,
        inf_lower: all.inf,
        upper_holds: all.sup < DERIVATIVE_BOUND,
        lower_holds: all.inf >= 0.0,
        sup_upper_reference_part: r_sup,
        inf_lower_reference_part: r_inf,
        violations,
    };
    let (big_m, m, h) = (0.17, -0.15, 1e-6);
    let fd = l_at(a, big_m, m + h).and_then(|p| Ok((p - l_at(a, big_m, m - h)?) * (0.5 / h)));
    let exact = BoundParams::points(a, big_m, m).and_then(|p| dl_dm(&p));
    let fd_check = match (fd, exact) {
        (Ok(fd), Ok(ex)) => {
            let slack = 1e-6;
            let holds = fd.lo() >= ex.lo() - slack && fd.hi() <= ex.hi() + slack;
            Check {
                name: "central difference of L at (0.17, -0.15) lies in dL/dm".into(),
                holds,
                lower: ex.lo(),
                upper: ex.hi(),
                note: Some(format!("difference quotient {fd}")),
            }
        }
        (Err(e), _) | (_, Err(e)) => flag(
            "central difference at (0.17, -0.15)",
            false,
            Some(e.to_string()),
        ),
    };
    let ev = Evidence {
        billiards: vec![],
        checks: vec![fd_check],
        grid: Some(grid),
    };
    finish(LemmaId::L2_15b, t0, ev)
}

/// `m > C(m)` on `[-1/9, -0.009]`, via `q(t) = -C(-t)` on `[0.009, 1/9]`.
pub fn verify_2_15c(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let (lo, hi) = table(0.009, 1.0 / 9.0);
    let pb = BilliardProblem::identity(move |t| c_of(a, -t).map(|v| -v).map_err(err_str), lo, hi)
        .with_max_steps(cfg.max_steps)
        .with_extra_down_ulps(cfg.extra_down_ulps);
    let cs: Vec<Result<Interval, BoundsError>> = [-0.1, -0.05, -0.02]
        .into_iter()
        .map(|m| c_of(a, m))
        .collect();
    let increasing = match (&cs[0], &cs[1], &cs[2]) {
        (Ok(x), Ok(y), Ok(z)) => flag("C(-0.1) < C(-0.05) < C(-0.02)", x.lt(y) && y.lt(z), None),
        _ => flag(
            "C(-0.1) < C(-0.05) < C(-0.02)",
            false,
            Some("evaluation failed".into()),
        ),
    };
    let ev = Evidence {
        billiards: vec![named("q(t) = -C(-t), p(t) = t", pb)],
        checks: vec![
            check("C(-0.05) < -0.05", c_of(a, -0.05), |v| v.hi() < -0.05),
            increasing,
        ],
        grid: None,
    };
    finish(LemmaId::L2_15c, t0, ev)
}

/// `m < C(m)` on `[-0.61, -0.25]`.
pub fn verify_2_15d(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let (lo, hi) = table(-0.61, -0.25);
    let pb = BilliardProblem::identity(move |t| c_of(a, t).map_err(err_str), lo, hi)
        .with_max_steps(cfg.max_steps)
        .with_extra_down_ulps(cfg.extra_down_ulps);
    let ev = Evidence {
        billiards: vec![named("q(t) = C(t), p(t) = t", pb)],
        checks: vec![
            check("A(-0.25) < 0.377", big_a(Interval::point(-0.25), a), |v| {
                v.hi() < 0.377
            }),
            check("C(-0.4) > -0.4", c_of(a, -0.4), |v| v.lo() > -0.4),
        ],
        grid: None,
    };
    finish(LemmaId::L2_15d, t0, ev)
}

/// Certified lower bound of `Z_a(M, m) = D_a(M, m) / a^2`.
fn z_lower(a: Interval, big_m: f64, m: f64, cfg: &DConfig) -> Result<Interval, BoundsError> {
    let d = d_enclosure(&BoundParams::points(a, big_m, m)?, Mode::Lower, cfg)?;
    Ok(Interval::point(d).div(a.sqr())?)
}

/// Inverse of `p(t) = t / (2 (1 - t)^2)` on `(0, 1)`: `1 / (z + sqrt(z^2 - 1))`
/// with `z = 1 + 1 / (4 y)`.
pub fn p_inverse_4_8(y: f64) -> Result<Interval, String> {
    if !(y > 0.0) {
        return Err(format!("p^-1 needs y > 0, got {y}"));
    }
    let y = Interval::point(y);
    let z = (y * 4.0).recip().map_err(|e| e.to_string())? + 1.0;
    let root = (z.sqr() - 1.0).sqrt().map_err(|e| e.to_string())?;
    (z + root).recip().map_err(|e| e.to_string())
}

fn p_4_8(t: Interval) -> Result<Interval, String> {
    (t * 0.5).div((1.0 - t).sqr()).map_err(|e| e.to_string())
}

/// `-m / (2 (1 + m)^2) < Z_{-3/2}(M, m)` on the two parts of the region.
pub fn verify_4_8(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = a_three_halves();
    let d = cfg.d;
    let (lo, hi) = table(0.0093, 0.2343);
    let first = BilliardProblem::new(
        move |t| z_lower(a, t, -t, &d).map_err(err_str),
        p_inverse_4_8,
        lo,
        hi,
    )
    .with_max_steps(cfg.max_steps)
    .with_extra_down_ulps(cfg.extra_down_ulps);
    let (lo, hi) = table(0.21, 0.25);
    let second = BilliardProblem::new(
        move |t| z_lower(a, 0.27, -t, &d).map_err(err_str),
        p_inverse_4_8,
        lo,
        hi,
    )
    .with_max_steps(cfg.max_steps)
    .with_extra_down_ulps(cfg.extra_down_ulps);
    let beta = z_lower(a, 0.1, -0.1, &d).and_then(|z| {
        let p = BoundParams::points(a, 0.1, -0.1)?;
        Ok(tilde_breakpoints(&p, z * a.sqr())?.1)
    });
    let round_trip = p_4_8(Interval::point(0.1)).and_then(|y| {
        let lo = p_inverse_4_8(y.lo())?;
        let hi = p_inverse_4_8(y.hi())?;
        Ok(lo.hull(&hi))
    });
    let ev = Evidence {
        billiards: vec![
            named("q(t) = Z(t, -t), p(t) = t / (2 (1 - t)^2)", first),
            named("q(t) = Z(0.27, -t), p(t) = t / (2 (1 - t)^2)", second),
        ],
        checks: vec![
            check("beta~ < 0 at (0.1, -0.1)", beta, |v| v.hi() < 0.0),
            check("p^-1(p(0.1)) contains 0.1", round_trip, |v| v.contains(0.1)),
        ],
        grid: None,
    };
    finish(LemmaId::L4_8, t0, ev)
}

fn sigma_at(
    a: Interval,
    big_m: f64,
    m: f64,
    mode: Mode,
    cfg: &DConfig,
) -> Result<f64, BoundsError> {
    sigma_enclosure(&BoundParams::points(a, big_m, m)?, mode, cfg)
}

/// `Sigma(-m, m) > -m` on `[-0.26, -0.0093]` and the fixed-point spot checks.
pub fn verify_4_18(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let d = cfg.d;
    let (lo, hi) = table(0.0093, 0.26);
    let pb = BilliardProblem::identity(
        move |t| {
            sigma_at(a, t, -t, Mode::Lower, &d)
                .map(Interval::point)
                .map_err(err_str)
        },
        lo,
        hi,
    )
    .with_max_steps(cfg.max_steps)
    .with_extra_down_ulps(cfg.extra_down_ulps);
    let pair = |big_m: f64, m: f64| -> Result<Interval, BoundsError> {
        let lo = sigma_at(a, big_m, m, Mode::Lower, &d)?;
        let hi = sigma_at(a, big_m, m, Mode::Upper, &d)?;
        Ok(Interval::raw(lo, hi.max(lo)))
    };
    let gamma = big_a(Interval::point(-0.1), a).and_then(|am| {
        let s = sigma_at(a, am.lo() * (1.0 - 1e-12), -0.1, Mode::Upper, &d)?;
        Ok(Interval::raw(s, am.lo().max(s)))
    });
    let ev = Evidence {
        billiards: vec![named("q(t) = Sigma(t, -t), p(t) = t", pb)],
        checks: vec![
            check("Sigma(0.27, -0.2343) > 0.27", pair(0.27, -0.2343), |v| {
                v.lo() > 0.27
            }),
            check(
                "Sigma(0.27, -0.2343) in [0.29, 0.31]",
                pair(0.27, -0.2343),
                |v| v.lo() >= 0.29 && v.hi() <= 0.31,
            ),
            check("Sigma(0.1, -0.1) > 0.1", pair(0.1, -0.1), |v| v.lo() > 0.1),
            check("Sigma(A(m)(1 - 1e-12), m) < A(m) at m = -0.1", gamma, |v| {
                v.lo() < v.hi()
            }),
        ],
        grid: None,
    };
    finish(LemmaId::L4_18, t0, ev)
}

/// `m_5(0.009401) > -0.0093` and the value of `L(0.0094, -0.009)`.
pub fn verify_remark_2_18(cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = cfg.a;
    let mk = |big_m: f64, k: usize| m_k(big_m, k, a).map(|v| Interval::point(v.0));
    let ev = Evidence {
        billiards: vec![],
        checks: vec![
            check("m_5(0.009401) > -0.0093", mk(0.009401, 5), |v| {
                v.lo() > M_EXIT
            }),
            check(
                "L(0.0094, -0.009) = -0.00927019 +- 1e-8",
                l_at(a, 0.0094, -0.009),
                |v| v.lo() >= -0.00927019 - 1e-8 && v.hi() <= -0.00927019 + 1e-8,
            ),
            check("L(0.0094, -0.009) < -0.009", l_at(a, 0.0094, -0.009), |v| {
                v.hi() < -0.009
            }),
            check("m_1(0.01) > -0.01", mk(0.01, 1), |v| v.lo() > -0.01),
            // m_5(0.27) is about -0.19947, so -0.2 is the bound that holds.
            check("m_5(0.27) > -0.2", mk(0.27, 5), |v| v.lo() > -0.2),
        ],
        grid: None,
    };
    finish(LemmaId::Remark2_18, t0, ev)
}

type Q = Rational64;

/// `∫_lo^hi sum c_i s^i ds` in exact arithmetic.
fn integrate(coeffs: &[Q], lo: Q, hi: Q) -> Q {
    let prim = |x: Q| {
        coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(Q::from_integer(0), |acc, (i, c)| {
                let n = i as i64 + 1;
                acc + c / n * pow(x, n)
            })
    };
    prim(hi) - prim(lo)
}

fn pow(x: Q, n: i64) -> Q {
    (0..n).fold(Q::from_integer(1), |acc, _| acc * x)
}

/// Residual of `G(0, -1) = 0` as a function of the slope.
pub fn appendix1_residual(a: Q) -> Q {
    let one = Q::from_integer(1);
    let ap = Q::new(3, 2) / a;
    let bp = Q::new(1, 2) / a;
    let a3 = a * a * a;
    let linear = integrate(&[Q::from_integer(0), a * a], bp, Q::from_integer(0));
    let parabola = integrate(&[a - a3 * ap * ap / 2, a3 * ap, -a3 / 2], ap, bp);
    linear + parabola + a * (ap + 1) + one
}

/// `∂G/∂μ` at `(0, -1)`.
pub fn appendix1_g_mu(a: Q) -> Q {
    let ap = Q::new(3, 2) / a;
    let bp = Q::new(1, 2) / a;
    let half_a2 = a * a / 2;
    // (a^2/2)(-a u^2 - u) with u = s - ap, expanded in s
    let coeffs = [
        half_a2 * (-a * ap * ap + ap),
        half_a2 * (a * ap * 2 - 1),
        half_a2 * -a,
    ];
    Q::from_integer(1) + integrate(&coeffs, ap, bp)
}

fn root_check(name: &str, roots: &[RootEnclosure], expect: Interval) -> Check {
    let hit = roots
        .iter()
        .find(|r| r.bracket.intersect(&expect).is_some());
    match hit {
        Some(r) => Check {
            name: name.into(),
            holds: r.certified && r.bracket.hull(&expect).width() < 1e-12,
            lower: r.bracket.lo(),
            upper: r.bracket.hi(),
            note: None,
        },
        None => flag(
            name,
            false,
            Some("no enclosure meets the expected root".into()),
        ),
    }
}

/// The slope `-37/24` from the tangency relation, `∂G/∂μ(0, -1) = 11/12`,
/// and the roots of `24 μ^3 + 25 μ^2 - 1`.
pub fn verify_appendix1(_cfg: &VerifyConfig) -> LemmaVerdict {
    let t0 = Instant::now();
    let a = Q::new(-37, 24);
    let eps = Q::new(1, 1000);
    let r0 = appendix1_residual(a);
    let samples: Vec<Q> = (-3..=3).map(|i| appendix1_residual(a + eps * i)).collect();
    let monotone = samples.windows(2).all(|w| w[0] < w[1]);
    let g_mu = appendix1_g_mu(a);
    let to_f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
    let mut checks = vec![
        Check {
            name: "residual vanishes at a = -37/24".into(),
            holds: r0 == Q::from_integer(0),
            lower: to_f(r0),
            upper: to_f(r0),
            note: Some(format!("R = {r0}")),
        },
        flag(
            "residual increasing near -37/24",
            monotone,
            Some(format!("{samples:?}")),
        ),
        Check {
            name: "dG/dmu(0, -1) = 11/12".into(),
            holds: g_mu == Q::new(11, 12),
            lower: to_f(g_mu),
            upper: to_f(g_mu),
            note: Some(format!("{g_mu}")),
        },
    ];
    let cubic = [24.0, 25.0, 0.0, -1.0];
    let sqrt97 = Interval::point(97.0).sqrt().expect("positive");
    let r_minus = (-1.0 - sqrt97) * Interval::ratio(1, 48);
    let r_plus = (sqrt97 - 1.0) * Interval::ratio(1, 48);
    match verified_real_roots(&cubic, Interval::raw(-1.5, 0.0)) {
        Ok(rs) => {
            checks.push(flag(
                "two roots in [-1.5, 0]",
                rs.len() == 2,
                Some(format!("{} found", rs.len())),
            ));
            checks.push(root_check("root -1", &rs, Interval::point(-1.0)));
            checks.push(root_check("root (-1 - sqrt 97)/48", &rs, r_minus));
        }
        Err(e) => checks.push(flag("roots in [-1.5, 0]", false, Some(e.to_string()))),
    }
    match verified_real_roots(&cubic, Interval::raw(-1.5, 1.0)) {
        Ok(rs) => checks.push(root_check("root (-1 + sqrt 97)/48", &rs, r_plus)),
        Err(e) => checks.push(flag("roots in [-1.5, 1]", false, Some(e.to_string()))),
    }
    match verified_real_roots(&cubic, Interval::raw(-1.1, -0.9)) {
        Ok(rs) => checks.push(flag(
            "-1 is the only root in [-1.1, -0.9]",
            rs.len() == 1 && rs[0].certified && rs[0].bracket.contains(-1.0),
            Some(format!("{rs:?}")),
        )),
        Err(e) => checks.push(flag(
            "-1 is the only root in [-1.1, -0.9]",
            false,
            Some(e.to_string()),
        )),
    }
    finish(
        LemmaId::Appendix1,
        t0,
        Evidence {
            billiards: vec![],
            checks,
            grid: None,
        },
    )
}
