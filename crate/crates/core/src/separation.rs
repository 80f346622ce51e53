//! The staircase argument: certified lower curve `m_k(M)`, certified upper
//! curve `theta_n(m)`, and the iteration `M_{j+1} = theta_n(m_k(M_j))` that
//! walks between them until it leaves the table.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    a_critical, big_a, l_value, sigma_enclosure, BoundParams, BoundsError, DConfig, Mode,
};
use crate::interval::Interval;

/// The exit level for `m`: no admissible pair has `m > -0.0093`.
pub const M_EXIT: f64 = -0.0093;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;
const SAMPLE_CAP: usize = 512;

/// A value known to lie at or below the quantity it bounds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LowerBound(pub f64);

/// A value known to lie at or above the quantity it bounds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UpperBound(pub f64);

impl LowerBound {
    /// Keep the lower end of an enclosure.
    pub fn of(x: Interval) -> Self {
        LowerBound(x.lo())
    }
}

impl UpperBound {
    pub fn of(x: Interval) -> Self {
        UpperBound(x.hi())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparationError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("iterates of m_k decreased from {from:e} to {to:e}")]
    Consistency { from: f64, to: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// `m_k(M)`: `m_0 = -M`, `m_{i+1} = L(M, m_i)` rounded down.
///
/// Stops early once the rounded iterates stop increasing; every iterate is a
/// valid lower bound, so stopping is harmless.
pub fn m_k(big_m: f64, k: usize, a: Interval) -> Result<LowerBound, SeparationError> {
    Ok(m_k_trace(big_m, k, a)?.0)
}

/// `m_k(M)` together with the last `L` enclosure (if any step was taken).
pub fn m_k_trace(
    big_m: f64,
    k: usize,
    a: Interval,
) -> Result<(LowerBound, Option<Interval>), SeparationError> {
    let mut cur = -big_m;
    let mut last = None;
    for _ in 0..k {
        let v = l_value(&BoundParams::points(a, big_m, cur)?)?;
        let next = v.lo();
        if next <= cur {
            // a drop larger than rounding noise means the bound is broken
            if cur - next > 64.0 * v.width().max(f64::EPSILON * cur.abs()) {
                return Err(SeparationError::Consistency {
                    from: cur,
                    to: next,
                });
            }
            break;
        }
        last = Some(v);
        cur = next;
    }
    Ok((LowerBound(cur), last))
}

/// `theta_n(m)`: `theta_0 = A(m)`, `theta_{i+1} = Sigma_upper(theta_i, m)`.
pub fn theta_n(
    m: f64,
    n: usize,
    a: Interval,
    cfg: &DConfig,
) -> Result<UpperBound, SeparationError> {
    let mut t = UpperBound::of(big_a(Interval::point(m), a)?).0;
    for _ in 0..n {
        let next = sigma_enclosure(&BoundParams::points(a, t, m)?, Mode::Upper, cfg)?;
        // every iterate bounds theta from above; keep the smallest
        if next >= t {
            break;
        }
        t = next;
    }
    Ok(UpperBound(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    #[serde(rename = "M_start")]
    pub m_start: f64,
    #[serde(rename = "M_stop")]
    pub m_stop: f64,
    pub k: usize,
    pub n: usize,
    pub max_iterations: usize,
    pub parallel_chunks: usize,
    pub a: Interval,
    pub d: DConfig,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            m_start: 0.377,
            m_stop: 0.00940007,
            k: 5,
            n: 6,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            parallel_chunks: 1,
            a: a_critical(),
            d: DConfig::default(),
        }
    }
}

impl SeparationConfig {
    pub fn range(m_start: f64, m_stop: f64) -> Self {
        SeparationConfig {
            m_start,
            m_stop,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), SeparationError> {
        let ok_range = 0.0094 <= self.m_stop && self.m_stop < self.m_start && self.m_start <= 0.377;
        if !ok_range {
            return Err(SeparationError::Config(format!(
                "need 0.0094 <= M_stop < M_start <= 0.377, got [{}, {}]",
                self.m_stop, self.m_start
            )));
        }
        if self.k == 0 || self.n == 0 || self.parallel_chunks == 0 {
            return Err(SeparationError::Config(
                "k, n and chunks must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationExit {
    /// `m_k(M_j) > -0.0093`.
    MAboveExit,
    /// `M_j < M_stop`.
    BelowStop,
    Stalled,
    MaxIterations,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkReport {
    #[serde(rename = "M_start")]
    pub m_start: f64,
    #[serde(rename = "M_stop")]
    pub m_stop: f64,
    pub iterations: usize,
    #[serde(rename = "final_M")]
    pub final_big_m: f64,
    #[serde(with = "crate::serde_float")]
    pub final_m: f64,
    pub separated: bool,
    pub exit: SeparationExit,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub config: SeparationConfig,
    /// Staircase steps `M_j -> M_{j+1}` over all chunks.
    pub iterations: usize,
    #[serde(rename = "final_M")]
    pub final_big_m: f64,
    #[serde(with = "crate::serde_float")]
    pub final_m: f64,
    pub separated: bool,
    pub elapsed_ms: f64,
    /// `(M_j, m_k(M_j))`, decimated.
    pub trajectory_sample: Vec<(f64, f64)>,
    pub chunks: Vec<ChunkReport>,
}

/// Runs the staircase on `[M_stop, M_start]`, split into
/// `parallel_chunks` closed pieces that share their endpoints.
pub fn run_separation(cfg: &SeparationConfig) -> Result<SeparationReport, SeparationError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let c = cfg.parallel_chunks;
    let w = (cfg.m_start - cfg.m_stop) / c as f64;
    let mut cuts: Vec<f64> = (0..=c).map(|i| cfg.m_start - w * i as f64).collect();
    cuts[c] = cfg.m_stop;
    let runs: Vec<(ChunkReport, Vec<(f64, f64)>)> = cuts
        .par_windows(2)
        .map(|win| staircase(cfg, win[0], win[1]))
        .collect();
    let iterations = runs.iter().map(|r| r.0.iterations).sum();
    let separated = runs.iter().all(|r| r.0.separated);
    let last = &runs.last().expect("at least one chunk").0;
    let all: Vec<(f64, f64)> = runs.iter().flat_map(|r| r.1.iter().copied()).collect();
    Ok(SeparationReport {
        config: *cfg,
        iterations,
        final_big_m: last.final_big_m,
        final_m: last.final_m,
        separated,
        elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
        trajectory_sample: decimate(&all, SAMPLE_CAP),
        chunks: runs.into_iter().map(|r| r.0).collect(),
    })
}

fn decimate(v: &[(f64, f64)], cap: usize) -> Vec<(f64, f64)> {
    if v.len() <= cap {
        return v.to_vec();
    }
    let stride = v.len().div_ceil(cap);
    let mut out: Vec<(f64, f64)> = v.iter().step_by(stride).copied().collect();
    if out.last() != v.last() {
        out.push(*v.last().expect("nonempty"));
    }
    out
}

fn staircase(cfg: &SeparationConfig, m_start: f64, m_stop: f64) -> (ChunkReport, Vec<(f64, f64)>) {
    let mut traj = Vec::new();
    let mut big = m_start;
    let mut iterations = 0;
    let mut prev_m = f64::NEG_INFINITY;
    let report = |iterations, big, m, exit: SeparationExit, detail: Option<String>| ChunkReport {
        m_start,
        m_stop,
        iterations,
        final_big_m: big,
        final_m: m,
        separated: matches!(exit, SeparationExit::MAboveExit | SeparationExit::BelowStop),
        exit,
        detail,
    };
    loop {
        let m = match m_k(big, cfg.k, cfg.a) {
            Ok(m) => m.0,
            Err(e) => {
                return (
                    report(
                        iterations,
                        big,
                        f64::NAN,
                        SeparationExit::Error,
                        Some(e.to_string()),
                    ),
                    traj,
                )
            }
        };
        traj.push((big, m));
        if !(m > prev_m) {
            let d = format!("m_k did not increase: {prev_m:e} then {m:e} at M = {big:e}");
            return (
                report(iterations, big, m, SeparationExit::Stalled, Some(d)),
                traj,
            );
        }
        prev_m = m;
        if m > M_EXIT {
            return (
                report(iterations, big, m, SeparationExit::MAboveExit, None),
                traj,
            );
        }
        if iterations >= cfg.max_iterations {
            return (
                report(iterations, big, m, SeparationExit::MaxIterations, None),
                traj,
            );
        }
        let next = match theta_n(m, cfg.n, cfg.a, &cfg.d) {
            Ok(t) => t.0,
            Err(e) => {
                return (
                    report(
                        iterations,
                        big,
                        m,
                        SeparationExit::Error,
                        Some(e.to_string()),
                    ),
                    traj,
                )
            }
        };
        if !(next < big) {
            let d = format!("theta_n(m_k(M)) = {next:e} is not below M = {big:e}");
            return (
                report(iterations, big, m, SeparationExit::Stalled, Some(d)),
                traj,
            );
        }
        iterations += 1;
        if iterations % 1000 == 0 {
            log::info!(
                "chunk [{m_stop}, {m_start}]: step {iterations}, M = {next:.9e}, m = {m:.9e}"
            );
        }
        big = next;
        if big < m_stop {
            return (
                report(iterations, big, m, SeparationExit::BelowStop, None),
                traj,
            );
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    /// Lower bound of `L^(m)` obtained by inverting `m_k` in `M`.
    LhatLower,
    A,
    ThetaN,
    Mk,
}

impl std::str::FromStr for Curve {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lhat_lower" | "Lhat_lower" => Ok(Curve::LhatLower),
            "A" | "a" => Ok(Curve::A),
            "theta_n" => Ok(Curve::ThetaN),
            "m_k" => Ok(Curve::Mk),
            _ => Err(format!("unknown curve {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub a: Interval,
    pub k: usize,
    pub n: usize,
    pub d: DConfig,
}

impl Default for CurveParams {
    fn default() -> Self {
        CurveParams {
            a: a_critical(),
            k: 5,
            n: 6,
            d: DConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: f64,
    #[serde(with = "crate::serde_float")]
    pub lower: f64,
    #[serde(with = "crate::serde_float")]
    pub upper: f64,
    pub error: Option<String>,
}

/// Samples one curve on `grid`. `x` is `m` for `A`, `theta_n` and
/// `Lhat_lower`, and `M` for `m_k`. The certified side is `lower` for
/// `m_k` and `Lhat_lower`, `upper` for `theta_n`; the other column is the
/// matching end of the last enclosure, or a bracket, and carries no claim.
pub fn emit_curves(grid: &[f64], which: Curve, params: &CurveParams) -> Vec<CurveRow> {
    grid.par_iter()
        .map(|&x| match sample(x, which, params) {
            Ok((lower, upper)) => CurveRow {
                x,
                lower,
                upper,
                error: None,
            },
            Err(e) => CurveRow {
                x,
                lower: f64::NAN,
                upper: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn sample(x: f64, which: Curve, p: &CurveParams) -> Result<(f64, f64), SeparationError> {
    match which {
        Curve::A => {
            let v = big_a(Interval::point(x), p.a)?;
            Ok((v.lo(), v.hi()))
        }
        Curve::Mk => {
            let (lo, last) = m_k_trace(x, p.k, p.a)?;
            Ok((lo.0, last.map_or(lo.0, |v| v.hi())))
        }
        Curve::ThetaN => {
            let up = theta_n(x, p.n, p.a, &p.d)?;
            let lo = sigma_enclosure(&BoundParams::points(p.a, up.0, x)?, Mode::Lower, &p.d)?;
            Ok((lo.min(up.0), up.0))
        }
        Curve::LhatLower => lhat_lower(x, p),
    }
}

/// `m_k` is decreasing in `M`, so the largest grid `M` with `m_k(M) >= m`
/// is a lower bound for `L^(m)`. Returns that `M` and the first failing one.
fn lhat_lower(m: f64, p: &CurveParams) -> Result<(f64, f64), SeparationError> {
    let (mut lo, mut hi) = (0.0094, 0.377);
    let f = |big: f64| m_k(big, p.k, p.a).map(|v| v.0);
    if f(lo)? < m {
        return Err(SeparationError::Config(format!(
            "m = {m} lies below m_k(0.0094)"
        )));
    }
    if f(hi)? >= m {
        return Err(SeparationError::Config(format!(
            "m = {m} lies above m_k(0.377)"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? >= m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Writes rows as `x,lower,upper` with 17 significant digits.
pub fn write_csv(rows: &[CurveRow], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "x,lower,upper")?;
    for r in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", r.x, r.lower, r.upper)?;
    }
    Ok(())
}
