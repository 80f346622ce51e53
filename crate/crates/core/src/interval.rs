//! Closed intervals over binary64 with outward rounding.
//!
//! Every operation computes its endpoints in round-to-nearest and then steps
//! each endpoint outward by one representable value (two for the elementary
//! functions). The hardware rounding mode is never touched, so values can be
//! shared freely across threads.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),
    #[error("{op}: argument {arg} outside the domain")]
    Domain { op: &'static str, arg: Interval },
    #[error("invalid endpoints [{0}, {1}]")]
    Invalid(f64, f64),
}

thread_local! {
    static OUTWARD: Cell<bool> = const { Cell::new(true) };
}

/// Runs `f` with outward stepping switched off on the current thread.
///
/// Test hook only: results computed inside are plain floating point and carry
/// no guarantee. Work dispatched to other threads keeps the default.
pub fn with_outward_rounding_disabled<R>(f: impl FnOnce() -> R) -> R {
    struct Restore(bool);
    impl Drop for Restore {
        fn drop(&mut self) {
            OUTWARD.with(|c| c.set(self.0));
        }
    }
    let prev = OUTWARD.with(|c| c.replace(false));
    let _restore = Restore(prev);
    f()
}

#[inline]
fn outward() -> bool {
    OUTWARD.with(|c| c.get())
}

#[inline]
fn down(x: f64) -> f64 {
    if outward() {
        x.next_down()
    } else {
        x
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if outward() {
        x.next_up()
    } else {
        x
    }
}

/// Below this magnitude FMA residuals may be inexact, so steps are taken blindly.
const TINY: f64 = 1e-290;

/// Directed rounding of `r = fl(op)` given the sign of the exact residual
/// `op - r`, or a blind step when the residual is unreliable.
#[inline]
fn settle(r: f64, err: f64, reliable: bool, towards_up: bool) -> f64 {
    if !outward() || r.is_nan() {
        return r;
    }
    if !reliable || !r.is_finite() || !err.is_finite() {
        return if towards_up {
            r.next_up()
        } else {
            r.next_down()
        };
    }
    match (towards_up, err > 0.0, err < 0.0) {
        (true, true, _) => r.next_up(),
        (false, _, true) => r.next_down(),
        _ => r,
    }
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
fn add_r(a: f64, b: f64, up: bool) -> f64 {
    let s = a + b;
    settle(s, two_sum_err(a, b, s), true, up)
}

#[inline]
fn mul_r(a: f64, b: f64, up: bool) -> f64 {
    let p = a * b;
    let ok = p == 0.0 && (a == 0.0 || b == 0.0) || p.abs() > TINY;
    settle(p, a.mul_add(b, -p), ok, up)
}

#[inline]
fn div_r(a: f64, b: f64, up: bool) -> f64 {
    let q = a / b;
    if a == 0.0 {
        return q;
    }
    let ok = q.abs() > TINY && a.abs() > TINY;
    // sign of a/b - q equals sign of (a - q b) / b
    let rem = (-q).mul_add(b, a);
    settle(q, if b > 0.0 { rem } else { -rem }, ok, up)
}

#[inline]
fn sqrt_r(x: f64, up: bool) -> f64 {
    let r = x.sqrt();
    if x == 0.0 {
        return r;
    }
    settle(r, (-r).mul_add(r, x), x > TINY, up)
}

#[inline]
fn down2(x: f64) -> f64 {
    down(down(x))
}

#[inline]
fn up2(x: f64) -> f64 {
    up(up(x))
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    #[serde(with = "crate::serde_float")]
    lo: f64,
    #[serde(with = "crate::serde_float")]
    hi: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;
    fn try_from(r: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(r.lo, r.hi)
    }
}

impl From<Interval> for RawInterval {
    fn from(x: Interval) -> Self {
        RawInterval { lo: x.lo, hi: x.hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(IntervalError::Invalid(lo, hi));
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        assert!(
            x.is_finite(),
            "point interval needs a finite value, got {x}"
        );
        Interval { lo: x, hi: x }
    }

    /// Enclosure of the rational `p/q`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Interval::point(p as f64)
            .div(Interval::point(q as f64))
            .expect("nonzero denominator")
    }

    /// Enclosure of a decimal literal, valid whatever the parser's rounding.
    pub fn from_decimal(s: &str) -> Result<Self, IntervalError> {
        let x: f64 = s
            .trim()
            .parse()
            .map_err(|_| IntervalError::Invalid(f64::NAN, f64::NAN))?;
        if !x.is_finite() {
            return Err(IntervalError::Invalid(x, x));
        }
        Ok(Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        })
    }

    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "raw interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Contiguous pieces sharing endpoints; the first starts at `lo` and the
    /// last ends at `hi`.
    pub fn split(&self, parts: usize) -> Vec<Interval> {
        assert!(parts >= 1, "split needs at least one part");
        let step = self.width() / parts as f64;
        let mut cuts: Vec<f64> = (0..=parts).map(|i| self.lo + step * i as f64).collect();
        cuts[parts] = self.hi;
        for i in 1..parts {
            cuts[i] = cuts[i].clamp(cuts[i - 1], self.hi);
        }
        cuts.windows(2)
            .map(|w| Interval { lo: w[0], hi: w[1] })
            .collect()
    }

    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    /// Certainly strictly below `other`.
    pub fn lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Certainly strictly above `other`.
    pub fn gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn div(self, y: Interval) -> Result<Interval, IntervalError> {
        if y.contains_zero() {
            return Err(IntervalError::DivisionByZero(y));
        }
        Ok(from_candidates(
            [
                (self.lo, y.lo),
                (self.lo, y.hi),
                (self.hi, y.lo),
                (self.hi, y.hi),
            ],
            div_r,
        ))
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        Interval::point(1.0).div(self)
    }

    pub fn sqr(self) -> Interval {
        let (l, h) = (self.lo.abs(), self.hi.abs());
        if self.lo >= 0.0 {
            Interval {
                lo: mul_r(l, l, false).max(0.0),
                hi: mul_r(h, h, true),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: mul_r(h, h, false).max(0.0),
                hi: mul_r(l, l, true),
            }
        } else {
            let m = l.max(h);
            Interval {
                lo: 0.0,
                hi: mul_r(m, m, true),
            }
        }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::Domain {
                op: "sqrt",
                arg: self,
            });
        }
        Ok(Interval {
            lo: sqrt_r(self.lo, false).max(0.0),
            hi: sqrt_r(self.hi, true),
        })
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain {
                op: "ln",
                arg: self,
            });
        }
        let lo = if self.lo == 1.0 {
            0.0
        } else {
            down2(self.lo.ln())
        };
        let hi = if self.hi == 1.0 {
            0.0
        } else {
            up2(self.hi.ln())
        };
        Ok(Interval { lo, hi })
    }

    pub fn atan(self) -> Interval {
        let lo = if self.lo == 0.0 {
            0.0
        } else {
            down2(self.lo.atan())
        };
        let hi = if self.hi == 0.0 {
            0.0
        } else {
            up2(self.hi.atan())
        };
        Interval { lo, hi }
    }

    /// Image under a nondecreasing `f`, evaluated at the endpoints.
    pub fn map_increasing<E>(
        self,
        f: impl Fn(Interval) -> Result<Interval, E>,
    ) -> Result<Interval, E> {
        if self.is_point() {
            return f(self);
        }
        let a = f(Interval::point(self.lo))?;
        let b = f(Interval::point(self.hi))?;
        Ok(Interval {
            lo: a.lo.min(b.lo),
            hi: b.hi.max(a.hi),
        })
    }

    /// Image under a nonincreasing `f`, evaluated at the endpoints.
    pub fn map_decreasing<E>(
        self,
        f: impl Fn(Interval) -> Result<Interval, E>,
    ) -> Result<Interval, E> {
        if self.is_point() {
            return f(self);
        }
        let a = f(Interval::point(self.lo))?;
        let b = f(Interval::point(self.hi))?;
        Ok(Interval {
            lo: b.lo.min(a.lo),
            hi: a.hi.max(b.hi),
        })
    }
}

fn from_candidates(c: [(f64, f64); 4], op: fn(f64, f64, bool) -> f64) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (x, y) in c {
        let l = op(x, y, false);
        let h = op(x, y, true);
        // NaN only arises from 0 * inf, which needs an unbounded endpoint.
        lo = if l.is_nan() {
            f64::NEG_INFINITY
        } else {
            lo.min(l)
        };
        hi = if h.is_nan() { f64::INFINITY } else { hi.max(h) };
    }
    Interval { lo, hi }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, y: Interval) -> Interval {
        Interval {
            lo: add_r(self.lo, y.lo, false),
            hi: add_r(self.hi, y.hi, true),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, y: Interval) -> Interval {
        Interval {
            lo: add_r(self.lo, -y.hi, false),
            hi: add_r(self.hi, -y.lo, true),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, y: Interval) -> Interval {
        if self.lo >= 0.0 && y.lo >= 0.0 {
            return Interval {
                lo: mul_r(self.lo, y.lo, false).max(0.0),
                hi: mul_r(self.hi, y.hi, true),
            };
        }
        from_candidates(
            [
                (self.lo, y.lo),
                (self.lo, y.hi),
                (self.hi, y.lo),
                (self.hi, y.hi),
            ],
            mul_r,
        )
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, y: f64) -> Interval {
                $tr::$m(self, Interval::point(y))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, y: Interval) -> Interval {
                $tr::$m(Interval::point(self), y)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul);

/// `x / (1 + x)` on `x > -1`, evaluated at the endpoints (it is increasing).
pub fn frac(x: Interval) -> Result<Interval, IntervalError> {
    if x.lo() <= -1.0 {
        return Err(IntervalError::Domain {
            op: "x/(1+x)",
            arg: x,
        });
    }
    x.map_increasing(|p| p.div(p + 1.0))
}
