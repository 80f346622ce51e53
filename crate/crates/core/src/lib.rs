//! Validated numerics for the global stability of `x'(t) = f(x(t-1))` with
//! `-37/24 <= f'(0) < 0` under negative Schwarzian hypotheses.
//!
//! The crate evaluates the bounding functions for the extrema `(M, m)` of a
//! slowly oscillating periodic solution with outward-rounded interval
//! arithmetic, certifies the auxiliary inequalities with the billiard
//! recursion, and runs the staircase iteration showing that no admissible
//! pair exists.

pub mod billiard;
pub mod bounds;
pub mod interval;
pub mod report;
pub mod roots;
pub mod separation;
mod serde_float;
pub mod verifiers;

pub use interval::{Interval, IntervalError};
