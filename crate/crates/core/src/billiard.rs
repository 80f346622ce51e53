//! Separation of two curves by a monotone "billiard" recursion.
//!
//! To show `q(t) > p(t)` on `[t_start, t_end]` with `q` nondecreasing and `p`
//! strictly increasing, iterate `t_{j+1} = p^{-1}(q(t_j))` from `t_start`.
//! If the sequence increases strictly and leaves the interval, the inequality
//! holds everywhere on it. Each step keeps only the lower endpoint of the
//! enclosures of `q(t_j)` and of `p^{-1}`, which can only shorten steps.

use serde::{Deserialize, Serialize};

use crate::interval::Interval;

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

type Rigorous<'a> = Box<dyn Fn(f64) -> Result<Interval, String> + Send + Sync + 'a>;

pub struct BilliardProblem<'a> {
    /// Nondecreasing on an open superset of `[t_start, t_end]`.
    pub q: Rigorous<'a>,
    /// Inverse of the strictly increasing `p`.
    pub p_inverse: Rigorous<'a>,
    pub t_start: f64,
    pub t_end: f64,
    pub max_steps: usize,
    /// Extra ulps removed from every step, for robustness checks.
    pub extra_down_ulps: u32,
}

impl<'a> BilliardProblem<'a> {
    pub fn new(
        q: impl Fn(f64) -> Result<Interval, String> + Send + Sync + 'a,
        p_inverse: impl Fn(f64) -> Result<Interval, String> + Send + Sync + 'a,
        t_start: f64,
        t_end: f64,
    ) -> Self {
        BilliardProblem {
            q: Box::new(q),
            p_inverse: Box::new(p_inverse),
            t_start,
            t_end,
            max_steps: DEFAULT_MAX_STEPS,
            extra_down_ulps: 0,
        }
    }

    /// `p(t) = t`.
    pub fn identity(
        q: impl Fn(f64) -> Result<Interval, String> + Send + Sync + 'a,
        t_start: f64,
        t_end: f64,
    ) -> Self {
        Self::new(q, |y| Ok(Interval::point(y)), t_start, t_end)
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn with_extra_down_ulps(mut self, n: u32) -> Self {
        self.extra_down_ulps = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Stalled,
    MaxSteps,
    DomainError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilliardOutcome {
    pub separated: bool,
    /// Number of terms `J0` in the trajectory.
    pub steps: usize,
    pub trajectory: Vec<f64>,
    pub failure_reason: Option<FailureReason>,
    pub failure_detail: Option<String>,
    pub t_start: f64,
    pub t_end: f64,
}

pub fn run(problem: &BilliardProblem<'_>) -> BilliardOutcome {
    assert!(problem.t_start < problem.t_end, "empty billiard table");
    let mut traj = vec![problem.t_start];
    let finish =
        |traj: Vec<f64>, reason: Option<FailureReason>, detail: Option<String>| BilliardOutcome {
            separated: reason.is_none(),
            steps: traj.len(),
            trajectory: traj,
            failure_reason: reason,
            failure_detail: detail,
            t_start: problem.t_start,
            t_end: problem.t_end,
        };
    let mut t = problem.t_start;
    loop {
        if traj.len() >= problem.max_steps {
            return finish(traj, Some(FailureReason::MaxSteps), None);
        }
        let next = (problem.q)(t)
            .and_then(|qv| (problem.p_inverse)(qv.lo()))
            .map(|v| {
                let mut x = v.lo();
                for _ in 0..problem.extra_down_ulps {
                    x = x.next_down();
                }
                x
            });
        let next = match next {
            Ok(x) => x,
            Err(e) => return finish(traj, Some(FailureReason::DomainError), Some(e)),
        };
        if !(next > t) {
            return finish(
                traj,
                Some(FailureReason::Stalled),
                Some(format!("t = {t:e} maps to {next:e}")),
            );
        }
        traj.push(next);
        if next > problem.t_end {
            return finish(traj, None, None);
        }
        t = next;
    }
}
