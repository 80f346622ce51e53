//! Verified real roots of polynomials of degree at most four.
//!
//! Coefficients are given highest degree first. Roots are located in floating
//! point, certified one by one with interval Newton, and the rest of the search
//! interval is then cleared by bisection on interval evaluations, so a
//! successful call misses no root.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;

/// Bracket of a real root. When `certified` holds the bracket contains exactly
/// one root, and it is simple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub bracket: Interval,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("degree {0} is outside 1..=4")]
    Degree(usize),
    #[error("leading coefficient may vanish")]
    LeadingZero,
    /// Some part of the search interval could be neither cleared nor
    /// certified. `cover` lists every enclosure found (certified or not); all
    /// roots in the search interval lie in their union.
    #[error("root isolation not certified ({} uncertified boxes)", .cover.iter().filter(|r| !r.certified).count())]
    Certification {
        approximations: Vec<f64>,
        cover: Vec<RootEnclosure>,
    },
}

/// Refinement budget, counted in interval polynomial evaluations.
pub const DEFAULT_BUDGET: usize = 20_000;

pub fn verified_real_roots(
    coeffs: &[f64],
    search: Interval,
) -> Result<Vec<RootEnclosure>, RootError> {
    let c: Vec<Interval> = coeffs.iter().map(|&x| Interval::point(x)).collect();
    verified_real_roots_interval(&c, search, DEFAULT_BUDGET)
}

/// Same as [`verified_real_roots`] for coefficients known only as intervals;
/// the guarantees then hold for every polynomial with coefficients inside.
pub fn verified_real_roots_interval(
    coeffs: &[Interval],
    search: Interval,
    budget: usize,
) -> Result<Vec<RootEnclosure>, RootError> {
    if coeffs.len() < 2 || coeffs.len() > 5 {
        return Err(RootError::Degree(coeffs.len().saturating_sub(1)));
    }
    if coeffs[0].contains_zero() {
        return Err(RootError::LeadingZero);
    }
    let dcoeffs = derivative(coeffs);
    let mid: Vec<f64> = coeffs.iter().map(|c| c.mid()).collect();
    let approx = approx_real_roots(&mid, search.lo(), search.hi());

    // Each certified root owns a Newton domain; the domains are disjoint.
    let mut owned: Vec<(Interval, Interval)> = Vec::new();
    for &r in &approx {
        if owned.iter().any(|(dom, _)| dom.contains(r)) {
            continue;
        }
        if let Some((dom, br)) = certify(coeffs, &dcoeffs, r) {
            if owned.iter().all(|(d, _)| d.intersect(&dom).is_none())
                && br.intersect(&search).is_some()
            {
                owned.push((dom, br));
            }
        }
    }
    owned.sort_by(|x, y| x.0.lo().total_cmp(&y.0.lo()));

    let mut gaps = Vec::new();
    let mut cursor = search.lo();
    for (dom, _) in &owned {
        if dom.lo() > cursor {
            gaps.push(Interval::raw(cursor, dom.lo().min(search.hi())));
        }
        cursor = cursor.max(dom.hi());
    }
    if cursor < search.hi() {
        gaps.push(Interval::raw(cursor, search.hi()));
    }
    if search.is_point() && owned.is_empty() {
        gaps.push(search);
    }

    let mut left = budget;
    let mut uncovered: Vec<Interval> = Vec::new();
    for g in gaps {
        exclude(coeffs, &dcoeffs, g, &mut left, &mut uncovered);
    }

    let mut out: Vec<RootEnclosure> = owned
        .iter()
        .map(|(_, br)| RootEnclosure {
            bracket: *br,
            certified: true,
        })
        .collect();
    if uncovered.is_empty() {
        return Ok(out);
    }
    for u in merge(uncovered) {
        out.push(RootEnclosure {
            bracket: u,
            certified: false,
        });
    }
    out.sort_by(|x, y| x.bracket.lo().total_cmp(&y.bracket.lo()));
    Err(RootError::Certification {
        approximations: approx,
        cover: out,
    })
}

pub fn horner(coeffs: &[Interval], x: Interval) -> Interval {
    let mut acc = coeffs[0];
    for &c in &coeffs[1..] {
        acc = acc * x + c;
    }
    acc
}

fn horner_f(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative(coeffs: &[Interval]) -> Vec<Interval> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * ((n - i) as f64))
        .collect()
}

/// Natural Horner form intersected with the mean-value form.
fn eval_box(coeffs: &[Interval], dcoeffs: &[Interval], x: Interval) -> Interval {
    let nat = horner(coeffs, x);
    if dcoeffs.is_empty() || x.is_point() {
        return nat;
    }
    let c = Interval::point(x.mid());
    let mv = horner(coeffs, c) + horner(dcoeffs, x) * (x - c);
    nat.intersect(&mv).unwrap_or(nat)
}

fn certify(coeffs: &[Interval], dcoeffs: &[Interval], r: f64) -> Option<(Interval, Interval)> {
    let scale = r.abs().max(1.0);
    for rel in [9.3e-10, 1e-6, 1e-4, 1e-12] {
        let d = rel * scale;
        let dom = Interval::raw(r - d, r + d);
        if let Some(br) = newton(coeffs, dcoeffs, dom) {
            return Some((dom, br));
        }
    }
    None
}

/// Interval Newton on `dom`; `Some` when the image lands strictly inside,
/// which proves a unique simple root there.
fn newton(coeffs: &[Interval], dcoeffs: &[Interval], dom: Interval) -> Option<Interval> {
    let step = |x: Interval| -> Option<Interval> {
        let c = Interval::point(x.mid());
        let q = horner(coeffs, c).div(horner(dcoeffs, x)).ok()?;
        Some(c - q)
    };
    let n = step(dom)?;
    if !n.interior_of(&dom) {
        return None;
    }
    let mut br = n;
    for _ in 0..8 {
        let Some(next) = step(br).and_then(|m| m.intersect(&br)) else {
            break;
        };
        if next == br {
            break;
        }
        br = next;
    }
    Some(br)
}

fn exclude(
    coeffs: &[Interval],
    dcoeffs: &[Interval],
    gap: Interval,
    left: &mut usize,
    uncovered: &mut Vec<Interval>,
) {
    let mut stack = vec![gap];
    while let Some(x) = stack.pop() {
        if *left == 0 {
            uncovered.push(x);
            continue;
        }
        *left -= 1;
        if !eval_box(coeffs, dcoeffs, x).contains_zero() {
            continue;
        }
        let m = x.mid();
        if m <= x.lo()
            || m >= x.hi()
            || x.width() <= 1e-14 * x.lo().abs().max(x.hi().abs()).max(1.0)
        {
            uncovered.push(x);
            continue;
        }
        let (a, b) = x.bisect();
        stack.push(b);
        stack.push(a);
    }
}

fn merge(mut boxes: Vec<Interval>) -> Vec<Interval> {
    boxes.sort_by(|x, y| x.lo().total_cmp(&y.lo()));
    let mut out: Vec<Interval> = Vec::new();
    for b in boxes {
        match out.last_mut() {
            Some(last) if b.lo() <= last.hi() => *last = last.hull(&b),
            _ => out.push(b),
        }
    }
    out
}

/// Floating approximations of the real roots in `[lo, hi]`, by splitting at
/// the critical points and bracketing sign changes. Near-double roots show up
/// as critical points where the polynomial almost vanishes.
fn approx_real_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let c: Vec<f64> = c.iter().copied().skip_while(|&x| x == 0.0).collect();
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        let r = -c[1] / c[0];
        return if (lo..=hi).contains(&r) {
            vec![r]
        } else {
            Vec::new()
        };
    }
    let d: Vec<f64> = c[..n]
        .iter()
        .enumerate()
        .map(|(i, &x)| x * (n - i) as f64)
        .collect();
    let mut cuts = vec![lo];
    cuts.extend(approx_real_roots(&d, lo, hi));
    cuts.push(hi);
    let mag = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner_f(&c, a), horner_f(&c, b));
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bracket(&c, a, b, fa));
        }
    }
    if horner_f(&c, hi) == 0.0 {
        roots.push(hi);
    }
    for &cp in &cuts[1..cuts.len() - 1] {
        if horner_f(&c, cp).abs() <= 1e-10 * mag && !roots.iter().any(|r| (r - cp).abs() < 1e-9) {
            roots.push(cp);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

fn bracket(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = horner_f(c, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
