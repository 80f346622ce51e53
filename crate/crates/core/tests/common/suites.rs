//! Property suites shared by the module tests and the acceptance run.
//! Each returns the list of violations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use wright_core::bounds::*;
use wright_core::separation::{m_k, theta_n};
use wright_core::Interval;

use super::{breakpoints, d_grid, l_quad, region_pair, A_CRIT};

const PREC: u32 = 256;

fn endpoint(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => rng.gen_range(-1e-300..1e-300),
        2 => rng.gen_range(-3i32..=3) as f64 / 4.0,
        _ => {
            let x: f64 = rng.gen_range(1.0..2.0) * 2f64.powi(rng.gen_range(-40..40));
            if rng.gen() {
                x
            } else {
                -x
            }
        }
    }
}

fn sample(rng: &mut impl Rng) -> (Interval, f64) {
    let (a, b) = (endpoint(rng), endpoint(rng));
    if rng.gen_bool(0.4) {
        return (Interval::point(a), a);
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let t: f64 = rng.gen();
    let x = (lo + t * (hi - lo)).clamp(lo, hi);
    (Interval::new(lo, hi).unwrap(), x)
}

/// Every kernel operation on random intervals against a 256-bit oracle at a
/// random point inside. Returns `(samples in domain, violations)`.
pub fn containment(n: usize, seed: u64) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut checked = 0;
    for i in 0..n {
        let (x, xv) = sample(&mut rng);
        let (y, yv) = sample(&mut rng);
        let (fx, fy) = (Float::with_val(PREC, xv), Float::with_val(PREC, yv));
        let (got, want) = match i % 8 {
            0 => (Ok(x + y), Float::with_val(PREC, &fx + &fy)),
            1 => (Ok(x - y), Float::with_val(PREC, &fx - &fy)),
            2 => (Ok(x * y), Float::with_val(PREC, &fx * &fy)),
            3 => (x.div(y), Float::with_val(PREC, &fx / &fy)),
            4 => (x.abs().sqrt(), Float::with_val(PREC, xv.abs()).sqrt()),
            5 => (x.abs().ln(), Float::with_val(PREC, xv.abs()).ln()),
            6 => (Ok(x.atan()), fx.clone().atan()),
            _ => (Ok(x.sqr()), Float::with_val(PREC, fx.square_ref())),
        };
        let Ok(got) = got else { continue };
        if !want.is_finite() {
            continue;
        }
        checked += 1;
        if !(want >= got.lo() && want <= got.hi()) {
            bad.push(format!(
                "op {} x={x} y={y} at ({xv:e}, {yv:e}): {got} misses {want}",
                i % 8
            ));
        }
    }
    (checked, bad)
}

fn at(a: Interval, big_m: f64, m: f64) -> BoundParams {
    BoundParams::points(a, big_m, m).unwrap()
}

/// Random pairs with `beta_+ < 0`.
pub fn l_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let m = rng.gen_range(-0.6..-0.005);
        let big_m = rng.gen_range(0.005..2.0);
        if breakpoints(big_m, m, A_CRIT).1 < -1e-9 {
            out.push((big_m, m));
        }
    }
    out
}

/// Random pairs with `beta_+ < 0 < beta_-` inside `-m <= M <= A(m)`.
pub fn region_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (big_m, m) = region_pair(&mut rng, -0.25, -0.0093, A_CRIT);
        let (_, bp, bm, _) = breakpoints(big_m, m, A_CRIT);
        if bp < -1e-9 && bm > 1e-9 {
            out.push((big_m, m));
        }
    }
    out
}

/// Closed-form `L` against Gauss-Legendre quadrature.
pub fn l_quadrature(n: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for (big_m, m) in l_pairs(1, n) {
        let l = l_value(&at(a_critical(), big_m, m)).unwrap();
        let q = l_quad(big_m, m, A_CRIT);
        let tol = l.width() + 1e-12;
        if !(q >= l.lo() - tol && q <= l.hi() + tol) {
            bad.push(format!("L({big_m}, {m}) = {l}, quadrature {q:e}"));
        }
    }
    bad
}

/// Maximum of the `D` integrand on a grid of `points` against the
/// certified enclosure. The grid misses the peak by O(h^2), hence the slack.
pub fn d_grid_inside(pairs: usize, points: usize) -> Vec<String> {
    let cfg = DConfig::default();
    let mut bad = Vec::new();
    for (big_m, m) in region_pairs(3, pairs) {
        let p = at(a_critical(), big_m, m);
        let (dl, du) = (
            d_enclosure(&p, Mode::Lower, &cfg).unwrap(),
            d_enclosure(&p, Mode::Upper, &cfg).unwrap(),
        );
        let g = d_grid(big_m, m, A_CRIT, points);
        let slack = 1e-9 * g.abs();
        if !(dl <= du && dl <= g + slack && g <= du + slack) {
            bad.push(format!(
                "D({big_m}, {m}): grid {g:e} outside [{dl:e}, {du:e}]"
            ));
        }
    }
    bad
}

/// The six monotonicity laws on random grids.
pub fn monotonicity() -> (usize, Vec<String>) {
    let a = a_critical();
    let cfg = DConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut n = 0;

    // L decreasing in M.
    for _ in 0..50 {
        let m = rng.gen_range(-0.5..-0.01);
        let grid: Vec<f64> = (1..=40)
            .map(|i| i as f64 * 0.05)
            .filter(|&bm| breakpoints(bm, m, A_CRIT).1 < -1e-9)
            .collect();
        let vals: Vec<Interval> = grid
            .iter()
            .map(|&bm| l_value(&at(a, bm, m)).unwrap())
            .collect();
        for (v, g) in vals.windows(2).zip(grid.windows(2)) {
            n += 1;
            if !(v[0].lo() > v[1].hi()) {
                bad.push(format!("L not decreasing in M at m = {m}, M = {g:?}"));
            }
        }
    }

    // L larger for the milder slope.
    for (big_m, m) in l_pairs(5, 200) {
        let Ok(p) = BoundParams::points(a_three_halves(), big_m, m) else {
            continue;
        };
        let Ok(mild) = l_value(&p) else { continue };
        let crit = l_value(&at(a, big_m, m)).unwrap();
        n += 1;
        if !(mild.lo() > crit.hi()) {
            bad.push(format!("L at ({big_m}, {m}): {mild} vs {crit}"));
        }
    }

    // Sigma increasing in M and decreasing in m.
    let sig = |bm: f64, m: f64, mode| sigma_enclosure(&at(a, bm, m), mode, &cfg).ok();
    for _ in 0..40 {
        let m = rng.gen_range(-0.2..-0.02);
        let top = super::big_a(m, A_CRIT);
        let grid: Vec<f64> = (0..8).map(|i| -m + (top + m) * i as f64 / 7.0).collect();
        for w in grid.windows(2) {
            if let (Some(hi), Some(lo)) = (sig(w[0], m, Mode::Upper), sig(w[1], m, Mode::Lower)) {
                n += 1;
                if !(hi < lo) {
                    bad.push(format!("Sigma not increasing in M at m = {m}: {w:?}"));
                }
            }
        }
        if let (Some(hi), Some(lo)) = (sig(-m, m + 0.005, Mode::Upper), sig(-m, m, Mode::Lower)) {
            n += 1;
            if !(hi < lo) {
                bad.push(format!("Sigma not decreasing in m at M = {}, m = {m}", -m));
            }
        }
    }

    // m_k nondecreasing in k, theta_n nonincreasing in n.
    for _ in 0..30 {
        let big_m = rng.gen_range(0.0094..0.377);
        let ms: Vec<f64> = (0..=6).map(|k| m_k(big_m, k, a).unwrap().0).collect();
        n += 1;
        if !(ms.windows(2).all(|w| w[0] <= w[1]) && ms[5] > ms[0]) {
            bad.push(format!("m_k({big_m}) not monotone: {ms:?}"));
        }
        let m = rng.gen_range(-0.25..-0.0093);
        let th: Vec<f64> = (0..=6).map(|k| theta_n(m, k, a, &cfg).unwrap().0).collect();
        n += 1;
        if !(th.windows(2).all(|w| w[0] >= w[1]) && th[6] < th[0]) {
            bad.push(format!("theta_n({m}) not monotone: {th:?}"));
        }
    }
    (n, bad)
}
