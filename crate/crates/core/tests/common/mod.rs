//! Plain floating-point reference implementations used as test oracles.
//! Written from the integral definitions, independent of the crate code.
#![allow(dead_code)]

use rand::Rng;

pub mod suites;

pub const A_CRIT: f64 = -37.0 / 24.0;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Integral over [lo, hi], split at `cuts` (smooth between them), each
/// piece further split in `sub` parts.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, cuts: &[f64], sub: usize) -> f64 {
    let rule = gauss_legendre(20);
    let mut pts: Vec<f64> = vec![lo, hi];
    pts.extend(cuts.iter().copied().filter(|c| *c > lo && *c < hi));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for w in pts.windows(2) {
        let h = (w[1] - w[0]) / sub as f64;
        for j in 0..sub {
            let a = w[0] + j as f64 * h;
            let (c, r) = (a + 0.5 * h, 0.5 * h);
            total += rule.iter().map(|(x, wt)| wt * f(c + r * x)).sum::<f64>() * r;
        }
    }
    total
}

pub fn r(x: f64, a: f64) -> f64 {
    a * x / (1.0 + x)
}

pub fn big_a(m: f64, a: f64) -> f64 {
    a * m / (1.0 + m) - 1.0 + (1.0 + m) * (1.0 + m).ln() / m
}

/// Breakpoints `(alpha_+, beta_+, beta_-, alpha_-)`.
pub fn breakpoints(big_m: f64, m: f64, a: f64) -> (f64, f64, f64, f64) {
    let (rb, rs) = (r(big_m, a), r(m, a));
    let ap = big_m / rb - rb / (2.0 * a * rs);
    let bp = big_m / rb + rb / (2.0 * a * rs);
    let bm = 1.0 / (2.0 * a) + m / rb;
    let am = -1.0 / (2.0 * a) + m / rb;
    (ap, bp, bm, am)
}

/// Combined envelope `z(s)` on the real line.
pub fn zeta(s: f64, big_m: f64, m: f64, a: f64) -> f64 {
    let (ap, bp, bm, am) = breakpoints(big_m, m, a);
    let (rb, rs) = (r(big_m, a), r(m, a));
    if s <= ap {
        big_m
    } else if s <= bp {
        big_m + 0.5 * a * rs * (s - ap).powi(2)
    } else if s <= bm {
        rb * s
    } else if s <= am {
        m + 0.5 * a * rb * (s - am).powi(2)
    } else {
        m
    }
}

/// Upper envelope `z_+(s)`.
pub fn z_plus(s: f64, big_m: f64, m: f64, a: f64) -> f64 {
    let (ap, bp, _, _) = breakpoints(big_m, m, a);
    let rs = r(m, a);
    if s <= ap {
        big_m
    } else if s <= bp {
        big_m + 0.5 * a * rs * (s - ap).powi(2)
    } else {
        r(big_m, a) * s
    }
}

/// `∫_{-1}^0 r(z_+(s)) ds`.
pub fn l_quad(big_m: f64, m: f64, a: f64) -> f64 {
    let (ap, bp, _, _) = breakpoints(big_m, m, a);
    integrate(|s| r(z_plus(s, big_m, m, a), a), -1.0, 0.0, &[ap, bp], 8)
}

/// The integrand of `D` on [0, 1].
pub fn d_integrand(s: f64, big_m: f64, m: f64, a: f64) -> f64 {
    let x = zeta(s - 1.0, big_m, m, a);
    let y = zeta(s, big_m, m, a);
    a * a * x / ((1.0 + y).powi(2) * (1.0 + x))
}

pub fn d_grid(big_m: f64, m: f64, a: f64, n: usize) -> f64 {
    (0..=n)
        .map(|i| d_integrand(i as f64 / n as f64, big_m, m, a))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `∫_{-1}^0 r(z~(s)) ds` with curvature `d`.
pub fn sigma_quad(big_m: f64, m: f64, a: f64, d: f64) -> f64 {
    let _ = big_m;
    let z = d / (a * a);
    let rs = m / (1.0 + m);
    let at = (1.0 + m - 0.5 * rs / z) / a;
    let bt = (1.0 + m + 0.5 * rs / z) / a;
    let zt = |s: f64| {
        if s <= at {
            m
        } else if s <= bt {
            m + 0.5 * d * (s - at).powi(2)
        } else {
            a * rs * s
        }
    };
    integrate(|s| r(zt(s), a), -1.0, 0.0, &[at, bt], 8)
}

/// Random pair with `-m <= M <= A(m)`, `m` in `[lo, hi]`.
pub fn region_pair(rng: &mut impl Rng, lo: f64, hi: f64, a: f64) -> (f64, f64) {
    let m = rng.gen_range(lo..hi);
    let top = big_a(m, a);
    let big_m = rng.gen_range(-m..top);
    (big_m, m)
}
