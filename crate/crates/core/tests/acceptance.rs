//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output. Exits non-zero when a
//! rigorous part fails; published counts or bounds that cannot be met are
//! reported as FAIL with the reason and do not abort the run.

mod common;

use std::time::Instant;

use num_rational::Rational64;
use wright_core::bounds::*;
use wright_core::roots::verified_real_roots;
use wright_core::separation::{m_k, run_separation, SeparationConfig, M_EXIT};
use wright_core::verifiers::*;
use wright_core::Interval;

#[derive(Default)]
struct Tally {
    hard_failures: Vec<String>,
    reported_failures: Vec<String>,
}

impl Tally {
    /// PASS needs both flags. A false `rigorous` also aborts the run.
    fn line(&mut self, id: u32, published: bool, rigorous: bool, what: &str, detail: String) {
        let ok = published && rigorous;
        println!(
            "criterion {id}: {} {what}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        let msg = format!("criterion {id}: {what}");
        if !rigorous {
            self.hard_failures.push(msg);
        } else if !ok {
            self.reported_failures.push(msg);
        }
    }
}

fn in_band(x: usize, reference: f64) -> bool {
    (x as f64) >= reference / 2.0 && (x as f64) <= 3.0 * reference
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed().as_secs_f64())
}

fn steps(v: &LemmaVerdict) -> Vec<usize> {
    v.evidence
        .billiards
        .iter()
        .map(|b| b.outcome.steps)
        .collect()
}

/// The decimal interval spanned by a truncated published value.
fn truncated(digits: &str) -> (f64, f64) {
    let v: f64 = digits.parse().unwrap();
    let places = digits.split('.').nth(1).map_or(0, |f| f.len()) as i32;
    let ulp = 10f64.powi(-places);
    if v < 0.0 {
        (v - ulp, v)
    } else {
        (v, v + ulp)
    }
}

fn c1(t: &mut Tally) {
    let p = BoundParams::points(a_critical(), 0.0094, -0.009).unwrap();
    let l = l_value(&p).unwrap();
    let best = (0..20)
        .map(|_| timed(|| l_value(&p)).1)
        .fold(f64::INFINITY, f64::min);
    let (lo, hi) = truncated("-0.0092701897");
    let ok = l.lo() >= lo && l.hi() <= hi && l.width() < 1e-9 && best < 1e-3;
    t.line(
        1,
        true,
        ok,
        "L(0.0094, -0.009)",
        format!(
            "{l}, width {:.1e}, digits -0.0092701897 agree, {:.1} us",
            l.width(),
            best * 1e6
        ),
    );
}

fn c2(t: &mut Tally) {
    let a = a_critical();
    let lim = l_at_infinity(a).unwrap();
    let closed = a + Interval::ratio(61, 24).ln().unwrap();
    let far = l_value(&BoundParams::points(a, 1e9, -0.2).unwrap()).unwrap();
    let (lo, hi) = truncated("-0.6088");
    let ok = lim.lo() >= lo
        && lim.hi() <= hi
        && lim.width() < 1e-12
        && lim.intersect(&closed).is_some()
        && (far.mid() - lim.mid()).abs() < 1e-6;
    t.line(
        2,
        true,
        ok,
        "L(inf, m) = -37/24 + ln(61/24)",
        format!(
            "{lim}, width {:.1e}, L(1e9, -0.2) = {:.9}",
            lim.width(),
            far.mid()
        ),
    );
}

fn c3(t: &mut Tally) {
    let cfg = VerifyConfig::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for (id, reference) in [
        (LemmaId::L2_15a, 99.0),
        (LemmaId::L2_15c, 67.0),
        (LemmaId::L2_15d, 38.0),
    ] {
        let (v, secs) = timed(|| verify(id, &cfg));
        let j0 = steps(&v)[0];
        ok &= v.holds && in_band(j0, reference) && secs < 5.0;
        parts.push(format!("{id} J0 = {j0} (reference {reference}) {secs:.3} s"));
    }
    t.line(3, true, ok, "billiards 2.15(a,c,d)", parts.join(", "));
}

fn c4(t: &mut Tally) {
    let (v, secs) = timed(|| verify(LemmaId::L2_15b, &VerifyConfig::default()));
    let g = v.evidence.grid.as_ref().unwrap();
    let ok = v.holds && g.sup_upper < 0.91 && secs < 600.0;
    t.line(
        4,
        true,
        ok,
        "sup dL/dm < 0.91",
        format!(
            "sup {:.6} (m <= -0.13 part {:.6}), inf {:.3e}, {} boxes, {} bisections, {secs:.0} s",
            g.sup_upper, g.sup_upper_reference_part, g.inf_lower, g.boxes, g.bisections
        ),
    );
}

fn c5(t: &mut Tally) {
    let cfg = VerifyConfig::default();
    let v48 = verify(LemmaId::L4_8, &cfg);
    let v418 = verify(LemmaId::L4_18, &cfg);
    let (j48, j418) = (steps(&v48), steps(&v418));
    let p = BoundParams::points(a_critical(), 0.27, -0.2343).unwrap();
    let d = DConfig::default();
    let (s_lo, s_hi) = (
        sigma_enclosure(&p, Mode::Lower, &d).unwrap(),
        sigma_enclosure(&p, Mode::Upper, &d).unwrap(),
    );
    let rigorous = v48.holds && v418.holds && s_lo > 0.27 && s_lo >= 0.29 && s_hi <= 0.31;
    let bands = in_band(j48[0], 64.0) && in_band(j48[1], 13.0) && in_band(j418[0], 97.0);
    t.line(
        5,
        bands,
        rigorous,
        "4.8 / 4.18 separations, J0 bands around 64, 13, 97, Sigma(0.27, -0.2343)",
        format!(
            "separated {} / {}, Sigma in [{s_lo:.13}, {s_hi:.13}]; J0 = {}, {}, {}: the 4.8 counts sit below \
             their bands because the certified lower bound of D is tight (~1e-13), so steps are long, and a \
             float oracle with the exact D gives the same counts",
            v48.holds, v418.holds, j48[0], j48[1], j418[0]
        ),
    );
}

fn c6(t: &mut Tally) {
    let a = a_critical();
    let (near, s1) = timed(|| m_k(0.009401, 5, a).unwrap().0);
    let (far, s2) = timed(|| m_k(0.27, 5, a).unwrap().0);
    t.line(
        6,
        far > -0.19,
        near > M_EXIT && far > -0.2 && s1 < 1.0 && s2 < 1.0,
        "m_5(0.009401) > -0.0093, m_5(0.27) > -0.19",
        format!(
            "m_5(0.009401) = {near:.10} ({:.2} ms), m_5(0.27) = {far:.10} ({:.2} ms); the recursion at 0.27 \
             converges to -0.1994702 (independent 30-digit quadrature agrees), so -0.19 cannot be certified \
             and m_5(0.27) > -0.2 is the bound that holds",
            s1 * 1e3,
            s2 * 1e3
        ),
    );
}

fn c7(t: &mut Tally) {
    let table = [
        (0.377, 0.1005, 63.0),
        (0.1005, 0.05004, 209.0),
        (0.05004, 0.04001, 166.0),
        (0.04001, 0.03001, 381.0),
        (0.03001, 0.020002, 1274.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (from, to, reference) in table {
        let r = run_separation(&SeparationConfig::range(from, to)).unwrap();
        ok &= r.separated && in_band(r.iterations, reference);
        parts.push(format!("[{to}, {from}] {} (reference {reference})", r.iterations));
    }
    let (r, secs) = timed(|| run_separation(&SeparationConfig::default()).unwrap());
    ok &= r.separated
        && r.final_m > M_EXIT
        && (12_000..=73_000).contains(&r.iterations)
        && secs < 4.0 * 3600.0;
    parts.push(format!(
        "full [0.00940007, 0.377] separated {}, {} iterations (reference 24336), final m = {:.10}, {secs:.1} s",
        r.separated, r.iterations, r.final_m
    ));
    t.line(7, true, ok, "staircase runs", parts.join("; "));
}

fn c8(t: &mut Tally) {
    let crit = Rational64::new(-37, 24);
    let residual = appendix1_residual(crit);
    let g_mu = appendix1_g_mu(crit);
    let cubic = [24.0, 25.0, 0.0, -1.0];
    let roots = verified_real_roots(&cubic, Interval::new(-1.5, 1.0).unwrap()).unwrap();
    let s97 = 97f64.sqrt();
    let expect = [-1.0, (-1.0 - s97) / 48.0, (-1.0 + s97) / 48.0];
    let matched = roots.len() == 3
        && expect.iter().all(|e| {
            roots.iter().any(|r| {
                r.certified && (r.bracket.mid() - e).abs() < 1e-12 && r.bracket.width() < 1e-12
            })
        });
    let near = verified_real_roots(&cubic, Interval::new(-1.1, -0.9).unwrap()).unwrap();
    let unique = near.len() == 1 && near[0].certified && near[0].bracket.contains(-1.0);
    let v = verify(LemmaId::Appendix1, &VerifyConfig::default());
    let ok = residual == Rational64::from_integer(0)
        && g_mu == Rational64::new(11, 12)
        && matched
        && unique
        && v.holds;
    let brackets: Vec<String> = roots.iter().map(|r| r.bracket.to_string()).collect();
    t.line(
        8,
        true,
        ok,
        "exact identities and cubic roots",
        format!(
            "R(-37/24) = {residual}, dG/dmu = {g_mu}, roots {}",
            brackets.join(" ")
        ),
    );
}

fn c9(t: &mut Tally) {
    use common::suites;
    let (checked, containment) = suites::containment(1_000_000, 0x5eed);
    let quad = suites::l_quadrature(200);
    let grid = suites::d_grid_inside(100, 100_000);
    let (n, mono) = suites::monotonicity();
    let ok = containment.is_empty() && quad.is_empty() && grid.is_empty() && mono.is_empty();
    t.line(
        9,
        true,
        ok,
        "property suites",
        format!(
            "containment {} violations in {checked} samples; L quadrature {} in 200 pairs; D grid {} in 100 \
             pairs x 1e5 points; monotonicity {} in {n} comparisons",
            containment.len(),
            quad.len(),
            grid.len(),
            mono.len()
        ),
    );
}

fn main() {
    let mut t = Tally::default();
    c1(&mut t);
    c2(&mut t);
    c3(&mut t);
    c4(&mut t);
    c5(&mut t);
    c6(&mut t);
    c7(&mut t);
    c8(&mut t);
    c9(&mut t);
    for f in &t.reported_failures {
        println!("known failure (documented): {f}");
    }
    if !t.hard_failures.is_empty() {
        for f in &t.hard_failures {
            println!("failed: {f}");
        }
        std::process::exit(1);
    }
}
