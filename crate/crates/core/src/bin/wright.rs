use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wright_core::bounds::{a_critical, DConfig};
use wright_core::report::{execute, replay_differences, RunManifest, Snapshot};
use wright_core::separation::{
    write_csv, Curve, CurveParams, SeparationConfig, DEFAULT_MAX_ITERATIONS,
};
use wright_core::verifiers::{LemmaId, VerifyConfig};
use wright_core::Interval;

#[derive(Parser)]
#[command(
    name = "wright",
    version,
    about = "Validated numerics for Wright-type delay equations"
)]
struct Cli {
    /// Directory for manifests and curve files.
    #[arg(long, global = true, env = "WRIGHT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Step budget for billiard runs and staircase iterations.
    #[arg(long, global = true, env = "WRIGHT_MAX_STEPS")]
    max_steps: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run lemma verifiers: 2.15a 2.15b 2.15c 2.15d 4.8 4.18 remark-2.18 appendix-1 or all.
    Verify {
        #[arg(value_parser = parse_selector)]
        selector: Selector,
        #[command(flatten)]
        common: Common,
    },
    /// Run the staircase separation on [to, from].
    Separate {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        chunks: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sample a curve (lhat_lower, A, theta_n, m_k) on a uniform grid.
    Curves {
        #[arg(value_parser = parse_curve)]
        which: Curve,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        a: Option<Interval>,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the configuration stored in a manifest and compare.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Slope f'(0), as a fraction `p/q` or a decimal.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
    a: Option<Interval>,
    /// Manifest path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct Selector(Vec<LemmaId>);

fn parse_selector(s: &str) -> Result<Selector, String> {
    if s == "all" {
        return Ok(Selector(LemmaId::ALL.to_vec()));
    }
    s.parse::<LemmaId>().map(|id| Selector(vec![id]))
}

fn parse_curve(s: &str) -> Result<Curve, String> {
    s.parse()
}

fn parse_slope(s: &str) -> Result<Interval, String> {
    let a = if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|e| format!("{e}"))?;
        let q: i64 = q.trim().parse().map_err(|e| format!("{e}"))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        Interval::ratio(p, q)
    } else {
        Interval::from_decimal(s).map_err(|e| e.to_string())?
    };
    if !(a.lo() > -2.0 && a.hi() < 0.0) {
        return Err(format!("slope {s} must lie in (-2, 0)"));
    }
    Ok(a)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let out_dir = cli.out_dir.clone();
    let (snap, out, csv) = match cli.cmd {
        Cmd::Verify { selector, common } => {
            let mut config = VerifyConfig {
                a: common.a.unwrap_or_else(a_critical),
                ..Default::default()
            };
            if let Some(s) = cli.max_steps {
                config.max_steps = s;
            }
            (
                Snapshot::Verify {
                    lemmas: selector.0,
                    config,
                },
                common.out,
                None,
            )
        }
        Cmd::Separate {
            from,
            to,
            k,
            n,
            chunks,
            common,
        } => {
            let config = SeparationConfig {
                m_start: from,
                m_stop: to,
                k,
                n,
                max_iterations: cli.max_steps.unwrap_or(DEFAULT_MAX_ITERATIONS),
                parallel_chunks: chunks,
                a: common.a.unwrap_or_else(a_critical),
                d: DConfig::default(),
            };
            if let Err(e) = config.validate() {
                return usage(&e.to_string());
            }
            (Snapshot::Separate { config }, common.out, None)
        }
        Cmd::Curves {
            which,
            from,
            to,
            points,
            k,
            n,
            a,
            out,
        } => {
            if !(from.is_finite() && to.is_finite()) {
                return usage("grid ends must be finite");
            }
            let grid: Vec<f64> = match points {
                0 => vec![],
                1 => vec![from],
                p => (0..p)
                    .map(|i| from + (to - from) * i as f64 / (p - 1) as f64)
                    .collect(),
            };
            let params = CurveParams {
                a: a.unwrap_or_else(a_critical),
                k,
                n,
                d: DConfig::default(),
            };
            let csv =
                out.unwrap_or_else(|| out_dir.join(format!("curve-{}.csv", curve_name(which))));
            let path = Some(csv.display().to_string());
            (
                Snapshot::Curves {
                    which,
                    grid,
                    params,
                    path,
                },
                None,
                Some(csv),
            )
        }
        Cmd::Replay { manifest, out } => return replay(&manifest, out, &out_dir),
    };
    let out = out.unwrap_or_else(|| out_dir.join(format!("manifest-{}.json", snap.command())));
    run(&snap, &out, csv.as_deref())
}

fn curve_name(c: Curve) -> &'static str {
    match c {
        Curve::LhatLower => "lhat_lower",
        Curve::A => "A",
        Curve::ThetaN => "theta_n",
        Curve::Mk => "m_k",
    }
}

fn run(snap: &Snapshot, out: &std::path::Path, csv: Option<&std::path::Path>) -> ExitCode {
    let (manifest, rows) = match execute(snap) {
        Ok(x) => x,
        Err(e) => return usage(&e.to_string()),
    };
    if let Some(path) = csv {
        let written =
            std::fs::File::create(path).and_then(|f| write_csv(&rows, std::io::BufWriter::new(f)));
        if let Err(e) = written {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if let Err(e) = manifest.write(out) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return ExitCode::from(1);
    }
    summarize(&manifest);
    println!("manifest: {}", out.display());
    ExitCode::from(manifest.exit_code() as u8)
}

fn summarize(m: &RunManifest) {
    for v in &m.verdicts {
        let steps: Vec<String> = v
            .evidence
            .billiards
            .iter()
            .map(|b| b.outcome.steps.to_string())
            .collect();
        let j0 = if steps.is_empty() {
            String::new()
        } else {
            format!(" J0 = {}", steps.join(", "))
        };
        println!(
            "{:<12} {}{}  ({:.1} ms)",
            v.lemma_id,
            if v.holds { "holds" } else { "FAILED" },
            j0,
            v.runtime_ms
        );
    }
    for r in &m.reports {
        println!(
            "separate [{:.16e}, {:.16e}]: {} after {} iterations, final M = {:.16e}, m = {:.16e} ({:.1} s)",
            r.config.m_stop,
            r.config.m_start,
            if r.separated { "separated" } else { "NOT separated" },
            r.iterations,
            r.final_big_m,
            r.final_m,
            r.elapsed_ms / 1e3
        );
    }
    if let Some((n, bad)) = m.curve_rows {
        println!("{n} curve rows, {bad} with errors");
    }
}

fn replay(path: &std::path::Path, out: Option<PathBuf>, out_dir: &std::path::Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(&format!("cannot read {}: {e}", path.display())),
    };
    let old = match RunManifest::from_json(&text) {
        Ok(m) => m,
        Err(e) => return usage(&format!("not a manifest: {e}")),
    };
    let (new, _) = match execute(&old.config) {
        Ok(x) => x,
        Err(e) => return usage(&e.to_string()),
    };
    let out = out.unwrap_or_else(|| out_dir.join(format!("manifest-{}-replay.json", new.command)));
    if let Err(e) = new.write(&out) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return ExitCode::from(1);
    }
    summarize(&new);
    let diffs = replay_differences(&old, &new);
    for d in &diffs {
        println!("differs: {d}");
    }
    if diffs.is_empty() {
        println!("replay identical");
        ExitCode::from(new.exit_code() as u8)
    } else {
        ExitCode::from(1)
    }
}
