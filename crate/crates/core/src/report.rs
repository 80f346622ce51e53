//! Run manifests: a JSON tree holding the configuration snapshot, verdicts
//! and separation reports of one invocation.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::separation::{
    emit_curves, run_separation, Curve, CurveParams, CurveRow, SeparationConfig, SeparationReport,
};
use crate::verifiers::{verify, LemmaId, LemmaVerdict, VerifyConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub endpoint_precision: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            endpoint_precision: "binary64".to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Snapshot {
    Verify {
        lemmas: Vec<LemmaId>,
        config: VerifyConfig,
    },
    Separate {
        config: SeparationConfig,
    },
    Curves {
        which: Curve,
        grid: Vec<f64>,
        params: CurveParams,
        path: Option<String>,
    },
}

impl Snapshot {
    pub fn command(&self) -> &'static str {
        match self {
            Snapshot::Verify { .. } => "verify",
            Snapshot::Separate { .. } => "separate",
            Snapshot::Curves { .. } => "curves",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Snapshot,
    pub verdicts: Vec<LemmaVerdict>,
    pub reports: Vec<SeparationReport>,
    /// Number of curve rows written, and how many carried an error.
    pub curve_rows: Option<(usize, usize)>,
    pub environment: Environment,
}

impl RunManifest {
    /// True when every verdict holds and every separation run succeeded.
    pub fn all_certified(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds) && self.reports.iter().all(|r| r.separated)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_certified() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json() + "\n")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Executes a snapshot. Curve rows are returned for the caller to write.
pub fn execute(snap: &Snapshot) -> Result<(RunManifest, Vec<CurveRow>), RunError> {
    let mut verdicts = Vec::new();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    match snap {
        Snapshot::Verify { lemmas, config } => {
            use rayon::prelude::*;
            verdicts = lemmas.par_iter().map(|id| verify(*id, config)).collect();
        }
        Snapshot::Separate { config } => {
            reports.push(run_separation(config).map_err(|e| RunError::Config(e.to_string()))?);
        }
        Snapshot::Curves {
            which,
            grid,
            params,
            ..
        } => {
            rows = emit_curves(grid, *which, params);
        }
    }
    let curve_rows = matches!(snap, Snapshot::Curves { .. }).then(|| {
        (
            rows.len(),
            rows.iter().filter(|r| r.error.is_some()).count(),
        )
    });
    let manifest = RunManifest {
        command: snap.command().to_string(),
        config: snap.clone(),
        verdicts,
        reports,
        curve_rows,
        environment: Environment::current(),
    };
    Ok((manifest, rows))
}

/// Differences between two runs that should be identical, ignoring
/// timings and timestamps.
pub fn replay_differences(old: &RunManifest, new: &RunManifest) -> Vec<String> {
    let mut out = Vec::new();
    if old.verdicts.len() != new.verdicts.len() {
        out.push(format!(
            "{} verdicts before, {} now",
            old.verdicts.len(),
            new.verdicts.len()
        ));
    }
    for (a, b) in old.verdicts.iter().zip(&new.verdicts) {
        let same = serde_json::to_value(&a.evidence).ok() == serde_json::to_value(&b.evidence).ok();
        if a.lemma_id != b.lemma_id || a.holds != b.holds || !same {
            out.push(format!("verdict {} differs", a.lemma_id));
        }
    }
    if old.reports.len() != new.reports.len() {
        out.push(format!(
            "{} reports before, {} now",
            old.reports.len(),
            new.reports.len()
        ));
    }
    for (a, b) in old.reports.iter().zip(&new.reports) {
        if a.separated != b.separated
            || a.iterations != b.iterations
            || a.final_big_m != b.final_big_m
        {
            out.push(format!(
                "separation changed: {} -> {} iterations",
                a.iterations, b.iterations
            ));
        }
    }
    if old.curve_rows != new.curve_rows {
        out.push("curve row counts differ".into());
    }
    out
}
