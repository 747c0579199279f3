use std::path::{Path, PathBuf};

use ansl::analysis::{NegativeControl, SuiteLevel};
use ansl::degenerate::{DegenerateMesh, DegenerateProblem};
use ansl::io::ChartFile;
use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Chart given inline or as a path relative to the config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChartRef {
    Path(PathBuf),
    Inline(ChartFile),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub boundary_k: Option<f64>,
    pub k_t_lower: Option<f64>,
    pub total_curvature: Option<f64>,
    /// Cap on the auxiliary Gauss residual during integration.
    pub gauss_cap: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormFormat {
    #[default]
    Binary,
    Csv,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub chart: Option<ChartRef>,
    /// `(n_s, steps)` pairs, strictly increasing.
    #[serde(default)]
    pub resolutions: Vec<SuiteLevel>,
    pub jet_order: Option<usize>,
    pub t0: Option<f64>,
    pub t_end: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub plots: bool,
    #[serde(default)]
    pub form_format: FormFormat,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub control: Option<NegativeControl>,
    pub problem: Option<DegenerateProblem>,
    #[serde(default)]
    pub meshes: Vec<DegenerateMesh>,
    pub min_order: Option<f64>,
    /// Output directories of earlier runs, for `report`.
    #[serde(default)]
    pub runs: Vec<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("config {} does not parse", path.display()))?;
        ensure!(
            cfg.schema == SCHEMA_VERSION,
            "config schema {} is not supported (expected {SCHEMA_VERSION})",
            cfg.schema
        );
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.check_increasing()?;
        Ok(cfg)
    }

    fn check_increasing(&self) -> Result<()> {
        for w in self.resolutions.windows(2) {
            if !(w[1].n_s >= w[0].n_s && w[1].steps > w[0].steps) {
                bail!(
                    "resolutions must be strictly increasing: ({}, {}) follows ({}, {})",
                    w[1].n_s,
                    w[1].steps,
                    w[0].n_s,
                    w[0].steps
                );
            }
        }
        for w in self.meshes.windows(2) {
            if !(w[1].n_s >= w[0].n_s && w[1].n_tau > w[0].n_tau) {
                bail!("meshes must be strictly increasing in n_tau and non-decreasing in n_s");
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn require_resolutions(&self, min: usize) -> Result<&[SuiteLevel]> {
        ensure!(
            self.resolutions.len() >= min,
            "this command needs at least {min} entries in `resolutions` ({} given)",
            self.resolutions.len()
        );
        Ok(&self.resolutions)
    }
}
