//! Declarative jobs: a construction plus scan, truncation and tolerance
//! settings, the compiled-in presets, and the find-ss / verify suites.

mod presets;
mod suite;

pub use presets::{preset, PRESET_NAMES};
pub use suite::{find_ss, scan, verify, Built, SsMatch, SsReport, VerifyOutcome, MAX_FLOOR_FRACTION};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{ConstructError, Construction};
use crate::numerics::RealGrid;
use crate::scatter::{ScanRange, ScatterError, DEFAULT_SCAN_POINTS};
use crate::verify::VerifyError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum JobError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Scatter(#[from] ScatterError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl JobError {
    pub fn name(&self) -> &'static str {
        match self {
            JobError::Config(_) => "Config",
            JobError::Construct(e) => e.name(),
            JobError::Scatter(e) => e.name(),
            JobError::Verify(e) => e.name(),
        }
    }

    /// Process exit code: 2 config, 3 construction, 4 scattering/truncation.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Config(_) => 2,
            JobError::Construct(_) => 3,
            JobError::Scatter(_) => 4,
            JobError::Verify(VerifyError::Construct(_)) => 3,
            JobError::Verify(VerifyError::Precondition(_)) => 2,
            JobError::Verify(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, JobError>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub k_min: f64,
    pub k_max: f64,
    #[serde(default = "default_scan_points")]
    pub n: usize,
}

fn default_scan_points() -> usize {
    DEFAULT_SCAN_POINTS
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { k_min: -4.0, k_max: 4.0, n: DEFAULT_SCAN_POINTS }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    /// Half-width of the window; defaults by decay class.
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
}

/// Sampling grid for exported potentials and residual checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { x_min: -10.0, x_max: 10.0, n: 2001 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Potential,
    Bases,
    Spectrum,
    Svg,
    Report,
}

/// Tolerances used by the suites. Config maps may override any of them by
/// field name.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub ss_location: f64,
    pub ss_residual: f64,
    pub cross_base: f64,
    pub ss_solution: f64,
    pub ss_solution_fd: f64,
    pub asymptote: f64,
    pub pt_symmetry: f64,
    pub determinant: f64,
    pub m11_m22: f64,
    pub pseudo_hermitian: f64,
    pub fd_oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ss_location: 1e-3,
            ss_residual: 1e-4,
            cross_base: 1e-7,
            ss_solution: 1e-8,
            ss_solution_fd: 1e-5,
            asymptote: 1e-6,
            pt_symmetry: 1e-10,
            determinant: 1e-6,
            m11_m22: 1e-5,
            pseudo_hermitian: 1e-4,
            fd_oracle: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn from_map(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Tolerances::default();
        for (key, &v) in map {
            if !(v > 0.0 && v.is_finite()) {
                return Err(JobError::Config(format!("tolerance {key} must be positive, got {v}")));
            }
            let slot = match key.as_str() {
                "ss_location" => &mut t.ss_location,
                "ss_residual" => &mut t.ss_residual,
                "cross_base" => &mut t.cross_base,
                "ss_solution" => &mut t.ss_solution,
                "ss_solution_fd" => &mut t.ss_solution_fd,
                "asymptote" => &mut t.asymptote,
                "pt_symmetry" => &mut t.pt_symmetry,
                "determinant" => &mut t.determinant,
                "m11_m22" => &mut t.m11_m22,
                "pseudo_hermitian" => &mut t.pseudo_hermitian,
                "fd_oracle" => &mut t.fd_oracle,
                other => return Err(JobError::Config(format!("unknown tolerance {other:?}"))),
            };
            *slot = v;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub construction: Construction,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub outputs: Vec<Output>,
    /// SS acceptance threshold on `|m22|`; defaults to a fraction of the
    /// median over the scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Whether `U(x) = U*(-x)` is expected; otherwise the PT residual is
    /// reported as informational only.
    #[serde(default)]
    pub pt_symmetric: bool,
}

impl JobConfig {
    pub fn new(construction: Construction) -> Self {
        JobConfig {
            name: None,
            construction,
            scan: ScanConfig::default(),
            truncation: TruncationConfig::default(),
            grid: GridConfig::default(),
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
            threshold: None,
            pt_symmetric: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| JobError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        Tolerances::from_map(&self.tolerances)
    }

    pub fn scan_range(&self) -> ScanRange {
        ScanRange::new(self.scan.k_min, self.scan.k_max, self.scan.n)
    }

    pub fn grid(&self) -> Result<RealGrid> {
        RealGrid::new(self.grid.x_min, self.grid.x_max, self.grid.n).map_err(|e| JobError::Config(e.to_string()))
    }

    /// All checks that need no numerics; failures map to exit code 2.
    pub fn validate(&self) -> Result<()> {
        self.construction.validate().map_err(|e| JobError::Config(format!("{}: {e}", e.name())))?;
        let s = &self.scan;
        if !(s.k_min < s.k_max && s.k_min.is_finite() && s.k_max.is_finite()) || s.n < 2 {
            return Err(JobError::Config(format!("invalid scan [{}, {}] n={}", s.k_min, s.k_max, s.n)));
        }
        if let Some(l) = self.truncation.l {
            if !(l > 0.0 && l.is_finite()) {
                return Err(JobError::Config(format!("L must be positive, got {l}")));
            }
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0 && t.is_finite()) {
                return Err(JobError::Config(format!("threshold must be positive, got {t}")));
            }
        }
        self.grid()?;
        self.tolerances()?;
        Ok(())
    }
}
