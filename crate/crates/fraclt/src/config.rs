//! Run configurations: parsing, validation, expansion into concrete jobs.

use std::path::{Path, PathBuf};

use fraclt_core::discretize::{Grid, PotentialKind, PotentialSpec};
use fraclt_core::lieb_thirring::{SpectralParams, Theorem, VerifyOptions};
use fraclt_core::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const CONFIG_VERSION: u32 = 1;
pub const DEFAULT_TAU: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Upper bound on concurrently running jobs.
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Relative tolerance of the quadrature cross-check of each job's integral.
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    pub jobs: Vec<JobConfig>,
}

fn default_workers() -> usize {
    4
}

fn default_quad_tol() -> f64 {
    1e-10
}

/// A single `τ` or a sweep over several values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TauSpec {
    One(f64),
    Sweep(Vec<f64>),
}

impl Default for TauSpec {
    fn default() -> Self {
        TauSpec::One(DEFAULT_TAU)
    }
}

impl TauSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TauSpec::One(t) => vec![*t],
            TauSpec::Sweep(ts) => ts.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub theorem: Theorem,
    pub d: u32,
    pub s: f64,
    pub p: f64,
    #[serde(default)]
    pub tau: TauSpec,
    pub grid: GridConfig,
    pub potential: PotentialConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Required for random potentials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    /// `[re, im]`.
    pub amplitude: Complex64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub center: Vec<f64>,
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub eig_tol: f64,
    pub eta_target: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_p: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let o = VerifyOptions::default();
        Tolerances {
            eig_tol: o.eig_tol,
            eta_target: o.eta_target,
            classification_eps: o.classification_eps,
            gamma_p: o.gamma_p,
        }
    }
}

impl From<Tolerances> for VerifyOptions {
    fn from(t: Tolerances) -> Self {
        VerifyOptions {
            eta_target: t.eta_target,
            eig_tol: t.eig_tol,
            classification_eps: t.classification_eps,
            gamma_p: t.gamma_p,
        }
    }
}

/// A job with every value fixed, ready to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedJob {
    pub index: usize,
    pub name: String,
    pub theorem: Theorem,
    pub params: SpectralParams,
    pub grid: Grid,
    pub potential: PotentialSpec,
    pub options: VerifyOptions,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("configuration serializes");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Validates every job and expands `τ` sweeps.
    pub fn resolve(&self) -> Result<Vec<ResolvedJob>> {
        if self.version != CONFIG_VERSION {
            return Err(CliError::usage(format!(
                "unsupported configuration version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.workers == 0 {
            return Err(CliError::usage("workers must be at least 1"));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol < 1.0) {
            return Err(CliError::usage("quad_tol must lie in (0, 1)"));
        }
        if self.jobs.is_empty() {
            return Err(CliError::usage("configuration has no jobs"));
        }
        let mut out = Vec::new();
        for (i, job) in self.jobs.iter().enumerate() {
            let label = job.name.clone().unwrap_or_else(|| format!("job{i}"));
            let taus = job.tau.values();
            if taus.is_empty() {
                return Err(CliError::usage(format!("{label}: empty tau sweep")));
            }
            for &tau in &taus {
                let name = if taus.len() > 1 { format!("{label}-tau{tau}") } else { label.clone() };
                let resolved = job
                    .resolve(out.len(), name.clone(), tau)
                    .map_err(|e| CliError::usage(format!("{name}: {e}")))?;
                out.push(resolved);
            }
        }
        let mut names: Vec<&str> = out.iter().map(|j| j.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::usage(format!("duplicate job name {:?}", w[0])));
        }
        Ok(out)
    }
}

impl JobConfig {
    fn resolve(&self, index: usize, name: String, tau: f64) -> Result<ResolvedJob, String> {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err("job names may only contain ASCII letters, digits, '-', '_' and '.'".into());
        }
        let params = SpectralParams::new(self.d, self.s, self.p, tau);
        params.validate(self.theorem).map_err(|e| e.to_string())?;
        let grid = Grid::new(self.d, self.grid.n, self.grid.l).map_err(|e| e.to_string())?;
        let pc = &self.potential;
        let seed = match (pc.kind, self.seed) {
            (PotentialKind::RandomBandlimited, None) => {
                return Err("random potentials need an explicit seed".into());
            }
            (_, s) => s.unwrap_or(0),
        };
        if !(pc.width > 0.0 && pc.width.is_finite()) || !pc.amplitude.is_finite() {
            return Err("potential needs a finite amplitude and a positive width".into());
        }
        if !pc.center.is_empty() && pc.center.len() != self.d as usize {
            return Err(format!("potential center has {} coordinates, expected {}", pc.center.len(), self.d));
        }
        let t = &self.tolerances;
        if !(t.eta_target > 0.0 && t.eta_target < 1.0) || !(t.eig_tol > 0.0) {
            return Err("tolerances need 0 < eta_target < 1 and eig_tol > 0".into());
        }
        let potential = PotentialSpec {
            kind: pc.kind,
            amplitude: pc.amplitude,
            width: pc.width,
            center: pc.center.clone(),
            seed,
        };
        Ok(ResolvedJob {
            index,
            name,
            theorem: self.theorem,
            params,
            grid,
            potential,
            options: (*t).into(),
        })
    }
}
