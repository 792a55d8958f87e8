use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{EdgeCorrection, Taper, DEFAULT_DIRECTIONS};
use crate::grid::Grid;
use crate::samplers::ModelSpec;

pub const DEFAULT_TOL_SUP: f64 = 0.05;
pub const DEFAULT_Z_CAP: f64 = 4.0;
/// Floor on standard errors in z-scores. Without it, near-deterministic
/// estimates (lattices) fail on biases far below any tolerance.
pub const DEFAULT_STDERR_FLOOR: f64 = 1e-3;

/// Which statistic the estimator produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    /// Pair correlation, i.e. the ac autocorrelation density over ρ².
    Paircorr,
    /// Periodogram, i.e. the diffraction.
    Diffraction,
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stat::Paircorr => "paircorr",
            Stat::Diffraction => "diffraction",
        })
    }
}

impl FromStr for Stat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paircorr" | "autocorrelation" => Ok(Stat::Paircorr),
            "diffraction" => Ok(Stat::Diffraction),
            other => Err(Error::invalid(
                "stat",
                format!("expected paircorr or diffraction, got `{other}`"),
            )),
        }
    }
}

fn default_replicas() -> usize {
    20
}

fn default_directions() -> usize {
    DEFAULT_DIRECTIONS
}

fn default_tol_sup() -> f64 {
    DEFAULT_TOL_SUP
}

fn default_z_cap() -> f64 {
    DEFAULT_Z_CAP
}

fn default_floor() -> f64 {
    DEFAULT_STDERR_FLOOR
}

fn yes() -> bool {
    true
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: String,
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    /// Where the report and intermediate CSVs go; nothing is written if unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// The estimator applied to every replica. The grid lists the output
/// abscissae; each value summarises the cell `[x − Δ/2, x + Δ/2]` (always
/// for pair correlation, with `cell_average` for the periodogram).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub stat: Stat,
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "is_false")]
    pub centred: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub cell_average: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_samples: Option<usize>,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default)]
    pub taper: Taper,
    #[serde(default)]
    pub edge_correction: EdgeCorrection,
}

impl EstimatorConfig {
    pub fn new(stat: Stat, grid: Grid) -> Self {
        EstimatorConfig {
            stat,
            grid,
            centred: false,
            cell_average: false,
            cell_samples: None,
            directions: DEFAULT_DIRECTIONS,
            taper: Taper::None,
            edge_correction: EdgeCorrection::Translation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_tol_sup")]
    pub tol_sup: f64,
    #[serde(default = "default_z_cap")]
    pub z_cap: f64,
    #[serde(default)]
    pub exclude: Vec<[f64; 2]>,
    /// Add the model's default bands (central peak, lattice Bragg peaks,
    /// the β = 4 singularity).
    #[serde(default = "yes")]
    pub auto_exclude: bool,
    #[serde(default = "default_floor")]
    pub stderr_floor: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol_sup: DEFAULT_TOL_SUP,
            z_cap: DEFAULT_Z_CAP,
            exclude: Vec::new(),
            auto_exclude: true,
            stderr_floor: DEFAULT_STDERR_FLOOR,
        }
    }
}

/// A complete experiment: `[experiment]`, `[model]`, `[estimator]` and
/// `[verify]` sections, in TOML or JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub model: ModelSpec,
    pub estimator: EstimatorConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `.json` files as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.replicas == 0 {
            return Err(Error::invalid("experiment.replicas", "must be at least 1"));
        }
        self.model.validate()?;
        let est = &self.estimator;
        if est.directions == 0 {
            return Err(Error::invalid("estimator.directions", "must be positive"));
        }
        if est.cell_samples == Some(0) {
            return Err(Error::invalid("estimator.cell_samples", "must be positive"));
        }
        if est.stat == Stat::Paircorr {
            if est.grid.len() < 2 {
                return Err(Error::invalid(
                    "estimator.grid",
                    "pair correlation needs at least two bins",
                ));
            }
            if est.grid.min() - 0.5 * est.grid.step() < -1e-12 {
                return Err(Error::invalid(
                    "estimator.grid",
                    "the first bin would start below r = 0",
                ));
            }
            if matches!(self.model, ModelSpec::MarkedPoisson { .. }) {
                return Err(Error::invalid(
                    "estimator.stat",
                    "pair correlation is not defined for the weighted comb; use diffraction",
                ));
            }
        }
        let v = &self.verify;
        if !(v.tol_sup >= 0.0) {
            return Err(Error::invalid("verify.tol_sup", "must be non-negative"));
        }
        if !(v.z_cap > 0.0) {
            return Err(Error::invalid("verify.z_cap", "must be positive"));
        }
        if !(v.stderr_floor >= 0.0) {
            return Err(Error::invalid("verify.stderr_floor", "must be non-negative"));
        }
        if let Some(band) = v.exclude.iter().find(|b| !(b[0] < b[1])) {
            return Err(Error::invalid("verify.exclude", format!("band {band:?} is empty")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const POISSON: &str = r#"
[experiment]
name = "poisson-1d"
seed = 7
replicas = 4

[model]
kind = "poisson"
rho = 1.0
window = "interval 1000"

[estimator]
stat = "paircorr"
grid = "0.05:4.95:50"

[verify]
tol_sup = 0.1
"#;

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::from_toml(POISSON).unwrap();
        assert_eq!(cfg.experiment.replicas, 4);
        assert_eq!(cfg.verify.z_cap, 4.0);
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn validation_names_the_field() {
        let bad = POISSON.replace("replicas = 4", "replicas = 0");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("experiment.replicas"), "{err}");
        let typo = POISSON.replace("tol_sup", "tol_supp");
        assert!(ExperimentConfig::from_toml(&typo).is_err());
    }
}
