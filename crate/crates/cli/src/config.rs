use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use openrwa::norms::NormKind;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExampleKind {
    Ex1,
    Ex2,
    Ex3,
    Redfield,
}

/// Physical parameters of a sweep. Unused fields are ignored by the examples
/// that do not need them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    pub g: f64,
    pub gamma: f64,
    pub g1: f64,
    pub g2: f64,
    #[serde(alias = "omega-grid")]
    pub omega_grid: Vec<f64>,
    #[serde(alias = "kappa-grid")]
    pub kappa_grid: Vec<f64>,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Start of the window `[τ, T]` for the peripheral family of `ex3`.
    /// Defaults to `T/10`.
    pub tau: Option<f64>,
}

impl Default for Parameters {
    fn default() -> Self {
        Self {
            g: 1.0,
            gamma: 1.0,
            g1: 1.0,
            g2: 1.0,
            omega_grid: vec![10.0, 30.0, 100.0, 300.0, 1000.0],
            kappa_grid: vec![30.0, 100.0, 300.0],
            horizon: 5.0,
            tau: None,
        }
    }
}

impl Parameters {
    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(0.1 * self.horizon)
    }
}

fn default_rtol() -> f64 {
    1e-9
}

fn default_restarts() -> usize {
    8
}

fn default_candidates() -> usize {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub example: Option<ExampleKind>,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub norm: NormKind,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default)]
    pub seed: u64,
    /// Random restarts per numeric diamond-norm evaluation.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Grid times, ranked by the Choi trace norm, that receive a full
    /// numeric diamond-norm evaluation.
    #[serde(default = "default_candidates")]
    pub candidates: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// System-bath description for `redfield` runs, relative to the config file.
    #[serde(default)]
    pub spec_file: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            example: None,
            parameters: Parameters::default(),
            norm: NormKind::Diamond,
            rtol: default_rtol(),
            seed: 0,
            restarts: default_restarts(),
            candidates: default_candidates(),
            output: None,
            spec_file: None,
        }
    }
}

impl ExperimentConfig {
    pub fn for_example(example: ExampleKind) -> Self {
        Self {
            example: Some(example),
            ..Self::default()
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let (Some(spec), Some(dir)) = (&cfg.spec_file, path.parent()) {
            if spec.is_relative() {
                cfg.spec_file = Some(dir.join(spec));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self, example: ExampleKind) -> anyhow::Result<()> {
        let p = &self.parameters;
        if !(p.horizon > 0.0) || !p.horizon.is_finite() {
            bail!("T must be positive, got {}", p.horizon);
        }
        if !(self.rtol > 0.0) {
            bail!("rtol must be positive, got {}", self.rtol);
        }
        let check_grid = |name: &str, grid: &[f64]| -> anyhow::Result<()> {
            if grid.is_empty() {
                bail!("{name} must not be empty");
            }
            if let Some(bad) = grid.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
                bail!("{name} entries must be positive, found {bad}");
            }
            Ok(())
        };
        match example {
            ExampleKind::Ex1 | ExampleKind::Ex2 => check_grid("omega_grid", &p.omega_grid)?,
            ExampleKind::Ex3 => {
                check_grid("omega_grid", &p.omega_grid)?;
                check_grid("kappa_grid", &p.kappa_grid)?;
                let tau = p.tau();
                if !(tau > 0.0 && tau < p.horizon) {
                    bail!("tau must satisfy 0 < tau < T, got tau = {tau}, T = {}", p.horizon);
                }
            }
            ExampleKind::Redfield => {
                check_grid("kappa_grid", &p.kappa_grid)?;
                if self.spec_file.is_none() {
                    bail!("redfield runs need spec_file");
                }
            }
        }
        if self.norm == NormKind::Spectral && example != ExampleKind::Redfield {
            bail!("the closed-form bounds of {example:?} are diamond-norm statements; use norm = diamond");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_dashed_grid_names_and_capital_t() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"example": "ex1", "parameters": {"omega-grid": [20, 40], "T": 2.5}}"#).unwrap();
        assert_eq!(cfg.example, Some(ExampleKind::Ex1));
        assert_eq!(cfg.parameters.omega_grid, vec![20.0, 40.0]);
        assert_eq!(cfg.parameters.horizon, 2.5);
        assert_eq!(cfg.parameters.g, 1.0);
        assert_eq!(cfg.restarts, 8);
        assert!(cfg.validate(ExampleKind::Ex1).is_ok());
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"parameters": {"omega": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("omega"));
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"sed": 1}"#).is_err());
    }

    #[test]
    fn tau_defaults_to_tenth_of_horizon() {
        let mut p = Parameters::default();
        p.horizon = 3.0;
        assert!((p.tau() - 0.3).abs() < 1e-15);
        p.tau = Some(0.5);
        assert_eq!(p.tau(), 0.5);
    }

    #[test]
    fn validation_failures() {
        let mut cfg = ExperimentConfig::for_example(ExampleKind::Ex3);
        cfg.parameters.tau = Some(10.0);
        assert!(cfg.validate(ExampleKind::Ex3).is_err());

        let mut cfg = ExperimentConfig::for_example(ExampleKind::Ex1);
        cfg.parameters.omega_grid = vec![10.0, -1.0];
        assert!(cfg.validate(ExampleKind::Ex1).is_err());
        cfg.parameters.omega_grid.clear();
        assert!(cfg.validate(ExampleKind::Ex1).is_err());

        let mut cfg = ExperimentConfig::for_example(ExampleKind::Ex2);
        cfg.norm = NormKind::Spectral;
        assert!(cfg.validate(ExampleKind::Ex2).is_err());

        let cfg = ExperimentConfig::for_example(ExampleKind::Redfield);
        assert!(cfg.validate(ExampleKind::Redfield).is_err());
    }

    #[test]
    fn spec_file_is_resolved_next_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.json");
        std::fs::write(&path, r#"{"example": "redfield", "spec_file": "bath.json"}"#).unwrap();
        let cfg = ExperimentConfig::load(&path).unwrap();
        assert_eq!(cfg.spec_file, Some(dir.path().join("bath.json")));
    }
}
