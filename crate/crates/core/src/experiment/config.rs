use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::behavior::BehaviorModel;
use crate::error::{ConfigError, Error};
use crate::mission::EnvConfig;
use crate::planner::Lattice;
use crate::reward::RewardSpec;
use crate::simulator::ScenarioConfig;
use crate::trust::TrustParams;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Solve,
    #[default]
    Simulate,
    #[serde(rename = "exp1")]
    Experiment1,
    #[serde(rename = "exp2")]
    Experiment2,
}

/// Extent of exported policy grids. Points are spaced by the trust gains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    /// One-based sites exported by experiment 1; odd sites when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<Vec<usize>>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            alpha_min: 10.0,
            alpha_max: 300.0,
            beta_min: 10.0,
            beta_max: 300.0,
            sites: None,
        }
    }
}

impl GridConfig {
    pub fn lattice(&self, params: &TrustParams) -> Lattice {
        let count = |lo: f64, hi: f64, w: f64| ((hi - lo) / w + 1e-9).floor() as usize + 1;
        Lattice {
            alpha0: self.alpha_min,
            beta0: self.beta_min,
            n_alpha: count(self.alpha_min, self.alpha_max, params.w_success),
            n_beta: count(self.beta_min, self.beta_max, params.w_failure),
        }
    }

    pub fn export_sites(&self, n_sites: usize) -> Vec<usize> {
        match &self.sites {
            Some(s) => s.clone(),
            None => (1..=n_sites).step_by(2).collect(),
        }
    }

    fn validate(&self, n_sites: usize) -> Result<(), ConfigError> {
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(constraint(format!("grid.{field}"), format!("must be positive, got {v}")))
            }
        };
        positive("alpha_min", self.alpha_min)?;
        positive("beta_min", self.beta_min)?;
        if !(self.alpha_max >= self.alpha_min) {
            return Err(constraint("grid.alpha_max", "must be >= grid.alpha_min"));
        }
        if !(self.beta_max >= self.beta_min) {
            return Err(constraint("grid.beta_max", "must be >= grid.beta_min"));
        }
        if let Some(sites) = &self.sites {
            if let Some(bad) = sites.iter().find(|&&s| s == 0 || s > n_sites) {
                return Err(constraint("grid.sites", format!("site {bad} outside 1..={n_sites}")));
            }
        }
        Ok(())
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub grid: GridConfig,
    pub output_dir: PathBuf,
    pub experiment: ExperimentKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        ConfigFile::default().into_run_config()
    }
}

/// On-disk layout. Every field is optional and defaults to the reference setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConfigFile {
    schema_version: u32,
    env: EnvConfig,
    trust_params: TrustParams,
    reward_spec: RewardSpec,
    assumed_model: BehaviorModel,
    actual_model: BehaviorModel,
    discount: f64,
    n_episodes: usize,
    master_seed: u64,
    grid: GridConfig,
    output_dir: PathBuf,
    experiment: ExperimentKind,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let s = ScenarioConfig::default();
        Self {
            schema_version: SCHEMA_VERSION,
            env: s.env,
            trust_params: s.trust_params,
            reward_spec: s.reward_spec,
            assumed_model: s.assumed_model,
            actual_model: s.actual_model,
            discount: s.discount,
            n_episodes: s.n_episodes,
            master_seed: s.master_seed,
            grid: GridConfig::default(),
            output_dir: PathBuf::from("out"),
            experiment: ExperimentKind::default(),
        }
    }
}

impl ConfigFile {
    fn into_run_config(self) -> RunConfig {
        RunConfig {
            scenario: ScenarioConfig {
                env: self.env,
                trust_params: self.trust_params,
                reward_spec: self.reward_spec,
                assumed_model: self.assumed_model,
                actual_model: self.actual_model,
                discount: self.discount,
                n_episodes: self.n_episodes,
                master_seed: self.master_seed,
            },
            grid: self.grid,
            output_dir: self.output_dir,
            experiment: self.experiment,
        }
    }

    fn from_run_config(cfg: &RunConfig) -> Self {
        let s = &cfg.scenario;
        Self {
            schema_version: SCHEMA_VERSION,
            env: s.env,
            trust_params: s.trust_params,
            reward_spec: s.reward_spec,
            assumed_model: s.assumed_model,
            actual_model: s.actual_model,
            discount: s.discount,
            n_episodes: s.n_episodes,
            master_seed: s.master_seed,
            grid: cfg.grid.clone(),
            output_dir: cfg.output_dir.clone(),
            experiment: cfg.experiment,
        }
    }
}

fn constraint(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Constraint {
        field: field.into(),
        message: message.into(),
    }
}

fn qualify(section: &str, err: Error) -> ConfigError {
    match err {
        Error::InvalidParameter { name, reason } => constraint(format!("{section}.{name}"), reason),
        other => constraint(section, other.to_string()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.scenario;
        s.env.validate().map_err(|e| qualify("env", e))?;
        s.trust_params.validate().map_err(|e| qualify("trust_params", e))?;
        s.reward_spec.validate().map_err(|e| qualify("reward_spec", e))?;
        if !(s.discount > 0.0 && s.discount <= 1.0) {
            return Err(constraint("discount", format!("must lie in (0, 1], got {}", s.discount)));
        }
        if s.n_episodes == 0 {
            return Err(constraint("n_episodes", "must be at least 1"));
        }
        self.grid.validate(s.env.n_sites)
    }

    pub fn lattice(&self) -> Lattice {
        self.grid.lattice(&self.scenario.trust_params)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ConfigFile::from_run_config(self)).expect("config serializes")
    }
}

/// Parses and validates a configuration document. Blank input yields the defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    de.end().map_err(|e| ConfigError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(ConfigError::Schema {
            path: "schema_version".into(),
            message: format!("unsupported version {}, expected {SCHEMA_VERSION}", file.schema_version),
        });
    }
    let cfg = file.into_run_config();
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}
