use std::path::Path;

use serde::{Deserialize, Serialize};

use elastic_motion::analytics::DEFAULT_WINDOW_FRAC;
use elastic_motion::preprocess::{DEFAULT_CUTOFF_RATIO, DEFAULT_FILTER_ORDER};
use elastic_motion::registration::{
    RegistrationOptions, DEFAULT_MAX_ITER, DEFAULT_MAX_STEP, DEFAULT_TOL,
};
use elastic_motion::DEFAULT_GRID_N;

use crate::error::{io_err, PipelineError, Result};

pub const DEFAULT_CHANNEL: &str = "gyro";

/// Pipeline settings, read from a TOML file. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub grid_n: usize,
    pub filter_order: usize,
    pub cutoff_ratio: f64,
    pub channel: String,
    pub dp_max_slope: usize,
    pub mean_max_iter: usize,
    pub mean_tol: f64,
    pub rolling_window_frac: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            grid_n: DEFAULT_GRID_N,
            filter_order: DEFAULT_FILTER_ORDER,
            cutoff_ratio: DEFAULT_CUTOFF_RATIO,
            channel: DEFAULT_CHANNEL.to_string(),
            dp_max_slope: DEFAULT_MAX_STEP,
            mean_max_iter: DEFAULT_MAX_ITER,
            mean_tol: DEFAULT_TOL,
            rolling_window_frac: DEFAULT_WINDOW_FRAC,
        }
    }
}

/// Command-line overrides; `None` keeps the file (or default) value.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub grid_n: Option<usize>,
    pub filter_order: Option<usize>,
    pub cutoff_ratio: Option<f64>,
    pub channel: Option<String>,
    pub dp_max_slope: Option<usize>,
    pub mean_max_iter: Option<usize>,
    pub mean_tol: Option<f64>,
    pub rolling_window_frac: Option<f64>,
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| PipelineError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml_str(&text, path)
    }

    /// Loads `path` if given, otherwise starts from defaults, then applies
    /// overrides and validates the result.
    pub fn resolve(path: Option<&Path>, overrides: &ConfigOverrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &ConfigOverrides) {
        if let Some(v) = o.grid_n {
            self.grid_n = v;
        }
        if let Some(v) = o.filter_order {
            self.filter_order = v;
        }
        if let Some(v) = o.cutoff_ratio {
            self.cutoff_ratio = v;
        }
        if let Some(v) = &o.channel {
            self.channel = v.clone();
        }
        if let Some(v) = o.dp_max_slope {
            self.dp_max_slope = v;
        }
        if let Some(v) = o.mean_max_iter {
            self.mean_max_iter = v;
        }
        if let Some(v) = o.mean_tol {
            self.mean_tol = v;
        }
        if let Some(v) = o.rolling_window_frac {
            self.rolling_window_frac = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, message: String| Err(PipelineError::ConfigField { field, message });
        if !(3..=100_000).contains(&self.grid_n) {
            return bad("grid_n", format!("must be in 3..=100000, got {}", self.grid_n));
        }
        if !(1..=16).contains(&self.filter_order) {
            return bad("filter_order", format!("must be in 1..=16, got {}", self.filter_order));
        }
        if !(self.cutoff_ratio > 0.0 && self.cutoff_ratio < 1.0) {
            return bad("cutoff_ratio", format!("must lie in (0, 1), got {}", self.cutoff_ratio));
        }
        if self.channel.trim().is_empty() {
            return bad("channel", "must name a column".into());
        }
        if !(1..=32).contains(&self.dp_max_slope) {
            return bad("dp_max_slope", format!("must be in 1..=32, got {}", self.dp_max_slope));
        }
        if self.mean_max_iter == 0 {
            return bad("mean_max_iter", "must be at least 1".into());
        }
        if !(self.mean_tol.is_finite() && self.mean_tol > 0.0) {
            return bad("mean_tol", format!("must be positive, got {}", self.mean_tol));
        }
        if !(self.rolling_window_frac > 0.0 && self.rolling_window_frac <= 1.0) {
            return bad(
                "rolling_window_frac",
                format!("must lie in (0, 1], got {}", self.rolling_window_frac),
            );
        }
        Ok(())
    }

    pub fn registration(&self) -> RegistrationOptions {
        RegistrationOptions { max_step: self.dp_max_slope, max_iter: self.mean_max_iter, tol: self.mean_tol }
    }
}
