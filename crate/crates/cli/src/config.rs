//! Experiment configuration: CLI overrides, per-experiment defaults, and
//! validation.
//!
//! Every experiment resolves the user's overrides against its own
//! documented defaults and echoes the fully resolved values into its
//! report, so a report alone suffices to reproduce the run.

use std::collections::BTreeMap;

use serde_json::{json, Value};

/// User-supplied overrides, shared across subcommands. `None`/empty means
/// "use the experiment's default".
#[derive(Debug, Clone)]
pub struct Overrides {
    /// Sample count for direct-draw experiments (`--n`).
    pub n: Option<usize>,
    /// Path count for path experiments (`--paths`).
    pub paths: Option<usize>,
    /// Steps per path, or the base rung of the resolution ladder (`--steps`).
    pub steps: Option<usize>,
    /// Time horizon `T` (`--horizon`).
    pub horizon: Option<f64>,
    /// σ sweep (`--sigma`, repeatable); empty uses the experiment default.
    pub sigmas: Vec<f64>,
    /// Root seed (`--seed`).
    pub seed: u64,
    /// Hill tail window (`--k`); default is n^(2/3).
    pub k: Option<usize>,
    /// Scheduling granularity in samples/paths per work unit (`--batch`).
    /// Affects only how work is sliced across threads, never the numbers.
    pub batch: Option<usize>,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            n: None,
            paths: None,
            steps: None,
            horizon: None,
            sigmas: Vec::new(),
            seed: 42,
            k: None,
            batch: None,
        }
    }
}

/// A configuration problem that should surface as a usage error
/// (exit code 2), not as a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl Overrides {
    /// Shared sanity checks on whatever the user supplied explicitly.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == Some(0) {
            return Err(ConfigError("--n must be positive".into()));
        }
        if self.paths == Some(0) {
            return Err(ConfigError("--paths must be positive".into()));
        }
        if self.steps == Some(0) {
            return Err(ConfigError("--steps must be positive".into()));
        }
        if let Some(t) = self.horizon {
            if !(t.is_finite() && t > 0.0) {
                return Err(ConfigError("--horizon must be positive and finite".into()));
            }
        }
        for &s in &self.sigmas {
            if !(s.is_finite() && s > 0.0) {
                return Err(ConfigError(format!("--sigma {s} must be positive and finite")));
            }
        }
        if self.k == Some(0) {
            return Err(ConfigError("--k must be positive".into()));
        }
        if self.batch == Some(0) {
            return Err(ConfigError("--batch must be positive".into()));
        }
        if let (Some(b), Some(n)) = (self.batch, self.n) {
            if b > n {
                return Err(ConfigError("--batch must not exceed --n".into()));
            }
        }
        Ok(())
    }

    /// Scheduling granularity with the default applied.
    pub fn batch_or_default(&self) -> usize {
        self.batch.unwrap_or(4096)
    }
}

/// Builder for the `config` echo embedded in every report: insertion is
/// explicit per experiment, storage is sorted for byte-stable output.
#[derive(Debug, Default)]
pub struct ConfigEcho(BTreeMap<String, Value>);

impl ConfigEcho {
    pub fn new(seed: u64) -> Self {
        let mut map = BTreeMap::new();
        map.insert("seed".to_string(), json!(seed));
        ConfigEcho(map)
    }

    pub fn count(mut self, key: &str, value: usize) -> Self {
        self.0.insert(key.to_string(), json!(value));
        self
    }

    pub fn real(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.to_string(), json!(value));
        self
    }

    pub fn reals(mut self, key: &str, values: &[f64]) -> Self {
        self.0.insert(key.to_string(), json!(values));
        self
    }

    pub fn finish(self) -> BTreeMap<String, Value> {
        self.0
    }
}
