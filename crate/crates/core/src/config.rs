//! Application configuration: a TOML file plus dotted-key overrides.
//!
//! Every knob has a default, so all of these are valid:
//!
//! ```text
//! thinter pipeline --pair pair.json
//! thinter pipeline --pair pair.json --config thinter.toml
//! thinter pipeline --pair pair.json --set fuzz.coverage_target=0.8
//! ```
//!
//! Overrides are applied on top of the file (or the defaults when no
//! file is given) before anything is validated, so flags always win.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzz::FuzzConfig;
use crate::localize::ScoringConfig;
use crate::model::OutputNormalization;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config file {path:?}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("bad --set override {key:?}: {detail}")]
    BadOverride { key: String, detail: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Default execution parameters for both runners of a pair (a pair
/// manifest may override them per pair).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunnerConfig {
    /// Per-invocation wall-clock budget in seconds.
    pub timeout_s: f64,
    pub normalization: OutputNormalization,
}

impl Default for RunnerConfig {
    fn default() -> Self {
        RunnerConfig {
            timeout_s: 5.0,
            normalization: OutputNormalization::TrimTrailingWhitespace,
        }
    }
}

/// Output locations for pipeline artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    pub corpus_dir: PathBuf,
    pub log_file: PathBuf,
    pub report_json: PathBuf,
    pub report_text: PathBuf,
}

impl Default for PathsConfig {
    fn default() -> Self {
        PathsConfig {
            corpus_dir: PathBuf::from("corpus_out"),
            log_file: PathBuf::from("exec_log.jsonl"),
            report_json: PathBuf::from("report.json"),
            report_text: PathBuf::from("report.txt"),
        }
    }
}

/// The complete application configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub fuzz: FuzzConfig,
    pub scoring: ScoringConfig,
    pub runner: RunnerConfig,
    /// Classification profile used when a pair manifest names none.
    pub language_profile_id: String,
    /// Optional TOML file with additional language profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles_file: Option<PathBuf>,
    /// Cap on executed cases per batch; absent means "run everything".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exec_limit: Option<usize>,
    /// Parallel workers for batch execution.
    pub worker_count: usize,
    pub paths: PathsConfig,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            fuzz: FuzzConfig::default(),
            scoring: ScoringConfig::default(),
            runner: RunnerConfig::default(),
            language_profile_id: "c_like".to_string(),
            profiles_file: None,
            exec_limit: None,
            worker_count: 1,
            paths: PathsConfig::default(),
        }
    }
}

impl AppConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.fuzz
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.scoring
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(self.runner.timeout_s > 0.0 && self.runner.timeout_s.is_finite()) {
            return Err(ConfigError::Invalid(
                "runner.timeout_s must be positive".into(),
            ));
        }
        if self.worker_count == 0 {
            return Err(ConfigError::Invalid(
                "worker_count must be at least 1".into(),
            ));
        }
        if self.exec_limit == Some(0) {
            return Err(ConfigError::Invalid("exec_limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Parses an override value the way TOML would: bool, then integer,
/// then float, falling back to a plain string.
fn parse_scalar(raw: &str) -> toml::Value {
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    toml::Value::String(raw.to_string())
}

fn apply_override(root: &mut toml::Value, key: &str, raw_value: &str) -> Result<(), ConfigError> {
    let segments: Vec<&str> = key.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(ConfigError::BadOverride {
            key: key.to_string(),
            detail: "empty key segment".to_string(),
        });
    }
    let mut node = root;
    for segment in &segments[..segments.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| ConfigError::BadOverride {
                key: key.to_string(),
                detail: format!("{segment:?} is not a table"),
            })?;
        node = table
            .entry(segment.to_string())
            .or_insert(toml::Value::Table(Default::default()));
    }
    let leaf = segments.last().expect("at least one segment");
    let table = node
        .as_table_mut()
        .ok_or_else(|| ConfigError::BadOverride {
            key: key.to_string(),
            detail: "parent is not a table".to_string(),
        })?;
    table.insert(leaf.to_string(), parse_scalar(raw_value));
    Ok(())
}

/// Loads the configuration: the TOML file at `path` (pure defaults when
/// `None`), with `overrides` — `("fuzz.rng_seed", "7")` style pairs from
/// `--set` flags — applied on top, then validated.
pub fn load_config(
    path: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<AppConfig, ConfigError> {
    let mut value = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.display().to_string(),
                source,
            })?;
            text.parse::<toml::Value>()
                .map_err(|source| ConfigError::Parse {
                    path: path.display().to_string(),
                    source,
                })?
        }
        None => toml::Value::try_from(AppConfig::default())
            .expect("default config is representable as TOML"),
    };

    for (key, raw) in overrides {
        apply_override(&mut value, key, raw)?;
    }

    let config: AppConfig = value
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Invalid(e.to_string()))?;
    config.validate()?;
    Ok(config)
}
