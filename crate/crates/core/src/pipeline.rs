//! End-to-end composition: pair manifest in, suggestion report out.
//!
//! A *pair manifest* is a small JSON file describing one source program
//! and its translation:
//!
//! ```json
//! {
//!   "pair_id": "matrix_path",
//!   "source_cmd": "python3 {manifest_dir}/source.py {input}",
//!   "translated_cmd": "{manifest_dir}/build/translated {input}",
//!   "coverage_cmd": "python3 {manifest_dir}/covrun.py {input} {coverage_out}",
//!   "translated_file": "translated.cpp",
//!   "seeds_dir": "seeds"
//! }
//! ```
//!
//! `{manifest_dir}` expands to the directory containing the manifest, so
//! a corpus checkout works from any working directory (paths with spaces
//! in them are not supported inside command strings). Relative
//! `translated_file`/`seeds_dir` paths resolve against the same
//! directory. `coverage_cmd` may be null or absent for pairs without
//! instrumentation; `language_profile_id`, `timeout_s` and
//! `normalization` are optional per-pair overrides of the application
//! config.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::classify::{classify_lines, LanguageProfile, ProfileError};
use crate::config::AppConfig;
use crate::fuzz::{run_campaign, CorpusState, FuzzError};
use crate::localize::{localize, LocalizeError, SuggestionReport};
use crate::model::{CodePair, ExecutionRecord, ModelError, OutputNormalization, RunnerProfile};
use crate::runner::{run_batch, RunError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad pair manifest {path:?}: {detail}")]
    Manifest { path: String, detail: String },
    #[error("no seed inputs in {dir:?}")]
    NoSeeds { dir: String },
    #[error("unknown language profile {profile_id:?}")]
    UnknownProfile { profile_id: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Fuzz(#[from] FuzzError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Localize(#[from] LocalizeError),
}

/// One pair as described on disk. See the module docs for the format.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairManifest {
    pub pair_id: String,
    pub source_cmd: String,
    pub translated_cmd: String,
    #[serde(default)]
    pub coverage_cmd: Option<String>,
    pub translated_file: PathBuf,
    pub seeds_dir: PathBuf,
    #[serde(default)]
    pub language_profile_id: Option<String>,
    #[serde(default)]
    pub timeout_s: Option<f64>,
    #[serde(default)]
    pub normalization: Option<OutputNormalization>,
}

/// Everything needed to run the stages for one pair.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    pub pair: CodePair,
    pub seeds: Vec<Vec<u8>>,
    pub profile: LanguageProfile,
}

/// What a full pipeline run produces.
#[derive(Debug)]
pub struct PipelineArtifacts {
    pub corpus: CorpusState,
    pub records: Vec<ExecutionRecord>,
    pub report: SuggestionReport,
}

pub fn load_pair_manifest(path: &Path) -> Result<PairManifest, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| PipelineError::Manifest {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn resolve_path(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

fn expand_manifest_dir(command: &str, manifest_dir: &Path) -> String {
    command.replace("{manifest_dir}", &manifest_dir.display().to_string())
}

/// Finds the classification profile by id: in the optional profiles
/// file first, then among the built-ins.
pub fn resolve_profile(
    profile_id: &str,
    profiles_file: Option<&Path>,
) -> Result<LanguageProfile, PipelineError> {
    if let Some(path) = profiles_file {
        let profiles = crate::classify::load_profiles(path)?;
        if let Some(found) = profiles.into_iter().find(|p| p.profile_id == profile_id) {
            return Ok(found);
        }
    }
    LanguageProfile::builtin(profile_id).ok_or_else(|| PipelineError::UnknownProfile {
        profile_id: profile_id.to_string(),
    })
}

/// Reads every regular file in `dir` as one seed payload, in file-name
/// order so campaigns are reproducible.
pub fn load_seeds(dir: &Path) -> Result<Vec<Vec<u8>>, PipelineError> {
    let entries = std::fs::read_dir(dir).map_err(|source| PipelineError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| PipelineError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        if entry.path().is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    let mut seeds = Vec::with_capacity(files.len());
    for file in files {
        let payload = std::fs::read(&file).map_err(|source| PipelineError::Io {
            path: file.display().to_string(),
            source,
        })?;
        seeds.push(payload);
    }
    if seeds.is_empty() {
        return Err(PipelineError::NoSeeds {
            dir: dir.display().to_string(),
        });
    }
    Ok(seeds)
}

/// Turns a manifest file into a runnable pair: expands `{manifest_dir}`,
/// reads the translated text, loads seeds, and resolves the
/// classification profile (per-pair overrides beat the config).
pub fn prepare_pair(manifest_path: &Path, cfg: &AppConfig) -> Result<PreparedPair, PipelineError> {
    let manifest = load_pair_manifest(manifest_path)?;
    let manifest_dir = manifest_path.parent().unwrap_or(Path::new("."));
    prepare_pair_from(&manifest, manifest_dir, cfg)
}

/// As [`prepare_pair`], for an already-parsed manifest (corpus
/// evaluation parses many from one file).
pub fn prepare_pair_from(
    manifest: &PairManifest,
    manifest_dir: &Path,
    cfg: &AppConfig,
) -> Result<PreparedPair, PipelineError> {
    let timeout = Duration::from_secs_f64(
        manifest
            .timeout_s
            .filter(|t| *t > 0.0 && t.is_finite())
            .unwrap_or(cfg.runner.timeout_s),
    );
    let normalization = manifest.normalization.unwrap_or(cfg.runner.normalization);

    let source_runner = RunnerProfile::new(
        expand_manifest_dir(&manifest.source_cmd, manifest_dir),
        None,
        timeout,
        normalization,
    )?;
    let translated_runner = RunnerProfile::new(
        expand_manifest_dir(&manifest.translated_cmd, manifest_dir),
        manifest
            .coverage_cmd
            .as_ref()
            .map(|c| expand_manifest_dir(c, manifest_dir)),
        timeout,
        normalization,
    )?;

    let translated_path = resolve_path(manifest_dir, &manifest.translated_file);
    let translated_text: Vec<String> = std::fs::read_to_string(&translated_path)
        .map_err(|source| PipelineError::Io {
            path: translated_path.display().to_string(),
            source,
        })?
        .lines()
        .map(String::from)
        .collect();

    let profile_id = manifest
        .language_profile_id
        .clone()
        .unwrap_or_else(|| cfg.language_profile_id.clone());
    let profile = resolve_profile(&profile_id, cfg.profiles_file.as_deref())?;

    let seeds = load_seeds(&resolve_path(manifest_dir, &manifest.seeds_dir))?;

    Ok(PreparedPair {
        pair: CodePair::new(
            manifest.pair_id.clone(),
            source_runner,
            translated_runner,
            translated_text,
            profile_id,
        ),
        seeds,
        profile,
    })
}

/// Fuzzes, executes, and localizes one prepared pair. `sink` sees each
/// execution record as it completes (pass a no-op when the caller keeps
/// everything in memory).
pub fn run_pipeline(
    prepared: &PreparedPair,
    cfg: &AppConfig,
    sink: impl FnMut(&ExecutionRecord) -> std::io::Result<()>,
) -> Result<PipelineArtifacts, PipelineError> {
    let corpus = run_campaign(&prepared.pair, &prepared.seeds, &cfg.fuzz)?;
    let records = run_batch(
        &prepared.pair,
        &corpus.queue,
        cfg.exec_limit,
        cfg.worker_count,
        sink,
    )?;
    let classifications = classify_lines(&prepared.pair.translated_text, &prepared.profile);
    let report = localize(&records, &classifications, &prepared.pair, &cfg.scoring)?;
    Ok(PipelineArtifacts {
        corpus,
        records,
        report,
    })
}
