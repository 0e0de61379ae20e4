//! Corpus-level evaluation: run the pipeline over many pairs with known
//! injected bugs and summarize how well localization does.
//!
//! A *corpus manifest* is a JSON file with a `pairs` array; each entry
//! has the same fields as a pair manifest plus the ground truth:
//!
//! ```json
//! {
//!   "pairs": [
//!     {
//!       "pair_id": "matrix_path",
//!       "source_cmd": "python3 {manifest_dir}/pairs/matrix_path/source.py {input}",
//!       "translated_cmd": "{manifest_dir}/build/matrix_path {input}",
//!       "coverage_cmd": "...",
//!       "translated_file": "pairs/matrix_path/translated.cpp",
//!       "seeds_dir": "pairs/matrix_path/seeds",
//!       "buggy_lines": [14],
//!       "complexity_inputs": { "s_difficulty": 5, "r_accept": 6, "c_cyc": 7 }
//!     }
//!   ]
//! }
//! ```
//!
//! Each pair is fuzzed and executed once; the localization is then
//! replayed at three execution budgets — the first 50 cases, the first
//! 200, and everything — so the effect of corpus size on the report is
//! visible in one run. Per-pair failures are recorded as strings and
//! never abort the corpus run.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::classify::classify_lines;
use crate::config::AppConfig;
use crate::fuzz::run_campaign;
use crate::localize::{localize, FlagMode};
use crate::metrics::{complexity_score, ComplexityInputs, ComplexityLevel};
use crate::model::{ExecutionRecord, OutputNormalization};
use crate::pipeline::{prepare_pair_from, PairManifest, PreparedPair};
use crate::runner::run_batch;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad corpus manifest {path:?}: {detail}")]
    Parse { path: String, detail: String },
}

/// The known-injected bugs for one pair.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub pair_id: String,
    pub buggy_lines: BTreeSet<u32>,
}

impl GroundTruth {
    /// Ground truth must name at least one line, all within the
    /// translated text.
    pub fn validate(&self, translated_line_count: usize) -> Result<(), String> {
        if self.buggy_lines.is_empty() {
            return Err(format!("pair {:?}: buggy_lines is empty", self.pair_id));
        }
        for &line in &self.buggy_lines {
            if line == 0 || line as usize > translated_line_count {
                return Err(format!(
                    "pair {:?}: buggy line {line} outside 1..={translated_line_count}",
                    self.pair_id
                ));
            }
        }
        Ok(())
    }
}

/// One corpus entry: a pair manifest plus ground truth and optional
/// complexity ratings. Fields mirror [`PairManifest`].
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusPairEntry {
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
    pub buggy_lines: BTreeSet<u32>,
    #[serde(default)]
    pub complexity_inputs: Option<ComplexityInputs>,
}

impl CorpusPairEntry {
    pub fn pair_manifest(&self) -> PairManifest {
        PairManifest {
            pair_id: self.pair_id.clone(),
            source_cmd: self.source_cmd.clone(),
            translated_cmd: self.translated_cmd.clone(),
            coverage_cmd: self.coverage_cmd.clone(),
            translated_file: self.translated_file.clone(),
            seeds_dir: self.seeds_dir.clone(),
            language_profile_id: self.language_profile_id.clone(),
            timeout_s: self.timeout_s,
            normalization: self.normalization,
        }
    }

    pub fn ground_truth(&self) -> GroundTruth {
        GroundTruth {
            pair_id: self.pair_id.clone(),
            buggy_lines: self.buggy_lines.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub pairs: Vec<CorpusPairEntry>,
}

pub fn load_corpus_manifest(path: &Path) -> Result<CorpusManifest, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CorpusError::Parse {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

/// The execution budgets every pair is evaluated at (`None` = all).
pub const BUDGET_ARMS: [Option<usize>; 3] = [Some(50), Some(200), None];

/// Localization outcome for one pair at one budget.
#[derive(Debug, Clone)]
pub struct ArmResult {
    pub budget: Option<usize>,
    pub r_reduc: f64,
    /// Whether any known-buggy line was flagged.
    pub hit: bool,
    pub mode: FlagMode,
    pub records_used: usize,
    pub flagged: Vec<u32>,
}

#[derive(Debug, Clone)]
pub enum PairOutcome {
    Evaluated {
        /// One result per entry of [`BUDGET_ARMS`], same order.
        arms: Vec<ArmResult>,
        complexity: Option<(f64, ComplexityLevel)>,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone)]
pub struct PairEvaluation {
    pub pair_id: String,
    pub outcome: PairOutcome,
}

/// Aggregates over the evaluated pairs at one budget.
#[derive(Debug, Clone)]
pub struct BudgetSummary {
    pub budget: Option<usize>,
    pub mean_r_reduc: f64,
    pub hit_rate: f64,
    pub pairs_counted: usize,
}

#[derive(Debug, Clone)]
pub struct CorpusSummary {
    pub pairs: Vec<PairEvaluation>,
    /// One row per entry of [`BUDGET_ARMS`], same order.
    pub budgets: Vec<BudgetSummary>,
    /// Convenience copies of the unlimited-budget aggregates.
    pub mean_r_reduc: f64,
    pub hit_rate: f64,
    pub pairs_evaluated: usize,
    pub pairs_failed: usize,
}

struct EvalEntry {
    pair_id: String,
    prep: Result<(PreparedPair, GroundTruth, Option<ComplexityInputs>), String>,
}

/// Runs fuzzing and execution once per pair, then localizes at each
/// budget arm over a case-id-ordered prefix of the records. Budgets are
/// the arms' own; `cfg.exec_limit` is ignored here.
fn evaluate_entries(entries: Vec<EvalEntry>, cfg: &AppConfig) -> CorpusSummary {
    let mut pairs: Vec<PairEvaluation> = Vec::with_capacity(entries.len());

    for entry in entries {
        let outcome = match entry.prep {
            Err(error) => PairOutcome::Failed { error },
            Ok((prepared, truth, complexity_inputs)) => {
                evaluate_one(&prepared, &truth, complexity_inputs, cfg)
                    .map(|(arms, complexity)| PairOutcome::Evaluated { arms, complexity })
                    .unwrap_or_else(|error| PairOutcome::Failed { error })
            }
        };
        pairs.push(PairEvaluation {
            pair_id: entry.pair_id,
            outcome,
        });
    }

    let evaluated: Vec<&Vec<ArmResult>> = pairs
        .iter()
        .filter_map(|p| match &p.outcome {
            PairOutcome::Evaluated { arms, .. } => Some(arms),
            PairOutcome::Failed { .. } => None,
        })
        .collect();

    let budgets: Vec<BudgetSummary> = BUDGET_ARMS
        .iter()
        .enumerate()
        .map(|(idx, &budget)| {
            let n = evaluated.len();
            let (sum_r, hits) = evaluated.iter().fold((0.0f64, 0usize), |(s, h), arms| {
                let arm = &arms[idx];
                (s + arm.r_reduc, h + usize::from(arm.hit))
            });
            BudgetSummary {
                budget,
                mean_r_reduc: if n == 0 { 0.0 } else { sum_r / n as f64 },
                hit_rate: if n == 0 { 0.0 } else { hits as f64 / n as f64 },
                pairs_counted: n,
            }
        })
        .collect();

    let all_arm = budgets.last().expect("BUDGET_ARMS is non-empty");
    CorpusSummary {
        mean_r_reduc: all_arm.mean_r_reduc,
        hit_rate: all_arm.hit_rate,
        pairs_evaluated: evaluated.len(),
        pairs_failed: pairs.len() - evaluated.len(),
        pairs,
        budgets,
    }
}

fn evaluate_one(
    prepared: &PreparedPair,
    truth: &GroundTruth,
    complexity_inputs: Option<ComplexityInputs>,
    cfg: &AppConfig,
) -> Result<(Vec<ArmResult>, Option<(f64, ComplexityLevel)>), String> {
    truth.validate(prepared.pair.translated_line_count)?;
    let complexity = match complexity_inputs {
        Some(inputs) => {
            inputs.validate().map_err(|e| e.to_string())?;
            Some(complexity_score(&inputs))
        }
        None => None,
    };

    let corpus = run_campaign(&prepared.pair, &prepared.seeds, &cfg.fuzz)
        .map_err(|e| format!("fuzzing failed: {e}"))?;
    let mut records = run_batch(
        &prepared.pair,
        &corpus.queue,
        None,
        cfg.worker_count,
        |_| Ok(()),
    )
    .map_err(|e| format!("execution failed: {e}"))?;
    // A budget of N means "the first N executed cases"; with parallel
    // workers records arrive in completion order, so restore corpus
    // order before slicing prefixes.
    records.sort_by_key(|r| r.case_id);

    let classifications = classify_lines(&prepared.pair.translated_text, &prepared.profile);

    let mut arms = Vec::with_capacity(BUDGET_ARMS.len());
    for budget in BUDGET_ARMS {
        let slice: &[ExecutionRecord] = match budget {
            Some(n) => &records[..n.min(records.len())],
            None => &records,
        };
        let report = localize(slice, &classifications, &prepared.pair, &cfg.scoring)
            .map_err(|e| format!("localization at budget {budget:?} failed: {e}"))?;
        arms.push(ArmResult {
            budget,
            r_reduc: report.r_reduc,
            hit: report
                .flagged
                .iter()
                .any(|f| truth.buggy_lines.contains(&f.line_no)),
            mode: report.mode,
            records_used: report.records_used,
            flagged: report.flagged.iter().map(|f| f.line_no).collect(),
        });
    }
    Ok((arms, complexity))
}

/// Evaluates already-prepared pairs (no complexity ratings attached).
pub fn evaluate_pairs(pairs: Vec<(PreparedPair, GroundTruth)>, cfg: &AppConfig) -> CorpusSummary {
    let entries = pairs
        .into_iter()
        .map(|(prepared, truth)| EvalEntry {
            pair_id: truth.pair_id.clone(),
            prep: Ok((prepared, truth, None)),
        })
        .collect();
    evaluate_entries(entries, cfg)
}

/// Evaluates every pair in a corpus manifest. Preparation failures
/// (missing files, bad commands) become per-pair errors in the summary.
pub fn evaluate_corpus(
    manifest: &CorpusManifest,
    manifest_dir: &Path,
    cfg: &AppConfig,
) -> CorpusSummary {
    let entries = manifest
        .pairs
        .iter()
        .map(|entry| EvalEntry {
            pair_id: entry.pair_id.clone(),
            prep: prepare_pair_from(&entry.pair_manifest(), manifest_dir, cfg)
                .map(|prepared| (prepared, entry.ground_truth(), entry.complexity_inputs))
                .map_err(|e| e.to_string()),
        })
        .collect();
    evaluate_entries(entries, cfg)
}

fn budget_label(budget: Option<usize>) -> String {
    match budget {
        Some(n) => n.to_string(),
        None => "all".to_string(),
    }
}

impl CorpusSummary {
    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|p| match &p.outcome {
                PairOutcome::Evaluated { arms, complexity } => serde_json::json!({
                    "pair_id": p.pair_id,
                    "status": "ok",
                    "complexity": complexity.map(|(score, level)| serde_json::json!({
                        "score": score,
                        "level": format!("{level:?}"),
                    })),
                    "arms": arms.iter().map(|a| serde_json::json!({
                        "budget": a.budget,
                        "r_reduc": a.r_reduc,
                        "hit": a.hit,
                        "mode": a.mode.to_string(),
                        "records_used": a.records_used,
                        "flagged": a.flagged,
                    })).collect::<Vec<_>>(),
                }),
                PairOutcome::Failed { error } => serde_json::json!({
                    "pair_id": p.pair_id,
                    "status": "error",
                    "error": error,
                }),
            })
            .collect();

        serde_json::json!({
            "pairs": pairs,
            "budgets": self.budgets.iter().map(|b| serde_json::json!({
                "budget": b.budget,
                "mean_r_reduc": b.mean_r_reduc,
                "hit_rate": b.hit_rate,
                "pairs_counted": b.pairs_counted,
            })).collect::<Vec<_>>(),
            "mean_r_reduc": self.mean_r_reduc,
            "hit_rate": self.hit_rate,
            "pairs_evaluated": self.pairs_evaluated,
            "pairs_failed": self.pairs_failed,
        })
    }

    /// Plain-text table: one row per pair and arm, then the aggregates.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<20} {:>7} {:>8} {:<10} {:>8} {:>4}\n",
            "pair", "budget", "records", "mode", "r_reduc", "hit"
        ));
        for p in &self.pairs {
            match &p.outcome {
                PairOutcome::Evaluated { arms, .. } => {
                    for a in arms {
                        out.push_str(&format!(
                            "{:<20} {:>7} {:>8} {:<10} {:>8.3} {:>4}\n",
                            p.pair_id,
                            budget_label(a.budget),
                            a.records_used,
                            a.mode.to_string(),
                            a.r_reduc,
                            if a.hit { "yes" } else { "no" },
                        ));
                    }
                }
                PairOutcome::Failed { error } => {
                    out.push_str(&format!("{:<20} error: {}\n", p.pair_id, error));
                }
            }
        }
        out.push('\n');
        out.push_str(&format!(
            "{:<7} {:>6} {:>13} {:>9}\n",
            "budget", "pairs", "mean_r_reduc", "hit_rate"
        ));
        for b in &self.budgets {
            out.push_str(&format!(
                "{:<7} {:>6} {:>13.3} {:>9.3}\n",
                budget_label(b.budget),
                b.pairs_counted,
                b.mean_r_reduc,
                b.hit_rate,
            ));
        }
        out
    }
}
