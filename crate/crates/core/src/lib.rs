//! Locates translation errors in auto-translated programs.
//!
//! The pipeline has three stages, each usable on its own:
//!
//! 1. [`fuzz`] grows a test corpus by coverage-guided mutation of seed
//!    inputs, using line coverage of the translated program as feedback.
//! 2. [`runner`] executes the source and translated programs on each test
//!    case and applies a differential oracle: a case passes when both
//!    programs produce equal (normalized) stdout.
//! 3. [`localize`] turns the pass/fail/coverage records into per-line
//!    suspiciousness scores and a ranked suggestion report.
//!
//! [`metrics`] adds evaluation helpers (complexity estimate, search-space
//! reduction, fix ratios) and [`corpus_eval`] runs the whole pipeline over
//! a corpus of program pairs with known bug locations.

pub mod classify;
pub mod config;
pub mod corpus_eval;
pub mod exec_log;
pub mod fuzz;
pub mod lcov;
pub mod localize;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod runner;

pub use classify::{classify_lines, LanguageProfile, LineClassification, LineLabel};
pub use config::{load_config, AppConfig};
pub use corpus_eval::{evaluate_corpus, load_corpus_manifest, CorpusManifest, CorpusSummary};
pub use exec_log::{read_log, write_log};
pub use fuzz::{run_campaign, run_campaign_observed, CorpusState, FilterConfig, FuzzConfig};
pub use lcov::{parse_lcov, CoverageMap};
pub use localize::{localize, FlagMode, LineScore, ScoringConfig, SuggestionReport};
pub use metrics::{complexity_score, estimate_cyclomatic, fix_ratios, ComplexityInputs};
pub use model::{
    normalize_output, oracle_verdict, CaseOrigin, CodePair, ExclusionReason, ExecutionRecord,
    OutputNormalization, RunnerProfile, TestCase, Verdict,
};
pub use pipeline::{prepare_pair, run_pipeline, PipelineArtifacts, PreparedPair};
pub use runner::{run_batch, run_one, ExitStatus, RunOutcome};
