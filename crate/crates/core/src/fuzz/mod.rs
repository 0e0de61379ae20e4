//! Coverage-guided mutation fuzzing.
//!
//! A campaign starts from seed inputs, repeatedly mutates queued cases,
//! filters mutants through a character whitelist, measures line coverage
//! of the translated program, and retains a mutant only when it executes
//! a line nothing else has reached. It stops at a coverage target
//! (default 90% of instrumentable lines), a time budget (default one
//! minute), or a generation cap (default 10000 mutants).
//!
//! Campaign evaluation is sequential: coverage runs are cheap at this
//! scale and a single evaluation order is what makes replay with a fixed
//! `rng_seed` bit-identical. (Batch execution of a finished corpus is
//! where parallel workers pay off; see [`crate::runner::run_batch`].)

mod mutate;
mod store;

pub use mutate::{MutationOp, Mutator};
pub use store::{load_corpus, save_corpus, StoreError};

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CaseOrigin, CodePair, TestCase};
use crate::runner::{run_coverage, CoverageOutcome, RunError};

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("every seed was rejected by the character filter")]
    AllSeedsInvalid,
    #[error("coverage unavailable: {0}")]
    CoverageUnavailable(String),
    #[error("invalid fuzz config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Run(#[from] RunError),
}

/// Byte whitelist applied to every candidate payload before execution.
///
/// Configured as a string of allowed characters; the default covers
/// ASCII alphanumerics, space, newline, tab, and common delimiters —
/// enough for the numeric/textual inputs competitive-programming-style
/// programs read, while rejecting control bytes and non-ASCII noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub allowed_characters: BTreeSet<u8>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        let mut allowed: BTreeSet<u8> = BTreeSet::new();
        allowed.extend(b'0'..=b'9');
        allowed.extend(b'a'..=b'z');
        allowed.extend(b'A'..=b'Z');
        allowed.extend(*b" \n\t");
        allowed.extend(*b",.;:[]()-_\"");
        FilterConfig {
            allowed_characters: allowed,
        }
    }
}

impl FilterConfig {
    pub fn is_valid(&self, payload: &[u8]) -> bool {
        payload.iter().all(|b| self.allowed_characters.contains(b))
    }
}

// In config files the whitelist is written as a plain string of the
// allowed characters (escapes like \n and \t work in TOML strings).
impl Serialize for FilterConfig {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let text: String = self.allowed_characters.iter().map(|&b| b as char).collect();
        let mut s = serializer.serialize_struct("FilterConfig", 1)?;
        s.serialize_field("allowed_characters", &text)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for FilterConfig {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            allowed_characters: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(FilterConfig {
            allowed_characters: raw.allowed_characters.bytes().collect(),
        })
    }
}

/// Stop conditions and reproducibility knobs for one campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FuzzConfig {
    /// Stop once covered/instrumentable reaches this fraction.
    pub coverage_target: f64,
    /// Stop after this many seconds of campaigning.
    pub time_budget_s: f64,
    /// Stop after this many generated mutants (valid or not).
    pub max_cases: u64,
    /// Seed for the mutation stream; same seed, same campaign.
    pub rng_seed: u64,
    pub filter: FilterConfig,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            coverage_target: 0.90,
            time_budget_s: 60.0,
            max_cases: 10_000,
            rng_seed: 0,
            filter: FilterConfig::default(),
        }
    }
}

impl FuzzConfig {
    pub fn time_budget(&self) -> std::time::Duration {
        std::time::Duration::from_secs_f64(self.time_budget_s)
    }

    pub fn validate(&self) -> Result<(), FuzzError> {
        let err = |msg: &str| Err(FuzzError::InvalidConfig(msg.to_string()));
        if !(self.coverage_target > 0.0 && self.coverage_target <= 1.0) {
            return err("coverage_target must be in (0, 1]");
        }
        if !(self.time_budget_s > 0.0 && self.time_budget_s.is_finite()) {
            return err("time_budget_s must be positive");
        }
        if self.max_cases == 0 {
            return err("max_cases must be at least 1");
        }
        if self.filter.allowed_characters.is_empty() {
            return err("the character whitelist must not be empty");
        }
        Ok(())
    }
}

/// Everything a campaign has learned: the retained cases, cumulative
/// coverage, and generation/rejection counters.
#[derive(Debug, Clone, Default)]
pub struct CorpusState {
    /// Retained test cases, seeds first; every entry is valid.
    pub queue: Vec<TestCase>,
    /// Union of covered lines over all executed queued cases.
    pub cumulative_coverage: BTreeSet<u32>,
    /// All lines any coverage report has ever mentioned (the coverage
    /// fraction's denominator).
    pub instrumentable_lines: BTreeSet<u32>,
    /// Mutants whose payload failed the character filter.
    pub rejected_count: u64,
    /// Mutants generated, valid or not (seeds are not generated).
    pub generated_count: u64,
    next_case_id: u64,
    /// Scheduling bias: queue slots whose last mutation was retained.
    novelty_flags: Vec<bool>,
}

impl CorpusState {
    fn assign_case_id(&mut self) -> u64 {
        let id = self.next_case_id;
        self.next_case_id += 1;
        id
    }

    /// Covered fraction of all instrumentable lines seen so far.
    pub fn coverage_fraction(&self) -> f64 {
        if self.instrumentable_lines.is_empty() {
            0.0
        } else {
            self.cumulative_coverage.len() as f64 / self.instrumentable_lines.len() as f64
        }
    }

    /// Share of generated mutants the filter rejected.
    pub fn rejection_ratio(&self) -> f64 {
        if self.generated_count == 0 {
            0.0
        } else {
            self.rejected_count as f64 / self.generated_count as f64
        }
    }
}

/// Coverage-guided retention: keep a mutant iff it reached a line the
/// corpus has not covered yet.
pub fn should_retain(mutant_coverage: &BTreeSet<u32>, cumulative: &BTreeSet<u32>) -> bool {
    mutant_coverage.difference(cumulative).next().is_some()
}

/// Round-robin scheduler with a 2:1 bias: a queue slot whose last
/// mutation yielded novelty gets two picks per sweep instead of one.
struct Scheduler {
    cursor: usize,
    picks_left: u8,
}

impl Scheduler {
    /// `queue_len` must be the (non-zero) queue length at start; the
    /// first pick lands on slot 0.
    fn new(queue_len: usize) -> Self {
        Scheduler {
            cursor: queue_len - 1,
            picks_left: 0,
        }
    }

    fn next(&mut self, state: &CorpusState) -> usize {
        if self.picks_left == 0 {
            self.cursor = (self.cursor + 1) % state.queue.len();
            self.picks_left = if state.novelty_flags[self.cursor] {
                2
            } else {
                1
            };
        }
        self.picks_left -= 1;
        self.cursor
    }
}

/// Runs one fuzzing campaign for a program pair.
///
/// Seeds are filtered and executed for baseline coverage first; the
/// mutation loop then runs until a stop condition holds. Guidance needs
/// the translated runner's coverage command — its absence, or failure on
/// every seed, is an error (there is nothing to guide by).
pub fn run_campaign(
    pair: &CodePair,
    seeds: &[Vec<u8>],
    cfg: &FuzzConfig,
) -> Result<CorpusState, FuzzError> {
    run_campaign_observed(pair, seeds, cfg, |_| {})
}

/// [`run_campaign`] with a progress observer, called once after every
/// mutation-loop iteration (kept or not). Useful for progress display
/// and for asserting campaign invariants mid-flight.
pub fn run_campaign_observed(
    pair: &CodePair,
    seeds: &[Vec<u8>],
    cfg: &FuzzConfig,
    mut observer: impl FnMut(&CorpusState),
) -> Result<CorpusState, FuzzError> {
    cfg.validate()?;
    if pair.translated_runner.coverage_command_template.is_none() {
        return Err(FuzzError::CoverageUnavailable(
            "translated runner has no coverage command".to_string(),
        ));
    }

    let started = Instant::now();
    let mut state = CorpusState::default();

    // Seed phase: filter, then measure baseline coverage.
    let mut valid_seeds: Vec<TestCase> = Vec::new();
    for payload in seeds {
        let case_id = state.assign_case_id();
        if cfg.filter.is_valid(payload) {
            valid_seeds.push(TestCase {
                case_id,
                payload: payload.clone(),
                origin: CaseOrigin::Seed,
                parent_id: None,
                valid: true,
            });
        } else {
            state.rejected_count += 1;
        }
    }
    if valid_seeds.is_empty() {
        return Err(FuzzError::AllSeedsInvalid);
    }

    let mut last_failure = String::new();
    for seed in valid_seeds {
        match run_coverage(&pair.translated_runner, &seed.payload)? {
            CoverageOutcome::Map(map) => {
                state.instrumentable_lines.extend(map.instrumented());
                state.cumulative_coverage.extend(map.covered());
            }
            CoverageOutcome::Unavailable(reason) => {
                eprintln!(
                    "warning: seed {} coverage unavailable for pair {}: {reason}",
                    seed.case_id, pair.pair_id
                );
                last_failure = reason;
            }
        }
        state.queue.push(seed);
        state.novelty_flags.push(false);
    }
    if state.instrumentable_lines.is_empty() {
        return Err(FuzzError::CoverageUnavailable(format!(
            "coverage failed for every seed (last: {last_failure})"
        )));
    }

    // Mutation loop.
    let mut mutator = Mutator::new(cfg.rng_seed, &cfg.filter);
    let mut scheduler = Scheduler::new(state.queue.len());
    loop {
        if state.coverage_fraction() >= cfg.coverage_target
            || started.elapsed() >= cfg.time_budget()
            || state.generated_count >= cfg.max_cases
        {
            break;
        }

        let parent_idx = scheduler.next(&state);
        let (payload, _op) = mutator.mutate(&state.queue[parent_idx], &state.queue, parent_idx);
        let case_id = state.assign_case_id();
        state.generated_count += 1;

        if !cfg.filter.is_valid(&payload) {
            state.rejected_count += 1;
            state.novelty_flags[parent_idx] = false;
            observer(&state);
            continue;
        }

        let covered = match run_coverage(&pair.translated_runner, &payload)? {
            CoverageOutcome::Map(map) => {
                state.instrumentable_lines.extend(map.instrumented());
                map.covered()
            }
            CoverageOutcome::Unavailable(reason) => {
                eprintln!(
                    "warning: mutant {case_id} coverage unavailable for pair {}: {reason}",
                    pair.pair_id
                );
                state.novelty_flags[parent_idx] = false;
                observer(&state);
                continue;
            }
        };

        if should_retain(&covered, &state.cumulative_coverage) {
            state.cumulative_coverage.extend(&covered);
            state.queue.push(TestCase {
                case_id,
                payload,
                origin: CaseOrigin::Mutant,
                parent_id: Some(state.queue[parent_idx].case_id),
                valid: true,
            });
            state.novelty_flags[parent_idx] = true;
            state.novelty_flags.push(false);
        } else {
            state.novelty_flags[parent_idx] = false;
        }
        observer(&state);
    }

    Ok(state)
}
