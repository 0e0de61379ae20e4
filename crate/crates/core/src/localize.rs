//! Per-line suspiciousness scoring and the debugging suggestion report.
//!
//! Two independent signals are combined per line of the translated
//! program:
//!
//! * a **statistics score** from execution records — lines covered
//!   mostly by failing cases are suspicious, lines covered by any
//!   passing case less so;
//! * an **expertise score** from lexical classification — control flow
//!   and scope headers are where translations tend to go wrong, while
//!   plain straight-line statements rarely do.
//!
//! The overall score is their sum. Lines at or above `flag_threshold`
//! are flagged; if none reach it, an anomaly fallback flags statistical
//! outliers (mean + `anomaly_sigma` standard deviations). If that also
//! finds nothing, the report is empty: the translation looks consistent.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{LineClassification, LineLabel};
use crate::model::{CodePair, ExecutionRecord, Verdict};

#[derive(Debug, Error)]
pub enum LocalizeError {
    #[error("no usable execution records: every record is excluded")]
    NoUsableRecords,
}

#[derive(Debug, Error)]
#[error("invalid scoring config: {0}")]
pub struct InvalidScoringConfig(pub String);

/// Weights for both scoring components and the flagging rules.
///
/// The defaults keep the heuristics ordered by strength: a line whose
/// covering cases all fail scores 2.1 on statistics alone (above the 1.5
/// flag threshold), while a passing simple line stays near the 0.1
/// baseline no matter what the expertise side adds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringConfig {
    /// Floor added to every statistics score so scores stay positive.
    pub base_score: f64,
    /// Failure-rate weight when no passing case covers the line.
    pub theta_h1: f64,
    /// Weight when the line fails more often than a coin flip.
    pub theta_h2: f64,
    /// Weight otherwise.
    pub theta_low: f64,
    /// Expertise starting value for any scored line.
    pub alpha_base: f64,
    /// Added for control-flow lines.
    pub alpha_cf: f64,
    /// Multiplier for scope-header lines.
    pub alpha_hdr: f64,
    /// Multiplier (dampening) for structurally simple lines.
    pub alpha_simple: f64,
    /// Overall score at or above which a line is flagged.
    pub flag_threshold: f64,
    /// Anomaly fallback flags lines ≥ mean + anomaly_sigma × σ.
    pub anomaly_sigma: f64,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            base_score: 0.1,
            theta_h1: 2.0,
            theta_h2: 1.0,
            theta_low: 0.25,
            alpha_base: 0.2,
            alpha_cf: 0.6,
            alpha_hdr: 1.5,
            alpha_simple: 0.5,
            flag_threshold: 1.5,
            anomaly_sigma: 2.0,
        }
    }
}

impl ScoringConfig {
    /// Checks the structural constraints the scoring rules rely on.
    pub fn validate(&self) -> Result<(), InvalidScoringConfig> {
        let err = |msg: &str| Err(InvalidScoringConfig(msg.to_string()));
        if !(self.base_score >= 0.0) {
            return err("base_score must be non-negative");
        }
        if !(self.theta_h1 > self.theta_h2 && self.theta_h2 > self.theta_low) {
            return err("weights must satisfy theta_h1 > theta_h2 > theta_low");
        }
        if !(self.theta_low > 0.0) {
            return err("theta_low must be positive");
        }
        if !(self.alpha_base >= 0.0 && self.alpha_cf >= 0.0) {
            return err("alpha_base and alpha_cf must be non-negative");
        }
        if !(self.alpha_simple > 0.0 && self.alpha_simple <= 1.0 && self.alpha_hdr >= 1.0) {
            return err("alpha multipliers must satisfy 0 < alpha_simple <= 1 <= alpha_hdr");
        }
        if !(self.flag_threshold > 0.0) {
            return err("flag_threshold must be positive");
        }
        if !(self.anomaly_sigma > 0.0) {
            return err("anomaly_sigma must be positive");
        }
        Ok(())
    }
}

/// Scores for one line of the translated program.
#[derive(Debug, Clone, PartialEq)]
pub struct LineScore {
    /// 1-based line number.
    pub line_no: u32,
    /// Failing records covering this line.
    pub cf: u32,
    /// Passing records covering this line.
    pub cp: u32,
    pub stat_score: f64,
    pub exp_score: f64,
    /// Always exactly `stat_score + exp_score`.
    pub overall: f64,
    pub labels: BTreeSet<LineLabel>,
}

/// How the flagged set of a report was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagMode {
    /// Lines reached the configured threshold.
    Threshold,
    /// Nothing reached the threshold; statistical outliers flagged.
    Anomaly,
    /// Nothing stands out; the report is empty.
    None,
}

impl std::fmt::Display for FlagMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            FlagMode::Threshold => "threshold",
            FlagMode::Anomaly => "anomaly",
            FlagMode::None => "none",
        };
        f.write_str(name)
    }
}

/// One flagged line in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedLine {
    pub line_no: u32,
    pub overall: f64,
    pub labels: BTreeSet<LineLabel>,
}

/// The debugging suggestion handed to the user: which lines to look at,
/// in what order, and how much of the program they can skip.
#[derive(Debug, Clone, PartialEq)]
pub struct SuggestionReport {
    pub pair_id: String,
    /// Descending by overall score; ties broken by ascending line number.
    pub flagged: Vec<FlaggedLine>,
    pub mode: FlagMode,
    /// Non-excluded records that fed the statistics.
    pub records_used: usize,
    /// Fraction of lines the user does NOT have to inspect.
    pub r_reduc: f64,
}

/// Suspiciousness from pass/fail coverage counts alone.
///
/// With `p = cf / (cf + cp)` the score is `base_score + p × θ`, where θ
/// reflects how damning the evidence is: `theta_h1` when no passing case
/// covers the line, `theta_h2` when the line fails more often than a
/// 50% coin flip (strictly — an even split does not qualify), and
/// `theta_low` otherwise. Lines with no failing coverage sit at the
/// baseline.
pub fn score_statistics(cf: u32, cp: u32, cfg: &ScoringConfig) -> f64 {
    if cf == 0 {
        return cfg.base_score;
    }
    let p = f64::from(cf) / f64::from(cf + cp);
    let theta = if cp == 0 {
        cfg.theta_h1
    } else if p > 0.5 {
        cfg.theta_h2
    } else {
        cfg.theta_low
    };
    cfg.base_score + p * theta
}

/// Suspiciousness from lexical shape alone: start at `alpha_base`, add
/// `alpha_cf` for control flow, then scale up for scope headers and down
/// for simple statements. Ignorable lines score zero.
pub fn score_expertise(labels: &BTreeSet<LineLabel>, cfg: &ScoringConfig) -> f64 {
    if labels.contains(&LineLabel::Ignorable) {
        return 0.0;
    }
    let mut s = cfg.alpha_base;
    if labels.contains(&LineLabel::ControlFlow) {
        s += cfg.alpha_cf;
    }
    if labels.contains(&LineLabel::ScopeHeader) {
        s *= cfg.alpha_hdr;
    }
    if labels.contains(&LineLabel::Simple) {
        s *= cfg.alpha_simple;
    }
    s
}

/// Search-space reduction: the fraction of lines not flagged.
pub fn compute_r_reduc(flagged_count: usize, line_count: usize) -> f64 {
    1.0 - flagged_count as f64 / line_count as f64
}

/// Computes per-line scores from execution records and classifications.
///
/// Excluded records must already be filtered out. Covered line numbers
/// outside `1..=classifications.len()` are ignored — coverage tools may
/// count lines past the text we were given (e.g. template expansions).
pub fn score_lines(
    usable_records: &[&ExecutionRecord],
    classifications: &[LineClassification],
    cfg: &ScoringConfig,
) -> Vec<LineScore> {
    let line_count = classifications.len();
    let mut cf = vec![0u32; line_count];
    let mut cp = vec![0u32; line_count];
    for rec in usable_records {
        let bucket = match rec.verdict {
            Verdict::Fail => &mut cf,
            Verdict::Pass => &mut cp,
            Verdict::Excluded => continue,
        };
        for &line in &rec.covered_lines {
            if (1..=line_count as u32).contains(&line) {
                bucket[line as usize - 1] += 1;
            }
        }
    }

    classifications
        .iter()
        .enumerate()
        .map(|(idx, class)| {
            debug_assert_eq!(class.line_no as usize, idx + 1);
            let (stat_score, exp_score) = if class.is_ignorable() {
                (0.0, 0.0)
            } else {
                (
                    score_statistics(cf[idx], cp[idx], cfg),
                    score_expertise(&class.labels, cfg),
                )
            };
            LineScore {
                line_no: (idx + 1) as u32,
                cf: cf[idx],
                cp: cp[idx],
                stat_score,
                exp_score,
                overall: stat_score + exp_score,
                labels: class.labels.clone(),
            }
        })
        .collect()
}

/// Selects the flagged lines from a score vector.
///
/// Threshold mode wins when any line reaches `flag_threshold`. Otherwise
/// the anomaly fallback computes mean and population standard deviation
/// of the overall scores across non-ignorable lines and flags lines at
/// least `anomaly_sigma` deviations above the mean; a uniform score
/// vector (σ == 0) flags nothing.
pub fn flag_scores(scores: &[LineScore], cfg: &ScoringConfig) -> (FlagMode, Vec<u32>) {
    let by_threshold: Vec<u32> = scores
        .iter()
        .filter(|s| s.overall >= cfg.flag_threshold)
        .map(|s| s.line_no)
        .collect();
    if !by_threshold.is_empty() {
        return (FlagMode::Threshold, by_threshold);
    }

    let candidates: Vec<&LineScore> = scores
        .iter()
        .filter(|s| !s.labels.contains(&LineLabel::Ignorable))
        .collect();
    if candidates.is_empty() {
        return (FlagMode::None, Vec::new());
    }
    let n = candidates.len() as f64;
    let mean = candidates.iter().map(|s| s.overall).sum::<f64>() / n;
    let variance = candidates
        .iter()
        .map(|s| (s.overall - mean).powi(2))
        .sum::<f64>()
        / n;
    let sigma = variance.sqrt();
    if sigma == 0.0 {
        return (FlagMode::None, Vec::new());
    }
    let cutoff = mean + cfg.anomaly_sigma * sigma;
    let by_anomaly: Vec<u32> = candidates
        .iter()
        .filter(|s| s.overall >= cutoff)
        .map(|s| s.line_no)
        .collect();
    if by_anomaly.is_empty() {
        (FlagMode::None, Vec::new())
    } else {
        (FlagMode::Anomaly, by_anomaly)
    }
}

/// Produces the suggestion report for one program pair.
///
/// Excluded records are invisible to the statistics; if every record is
/// excluded there is nothing to localize. The result depends only on the
/// record set (records are sorted by case id first), the classifications,
/// and the config.
pub fn localize(
    records: &[ExecutionRecord],
    classifications: &[LineClassification],
    pair: &CodePair,
    cfg: &ScoringConfig,
) -> Result<SuggestionReport, LocalizeError> {
    assert_eq!(
        classifications.len(),
        pair.translated_line_count,
        "classifications must cover every line of the translated text"
    );

    let mut sorted: Vec<&ExecutionRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.case_id);
    let usable: Vec<&ExecutionRecord> = sorted
        .into_iter()
        .filter(|r| r.verdict != Verdict::Excluded)
        .collect();
    if usable.is_empty() {
        return Err(LocalizeError::NoUsableRecords);
    }

    let scores = score_lines(&usable, classifications, cfg);
    let (mode, flagged_lines) = flag_scores(&scores, cfg);

    let mut flagged: Vec<FlaggedLine> = flagged_lines
        .into_iter()
        .map(|line_no| {
            let s = &scores[line_no as usize - 1];
            FlaggedLine {
                line_no,
                overall: s.overall,
                labels: s.labels.clone(),
            }
        })
        .collect();
    flagged.sort_by(|a, b| {
        b.overall
            .total_cmp(&a.overall)
            .then(a.line_no.cmp(&b.line_no))
    });

    Ok(SuggestionReport {
        pair_id: pair.pair_id.clone(),
        r_reduc: compute_r_reduc(flagged.len(), pair.translated_line_count),
        flagged,
        mode,
        records_used: usable.len(),
    })
}

impl SuggestionReport {
    /// JSON form of the report; flagged entries quote the source line.
    pub fn to_json(&self, pair: &CodePair) -> serde_json::Value {
        let flagged: Vec<serde_json::Value> = self
            .flagged
            .iter()
            .map(|f| {
                serde_json::json!({
                    "line": f.line_no,
                    "score": f.overall,
                    "labels": f.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                    "text": pair.line(f.line_no).unwrap_or(""),
                })
            })
            .collect();
        serde_json::json!({
            "pair_id": self.pair_id,
            "mode": self.mode.to_string(),
            "records_used": self.records_used,
            "r_reduc": self.r_reduc,
            "flagged": flagged,
        })
    }

    /// Human-readable rendering with the flagged source lines quoted.
    pub fn render_text(&self, pair: &CodePair) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "pair {}: {} suspicious line{} (mode: {}, records used: {}, search-space reduction: {:.3})",
            self.pair_id,
            self.flagged.len(),
            if self.flagged.len() == 1 { "" } else { "s" },
            self.mode,
            self.records_used,
            self.r_reduc,
        );
        if self.flagged.is_empty() {
            let _ = writeln!(
                out,
                "  nothing stands out; the translation looks consistent"
            );
        }
        for f in &self.flagged {
            let labels = f
                .labels
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                out,
                "  line {:>4}  score {:.3}  [{}]",
                f.line_no, f.overall, labels
            );
            let _ = writeln!(out, "    > {}", pair.line(f.line_no).unwrap_or(""));
        }
        out
    }
}
