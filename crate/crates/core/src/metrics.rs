//! Evaluation metrics: complexity scoring of translated programs and
//! aggregate fix/attempt ratios over a labeled corpus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify_lines, contains_word, LanguageProfile, LineLabel};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid complexity inputs: {0}")]
    InvalidComplexityInputs(String),
    #[error("invalid metric counts: {0}")]
    InvalidCounts(String),
}

/// Inputs to the weighted complexity score. `s_difficulty` and
/// `r_accept` are caller-supplied ratings on a 0–10 scale; `c_cyc` is a
/// cyclomatic complexity (supplied or estimated via
/// [`estimate_cyclomatic`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityInputs {
    pub s_difficulty: f64,
    pub r_accept: f64,
    pub c_cyc: f64,
}

impl ComplexityInputs {
    pub fn new(s_difficulty: f64, r_accept: f64, c_cyc: f64) -> Result<Self, MetricsError> {
        let inputs = ComplexityInputs {
            s_difficulty,
            r_accept,
            c_cyc,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        let bad = |msg: String| Err(MetricsError::InvalidComplexityInputs(msg));
        for (name, v, lo, hi) in [
            ("s_difficulty", self.s_difficulty, 0.0, 10.0),
            ("r_accept", self.r_accept, 0.0, 10.0),
            ("c_cyc", self.c_cyc, 1.0, f64::INFINITY),
        ] {
            if !v.is_finite() || v < lo || v > hi {
                return bad(format!("{name} = {v} out of range"));
            }
        }
        Ok(())
    }
}

/// Coarse complexity bucket for a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexityLevel {
    Low,
    Medium,
    High,
}

/// Maps a complexity score to its level: below 4 is Low, 4 through 7
/// inclusive is Medium, above 7 is High.
pub fn complexity_level(score: f64) -> ComplexityLevel {
    if score < 4.0 {
        ComplexityLevel::Low
    } else if score <= 7.0 {
        ComplexityLevel::Medium
    } else {
        ComplexityLevel::High
    }
}

/// Weighted complexity score: each input contributes with weight 0.33
/// (the weights are used verbatim, not renormalized to sum to 1).
pub fn complexity_score(inputs: &ComplexityInputs) -> (f64, ComplexityLevel) {
    let score = (inputs.s_difficulty + inputs.r_accept + inputs.c_cyc) * 0.33;
    (score, complexity_level(score))
}

/// Keyword-based cyclomatic complexity estimate: one plus the number of
/// branching lines (`if`/`for`/`while`/`case` control flow) plus every
/// `&&` / `||` occurrence in the text.
pub fn estimate_cyclomatic(translated_text: &[String], profile: &LanguageProfile) -> f64 {
    let branch_keywords = ["if", "for", "while", "case"];
    let classes = classify_lines(translated_text, profile);
    let mut decision_points = 0usize;
    for (line, class) in translated_text.iter().zip(&classes) {
        if class.has(LineLabel::ControlFlow)
            && branch_keywords.iter().any(|kw| contains_word(line, kw))
        {
            decision_points += 1;
        }
    }
    let operators: usize = translated_text
        .iter()
        .map(|line| line.matches("&&").count() + line.matches("||").count())
        .sum();
    1.0 + (decision_points + operators) as f64
}

/// Outcome counts for a debugging experiment over a corpus: how many
/// snippets there were, how many were fixed, and how many were at least
/// attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCounts {
    pub n_all: u32,
    pub n_fixed: u32,
    pub n_attp: u32,
}

impl MetricCounts {
    pub fn new(n_all: u32, n_fixed: u32, n_attp: u32) -> Result<Self, MetricsError> {
        if n_all == 0 {
            return Err(MetricsError::InvalidCounts("n_all must be positive".into()));
        }
        if !(n_fixed <= n_attp && n_attp <= n_all) {
            return Err(MetricsError::InvalidCounts(format!(
                "need n_fixed <= n_attp <= n_all, got {n_fixed} / {n_attp} / {n_all}"
            )));
        }
        Ok(MetricCounts {
            n_all,
            n_fixed,
            n_attp,
        })
    }
}

/// Fraction of snippets fixed and fraction attempted.
pub fn fix_ratios(counts: &MetricCounts) -> (f64, f64) {
    let n_all = f64::from(counts.n_all);
    (
        f64::from(counts.n_fixed) / n_all,
        f64::from(counts.n_attp) / n_all,
    )
}
