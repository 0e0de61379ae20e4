//! Shared data model: program pairs, runner profiles, test cases,
//! execution records, and the differential output oracle.

use std::collections::BTreeSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation errors raised by the model constructors.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error(
        "command template must contain {placeholder} exactly once (found {count}): {template:?}"
    )]
    BadPlaceholder {
        template: String,
        placeholder: &'static str,
        count: usize,
    },
    #[error("runner timeout must be positive")]
    ZeroTimeout,
}

/// How program output is canonicalized before the oracle compares it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputNormalization {
    /// Byte-for-byte comparison.
    Exact,
    /// Strip trailing spaces/tabs from every line, then strip trailing
    /// newlines from the whole output. This is the default because
    /// translated programs routinely differ in trailing separators while
    /// being semantically identical.
    TrimTrailingWhitespace,
}

impl Default for OutputNormalization {
    fn default() -> Self {
        OutputNormalization::TrimTrailingWhitespace
    }
}

/// Describes how to execute one side of a program pair.
#[derive(Debug, Clone)]
pub struct RunnerProfile {
    /// Command template; `{input}` is replaced with the path of a file
    /// holding the test-case payload. The payload is also piped to the
    /// child's stdin, so programs may read either the file or stdin.
    pub run_command_template: String,
    /// Optional command template that runs the program under coverage
    /// instrumentation and writes an LCOV tracefile to `{coverage_out}`.
    pub coverage_command_template: Option<String>,
    /// Wall-clock budget per invocation.
    pub timeout: Duration,
    pub output_normalization: OutputNormalization,
}

fn count_placeholder(template: &str, placeholder: &str) -> usize {
    template.matches(placeholder).count()
}

fn check_placeholder(template: &str, placeholder: &'static str) -> Result<(), ModelError> {
    let count = count_placeholder(template, placeholder);
    if count != 1 {
        return Err(ModelError::BadPlaceholder {
            template: template.to_string(),
            placeholder,
            count,
        });
    }
    Ok(())
}

impl RunnerProfile {
    pub fn new(
        run_command_template: impl Into<String>,
        coverage_command_template: Option<String>,
        timeout: Duration,
        output_normalization: OutputNormalization,
    ) -> Result<Self, ModelError> {
        let run_command_template = run_command_template.into();
        check_placeholder(&run_command_template, "{input}")?;
        if let Some(cov) = &coverage_command_template {
            check_placeholder(cov, "{input}")?;
            check_placeholder(cov, "{coverage_out}")?;
        }
        if timeout.is_zero() {
            return Err(ModelError::ZeroTimeout);
        }
        Ok(RunnerProfile {
            run_command_template,
            coverage_command_template,
            timeout,
            output_normalization,
        })
    }
}

/// A source program together with its (possibly faulty) translation.
#[derive(Debug, Clone)]
pub struct CodePair {
    pub pair_id: String,
    pub source_runner: RunnerProfile,
    pub translated_runner: RunnerProfile,
    /// Lines of the translated program, addressed 1-based everywhere
    /// (`translated_text[0]` is line 1), matching coverage reports.
    pub translated_text: Vec<String>,
    pub translated_line_count: usize,
    /// Picks the token/keyword profile used for line classification.
    pub language_profile_id: String,
}

impl CodePair {
    pub fn new(
        pair_id: impl Into<String>,
        source_runner: RunnerProfile,
        translated_runner: RunnerProfile,
        translated_text: Vec<String>,
        language_profile_id: impl Into<String>,
    ) -> Self {
        let translated_line_count = translated_text.len();
        CodePair {
            pair_id: pair_id.into(),
            source_runner,
            translated_runner,
            translated_text,
            translated_line_count,
            language_profile_id: language_profile_id.into(),
        }
    }

    /// The 1-based line `no`, or `None` when out of range.
    pub fn line(&self, no: u32) -> Option<&str> {
        let idx = (no as usize).checked_sub(1)?;
        self.translated_text.get(idx).map(String::as_str)
    }
}

/// Where a test case came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseOrigin {
    Seed,
    Mutant,
}

/// One fuzzer-produced input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    /// Assigned monotonically by the corpus; unique within a campaign.
    pub case_id: u64,
    pub payload: Vec<u8>,
    pub origin: CaseOrigin,
    /// For mutants, the case they were derived from.
    pub parent_id: Option<u64>,
    /// Whether the payload passed the character filter.
    pub valid: bool,
}

/// Differential verdict for one test case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Excluded,
}

/// Why a case was excluded from localization statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    /// The source program itself crashed, so there is no trusted output.
    SourceCrash,
    /// Both sides timed out; nothing can be compared.
    BothTimeout,
    /// Only the source timed out; the translation cannot be blamed.
    SourceTimeout,
}

/// Outcome of running one test case through both programs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionRecord {
    pub case_id: u64,
    pub verdict: Verdict,
    pub exclusion_reason: Option<ExclusionReason>,
    pub source_output: Vec<u8>,
    pub translated_output: Vec<u8>,
    /// 1-based lines of the translated program covered by this case.
    pub covered_lines: BTreeSet<u32>,
    pub wall_time_ms: u64,
}

/// Canonicalizes raw program output according to `mode`.
///
/// `TrimTrailingWhitespace` strips trailing spaces and tabs from each
/// line and then strips trailing newlines from the whole output; the
/// result is stable under repeated application.
pub fn normalize_output(output: &[u8], mode: OutputNormalization) -> Vec<u8> {
    match mode {
        OutputNormalization::Exact => output.to_vec(),
        OutputNormalization::TrimTrailingWhitespace => {
            let mut lines: Vec<&[u8]> = output.split(|&b| b == b'\n').collect();
            for line in &mut lines {
                let mut end = line.len();
                while end > 0 && (line[end - 1] == b' ' || line[end - 1] == b'\t') {
                    end -= 1;
                }
                *line = &line[..end];
            }
            let mut joined = lines.join(&b'\n');
            while joined.last() == Some(&b'\n') {
                joined.pop();
            }
            joined
        }
    }
}

/// The differential oracle: a case passes when source and translated
/// outputs are equal after normalization.
pub fn oracle_verdict(
    source_output: &[u8],
    translated_output: &[u8],
    mode: OutputNormalization,
) -> Verdict {
    if normalize_output(source_output, mode) == normalize_output(translated_output, mode) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
