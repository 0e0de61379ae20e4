//! Minimal LCOV tracefile reader.
//!
//! Coverage commands emit standard LCOV text:
//!
//! ```text
//! SF:translated.cpp
//! DA:4,1
//! DA:5,0
//! end_of_record
//! ```
//!
//! Only the first `SF:` section is read — coverage runs here always
//! instrument a single file — and only `DA:` records matter inside it.
//! Every other record type (`FN:`, `BRDA:`, ...) is ignored. Lines with
//! a zero count still matter: they define the set of instrumentable
//! lines that the fuzzer's coverage fraction is measured against.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LcovError {
    #[error("malformed coverage data at tracefile line {line_no}: {detail}")]
    Malformed { line_no: usize, detail: String },
}

/// Per-line execution counts for one run; lines are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageMap {
    pub counts: BTreeMap<u32, u64>,
}

impl CoverageMap {
    /// Lines executed at least once.
    pub fn covered(&self) -> BTreeSet<u32> {
        self.counts
            .iter()
            .filter(|(_, &count)| count > 0)
            .map(|(&line, _)| line)
            .collect()
    }

    /// All instrumented lines, executed or not.
    pub fn instrumented(&self) -> BTreeSet<u32> {
        self.counts.keys().copied().collect()
    }
}

fn malformed(line_no: usize, detail: impl Into<String>) -> LcovError {
    LcovError::Malformed {
        line_no,
        detail: detail.into(),
    }
}

/// Parses LCOV text into a [`CoverageMap`].
///
/// A tracefile without any `SF:` section (or without `DA:` records)
/// parses to an empty map; a `DA:` record that is unparsable or outside
/// an `SF:` section is an error carrying its tracefile line number.
/// Duplicate `DA:` records for the same line accumulate.
pub fn parse_lcov(text: &str) -> Result<CoverageMap, LcovError> {
    let mut map = CoverageMap::default();
    let mut in_section = false;
    let mut section_done = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || section_done {
            continue;
        }

        if let Some(rest) = line.strip_prefix("DA:") {
            if !in_section {
                return Err(malformed(line_no, "DA record outside an SF section"));
            }
            // DA:<line>,<count>[,<checksum>] — the checksum is ignored.
            let mut fields = rest.split(',');
            let lineno_field = fields.next().unwrap_or("");
            let count_field = fields
                .next()
                .ok_or_else(|| malformed(line_no, format!("DA record missing count: {rest:?}")))?;
            let covered_line: u32 = lineno_field
                .trim()
                .parse()
                .map_err(|_| malformed(line_no, format!("bad DA line number: {lineno_field:?}")))?;
            if covered_line == 0 {
                return Err(malformed(line_no, "DA line numbers are 1-based"));
            }
            let count: u64 = count_field
                .trim()
                .parse()
                .map_err(|_| malformed(line_no, format!("bad DA hit count: {count_field:?}")))?;
            let entry = map.counts.entry(covered_line).or_insert(0);
            *entry = entry.saturating_add(count);
        } else if line.starts_with("SF:") {
            if in_section {
                return Err(malformed(line_no, "SF record inside an open section"));
            }
            in_section = true;
        } else if line == "end_of_record" {
            if in_section {
                // Only the first section is read.
                section_done = true;
            }
        }
        // Anything else (TN:, FN:, BRDA:, ...) is ignored.
    }

    Ok(map)
}
