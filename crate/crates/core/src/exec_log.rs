//! JSON Lines persistence for execution records.
//!
//! One object per line, program outputs base64-encoded so arbitrary
//! bytes survive the trip:
//!
//! ```json
//! {"case_id":3,"verdict":"Fail","exclusion_reason":null,"source_output_b64":"NDIK","translated_output_b64":"NDMK","covered_lines":[1,4],"wall_time_ms":12}
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ExclusionReason, ExecutionRecord, Verdict};

#[derive(Debug, Error)]
pub enum LogError {
    #[error("cannot access execution log {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad record at log line {line_no}: {source}")]
    Json {
        line_no: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("bad base64 output at log line {line_no}: {source}")]
    Base64 {
        line_no: usize,
        #[source]
        source: base64::DecodeError,
    },
    #[error("inconsistent record at log line {line_no}: verdict and exclusion_reason disagree")]
    Inconsistent { line_no: usize },
}

/// Wire form of one record. Field names and order are the log format.
#[derive(Debug, Serialize, Deserialize)]
struct WireRecord {
    case_id: u64,
    verdict: Verdict,
    exclusion_reason: Option<ExclusionReason>,
    source_output_b64: String,
    translated_output_b64: String,
    covered_lines: Vec<u32>,
    wall_time_ms: u64,
}

impl From<&ExecutionRecord> for WireRecord {
    fn from(rec: &ExecutionRecord) -> Self {
        WireRecord {
            case_id: rec.case_id,
            verdict: rec.verdict,
            exclusion_reason: rec.exclusion_reason,
            source_output_b64: BASE64.encode(&rec.source_output),
            translated_output_b64: BASE64.encode(&rec.translated_output),
            covered_lines: rec.covered_lines.iter().copied().collect(),
            wall_time_ms: rec.wall_time_ms,
        }
    }
}

/// Serializes one record onto `writer` as a single JSONL line.
pub fn write_record(writer: &mut impl Write, record: &ExecutionRecord) -> std::io::Result<()> {
    debug_assert_eq!(
        record.verdict == Verdict::Excluded,
        record.exclusion_reason.is_some(),
        "excluded verdicts and exclusion reasons must appear together"
    );
    let wire = WireRecord::from(record);
    serde_json::to_writer(&mut *writer, &wire)?;
    writer.write_all(b"\n")
}

/// Writes a whole log file, one record per line.
pub fn write_log(path: &Path, records: &[ExecutionRecord]) -> Result<(), LogError> {
    let io_err = |source| LogError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut writer = BufWriter::new(File::create(path).map_err(io_err)?);
    for record in records {
        write_record(&mut writer, record).map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

/// Reads a JSONL execution log back into records, validating the
/// verdict/exclusion pairing line by line.
pub fn read_log(path: &Path) -> Result<Vec<ExecutionRecord>, LogError> {
    let file = File::open(path).map_err(|source| LogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| LogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let wire: WireRecord =
            serde_json::from_str(&line).map_err(|source| LogError::Json { line_no, source })?;
        if (wire.verdict == Verdict::Excluded) != wire.exclusion_reason.is_some() {
            return Err(LogError::Inconsistent { line_no });
        }
        let decode = |field: &str| {
            BASE64
                .decode(field)
                .map_err(|source| LogError::Base64 { line_no, source })
        };
        records.push(ExecutionRecord {
            case_id: wire.case_id,
            verdict: wire.verdict,
            exclusion_reason: wire.exclusion_reason,
            source_output: decode(&wire.source_output_b64)?,
            translated_output: decode(&wire.translated_output_b64)?,
            covered_lines: wire.covered_lines.into_iter().collect(),
            wall_time_ms: wire.wall_time_ms,
        });
    }
    Ok(records)
}
