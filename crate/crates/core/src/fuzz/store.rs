//! On-disk corpus format: one `case_<id>.bin` payload file per retained
//! case plus a `corpus.json` manifest describing provenance.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::CorpusState;
use crate::model::{CaseOrigin, TestCase};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("corpus i/o failed at {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad corpus manifest {path:?}: {source}")]
    Manifest {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEntry {
    case_id: u64,
    origin: CaseOrigin,
    parent_id: Option<u64>,
    valid: bool,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes the retained corpus to `dir` (created if missing): payload
/// files named `case_<id>.bin` and a `corpus.json` manifest in queue
/// order.
pub fn save_corpus(dir: &Path, state: &CorpusState) -> Result<(), StoreError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut entries = Vec::with_capacity(state.queue.len());
    for case in &state.queue {
        let path = dir.join(format!("case_{}.bin", case.case_id));
        std::fs::write(&path, &case.payload).map_err(io_err(&path))?;
        entries.push(ManifestEntry {
            case_id: case.case_id,
            origin: case.origin,
            parent_id: case.parent_id,
            valid: case.valid,
        });
    }
    let manifest_path = dir.join("corpus.json");
    let json = serde_json::to_string_pretty(&entries).expect("manifest serializes");
    std::fs::write(&manifest_path, json + "\n").map_err(io_err(&manifest_path))
}

/// Loads a corpus directory back into test cases, in manifest order.
pub fn load_corpus(dir: &Path) -> Result<Vec<TestCase>, StoreError> {
    let manifest_path = dir.join("corpus.json");
    let text = std::fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(&text).map_err(|source| StoreError::Manifest {
            path: manifest_path.display().to_string(),
            source,
        })?;
    let mut cases = Vec::with_capacity(entries.len());
    for entry in entries {
        let path = dir.join(format!("case_{}.bin", entry.case_id));
        let payload = std::fs::read(&path).map_err(io_err(&path))?;
        cases.push(TestCase {
            case_id: entry.case_id,
            payload,
            origin: entry.origin,
            parent_id: entry.parent_id,
            valid: entry.valid,
        });
    }
    Ok(cases)
}
