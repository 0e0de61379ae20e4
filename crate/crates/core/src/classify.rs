//! Lexical per-line classification of translated programs.
//!
//! The localizer's expertise heuristics need to know, per line, whether
//! it is control flow, the header line of a scope, inside a scope, a
//! plain statement, or nothing worth scoring (blank/comment/preprocessor).
//! Classification is deliberately lexical — one pass, no parsing — so it
//! works on any brace-scoped language and never fails. Known noise
//! (brace characters inside string literals, `*` at the start of a
//! pointer statement) is accepted; see the module tests.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read language profile file {path:?}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse language profile file {path:?}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("profile {0:?} has an empty control_flow_keywords set")]
    EmptyKeywords(String),
}

/// Token and keyword sets that drive classification for one language
/// family. The built-in `c_like` profile covers C, C++, Java, and
/// friends; other profiles can be loaded from a TOML file.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    pub profile_id: String,
    pub control_flow_keywords: BTreeSet<String>,
    pub scope_open_token: String,
    pub scope_close_token: String,
    pub statement_terminator: String,
    pub comment_prefixes: Vec<String>,
    pub preprocessor_prefix: Option<String>,
}

impl LanguageProfile {
    /// The default profile for brace-scoped languages.
    pub fn c_like() -> Self {
        LanguageProfile {
            profile_id: "c_like".to_string(),
            control_flow_keywords: [
                "if", "else", "for", "while", "do", "switch", "case", "break", "continue",
                "return", "goto",
            ]
            .into_iter()
            .map(str::to_string)
            .collect(),
            scope_open_token: "{".to_string(),
            scope_close_token: "}".to_string(),
            statement_terminator: ";".to_string(),
            comment_prefixes: vec!["//".to_string(), "/*".to_string(), "*".to_string()],
            preprocessor_prefix: Some("#".to_string()),
        }
    }

    /// Looks up a compiled-in profile by id.
    pub fn builtin(profile_id: &str) -> Option<Self> {
        match profile_id {
            "c_like" => Some(Self::c_like()),
            _ => None,
        }
    }
}

/// On-disk shape of one profile in a TOML profiles file. Missing fields
/// fall back to the `c_like` defaults.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSpec {
    control_flow_keywords: Option<BTreeSet<String>>,
    scope_open_token: Option<String>,
    scope_close_token: Option<String>,
    statement_terminator: Option<String>,
    comment_prefixes: Option<Vec<String>>,
    preprocessor_prefix: Option<String>,
}

#[derive(Debug, Deserialize)]
struct ProfileFile {
    #[serde(default)]
    profiles: std::collections::BTreeMap<String, ProfileSpec>,
}

/// Loads language profiles from a TOML file of the form:
///
/// ```toml
/// [profiles.my_lang]
/// control_flow_keywords = ["if", "loop"]
/// scope_open_token = "{"
/// ```
pub fn load_profiles(path: &Path) -> Result<Vec<LanguageProfile>, ProfileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ProfileFile = toml::from_str(&text).map_err(|source| ProfileError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    let defaults = LanguageProfile::c_like();
    let mut out = Vec::new();
    for (id, spec) in file.profiles {
        let profile = LanguageProfile {
            profile_id: id.clone(),
            control_flow_keywords: spec
                .control_flow_keywords
                .unwrap_or_else(|| defaults.control_flow_keywords.clone()),
            scope_open_token: spec
                .scope_open_token
                .unwrap_or_else(|| defaults.scope_open_token.clone()),
            scope_close_token: spec
                .scope_close_token
                .unwrap_or_else(|| defaults.scope_close_token.clone()),
            statement_terminator: spec
                .statement_terminator
                .unwrap_or_else(|| defaults.statement_terminator.clone()),
            comment_prefixes: spec
                .comment_prefixes
                .unwrap_or_else(|| defaults.comment_prefixes.clone()),
            preprocessor_prefix: spec
                .preprocessor_prefix
                .or_else(|| defaults.preprocessor_prefix.clone()),
        };
        if profile.control_flow_keywords.is_empty() {
            return Err(ProfileError::EmptyKeywords(id));
        }
        out.push(profile);
    }
    Ok(out)
}

/// Category labels a line can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineLabel {
    ControlFlow,
    ScopeHeader,
    ScopeBody,
    Simple,
    Ignorable,
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LineLabel::ControlFlow => "control_flow",
            LineLabel::ScopeHeader => "scope_header",
            LineLabel::ScopeBody => "scope_body",
            LineLabel::Simple => "simple",
            LineLabel::Ignorable => "ignorable",
        };
        f.write_str(name)
    }
}

/// Classification result for one line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineClassification {
    /// 1-based line number.
    pub line_no: u32,
    pub labels: BTreeSet<LineLabel>,
    /// Nesting depth *before* this line's own scope tokens take effect,
    /// so a closing brace still reports the depth of the scope it closes.
    pub scope_depth: u32,
}

impl LineClassification {
    pub fn has(&self, label: LineLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn is_ignorable(&self) -> bool {
        self.has(LineLabel::Ignorable)
    }
}

/// True when `keyword` occurs in `line` as a whole word (not embedded in
/// a longer identifier such as `return_code`).
pub(crate) fn contains_word(line: &str, keyword: &str) -> bool {
    let bytes = line.as_bytes();
    let is_word = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    let mut from = 0;
    while let Some(pos) = line[from..].find(keyword) {
        let start = from + pos;
        let end = start + keyword.len();
        let left_ok = start == 0 || !is_word(bytes[start - 1]);
        let right_ok = end == bytes.len() || !is_word(bytes[end]);
        if left_ok && right_ok {
            return true;
        }
        from = start + 1;
    }
    false
}

/// True when the line contains `name(`, i.e. an identifier immediately
/// followed by an opening parenthesis — the lexical shape of a function
/// signature or call.
fn contains_signature(line: &str) -> bool {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'(' && i > 0 {
            let prev = bytes[i - 1];
            if prev.is_ascii_alphabetic() || prev == b'_' || prev.is_ascii_digit() {
                // Walk back to check the run starts like an identifier.
                let mut j = i - 1;
                while j > 0 && (bytes[j - 1].is_ascii_alphanumeric() || bytes[j - 1] == b'_') {
                    j -= 1;
                }
                if bytes[j].is_ascii_alphabetic() || bytes[j] == b'_' {
                    return true;
                }
            }
        }
    }
    false
}

/// Classifies every line of a translated program in a single pass,
/// tracking brace depth as it goes. Classification is total: every line
/// gets at least one label, and it depends only on the text.
pub fn classify_lines(
    translated_text: &[String],
    profile: &LanguageProfile,
) -> Vec<LineClassification> {
    let mut depth: u32 = 0;
    let mut out = Vec::with_capacity(translated_text.len());

    for (idx, raw) in translated_text.iter().enumerate() {
        let line_no = (idx + 1) as u32;
        let stripped = raw.trim();
        let depth_before = depth;

        let ignorable = stripped.is_empty()
            || profile
                .comment_prefixes
                .iter()
                .any(|p| stripped.starts_with(p.as_str()))
            || profile
                .preprocessor_prefix
                .as_deref()
                .map_or(false, |p| stripped.starts_with(p));

        let mut labels = BTreeSet::new();
        if ignorable {
            labels.insert(LineLabel::Ignorable);
        } else {
            let has_keyword = profile
                .control_flow_keywords
                .iter()
                .any(|kw| contains_word(stripped, kw));
            let has_open = stripped.contains(&profile.scope_open_token);
            let has_close = stripped.contains(&profile.scope_close_token);
            let is_header = has_open && (has_keyword || contains_signature(stripped));

            if has_keyword {
                labels.insert(LineLabel::ControlFlow);
            }
            if is_header {
                labels.insert(LineLabel::ScopeHeader);
            }
            if depth_before > 0 && !is_header {
                labels.insert(LineLabel::ScopeBody);
            }
            if !has_keyword
                && !has_open
                && !has_close
                && stripped.ends_with(&profile.statement_terminator)
            {
                labels.insert(LineLabel::Simple);
            }
            if labels.is_empty() {
                // Top-level fragments (a lone brace, a signature whose
                // brace sits on the next line) match no rule; treat them
                // as plain statements so every line stays scored.
                labels.insert(LineLabel::Simple);
            }

            // Apply this line's scope tokens in textual order so mixed
            // lines like "} else {" net out correctly.
            let mut events: Vec<(usize, i32)> = Vec::new();
            for (pos, _) in stripped.match_indices(&profile.scope_open_token) {
                events.push((pos, 1));
            }
            for (pos, _) in stripped.match_indices(&profile.scope_close_token) {
                events.push((pos, -1));
            }
            events.sort_unstable_by_key(|&(pos, _)| pos);
            for (_, delta) in events {
                if delta > 0 {
                    depth += 1;
                } else if depth == 0 {
                    eprintln!("warning: scope depth underflow at line {line_no}; clamping at 0");
                } else {
                    depth -= 1;
                }
            }
        }

        out.push(LineClassification {
            line_no,
            labels,
            scope_depth: depth_before,
        });
    }

    out
}
