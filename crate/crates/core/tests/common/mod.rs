//! Shared fixtures for the integration suites: locating the repository,
//! building the benchmark corpus, and compiling small instrumented
//! programs on the fly.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Once;
use std::time::Duration;

use thinter_core::{CodePair, OutputNormalization, RunnerProfile};

/// Repository root (two levels up from the core crate).
pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root resolves")
}

/// Compiles `corpus/pairs/*/translated.cpp` into `corpus/build/` once per
/// test process. The script itself skips up-to-date binaries, so repeated
/// runs are cheap.
pub fn ensure_corpus_built() {
    static BUILD: Once = Once::new();
    BUILD.call_once(|| {
        let root = workspace_root();
        let status = Command::new("python3")
            .arg(root.join("scripts/build_corpus.py"))
            .status()
            .expect("python3 is available");
        assert!(status.success(), "corpus build failed");
    });
}

/// Compiles one C++ file with gcov instrumentation into `build_dir`,
/// producing `build_dir/translated` and `build_dir/translated.gcno` (the
/// layout covrun.py expects). Compile and link are separate steps so the
/// .gcno notes file lands in `build_dir` deterministically.
pub fn compile_instrumented(source: &Path, build_dir: &Path) {
    std::fs::create_dir_all(build_dir).expect("create build dir");
    let obj = build_dir.join("translated.o");
    let binary = build_dir.join("translated");
    for args in [
        vec![
            "--coverage".to_string(),
            "-fwrapv".to_string(),
            "-O0".to_string(),
            "-c".to_string(),
            source.display().to_string(),
            "-o".to_string(),
            obj.display().to_string(),
        ],
        vec![
            "--coverage".to_string(),
            obj.display().to_string(),
            "-o".to_string(),
            binary.display().to_string(),
        ],
    ] {
        let status = Command::new("g++").args(&args).status().expect("g++ runs");
        assert!(status.success(), "g++ {args:?} failed");
    }
}

/// Coverage command template wired through scripts/covrun.py for a binary
/// compiled by [`compile_instrumented`].
pub fn covrun_command(build_dir: &Path, source_name: &str) -> String {
    format!(
        "python3 {} {} {} {{input}} {{coverage_out}}",
        workspace_root().join("scripts/covrun.py").display(),
        build_dir.display(),
        source_name,
    )
}

/// Command template that runs `script` under /bin/sh; the test-case input
/// path lands in `$0`.
pub fn sh_command(script: &str) -> String {
    format!("/bin/sh -c '{script}' {{input}}")
}

/// A program pair whose two sides are shell one-liners, without coverage.
pub fn sh_pair(pair_id: &str, source_script: &str, translated_script: &str) -> CodePair {
    let runner = |script: &str| RunnerProfile {
        run_command_template: sh_command(script),
        coverage_command_template: None,
        timeout: Duration::from_secs(5),
        output_normalization: OutputNormalization::TrimTrailingWhitespace,
    };
    CodePair::new(
        pair_id,
        runner(source_script),
        runner(translated_script),
        vec!["placeholder line".to_string()],
        "c_like",
    )
}
