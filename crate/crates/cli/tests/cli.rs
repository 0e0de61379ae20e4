//! End-to-end tests of the `thinter` binary: exit codes, artifact
//! layout, flag and environment handling. Fixtures are /bin/sh
//! one-liners so the tests run anywhere without a compiler.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_thinter");

/// A pair whose translation misbehaves whenever the input contains a 7;
/// the fake coverage script marks line 2 covered exactly in that case.
fn write_fixture_pair(dir: &Path) -> PathBuf {
    fs::write(
        dir.join("source.sh"),
        "#!/bin/sh\ncat \"$1\" >/dev/null\necho ok\n",
    )
    .unwrap();
    fs::write(
        dir.join("translated.sh"),
        "#!/bin/sh\nif grep -q 7 \"$1\"; then echo bad; else echo ok; fi\n",
    )
    .unwrap();
    fs::write(
        dir.join("cov.sh"),
        concat!(
            "#!/bin/sh\n",
            "printf 'SF:translated.cpp\\nDA:1,1\\n' > \"$2\"\n",
            "if grep -q 7 \"$1\"; then printf 'DA:2,1\\n' >> \"$2\"; ",
            "else printf 'DA:2,0\\n' >> \"$2\"; fi\n",
            "printf 'end_of_record\\n' >> \"$2\"\n",
        ),
    )
    .unwrap();
    fs::write(dir.join("translated.cpp"), "int x = 1;\nint y = 2;\n").unwrap();
    let seeds = dir.join("seeds");
    fs::create_dir_all(&seeds).unwrap();
    fs::write(seeds.join("a.txt"), b"1 2 3").unwrap();
    fs::write(seeds.join("b.txt"), b"9 7 8").unwrap();

    let manifest = serde_json::json!({
        "pair_id": "fixture",
        "source_cmd": "/bin/sh {manifest_dir}/source.sh {input}",
        "translated_cmd": "/bin/sh {manifest_dir}/translated.sh {input}",
        "coverage_cmd": "/bin/sh {manifest_dir}/cov.sh {input} {coverage_out}",
        "translated_file": "translated.cpp",
        "seeds_dir": "seeds",
        "timeout_s": 4.0
    });
    let path = dir.join("pair.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

/// Runs the binary in `cwd` with a small fuzz budget prepended, so no
/// test burns the default 60-second campaign.
fn run_in(cwd: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args([
            "--set",
            "fuzz.time_budget_s=3",
            "--set",
            "fuzz.max_cases=60",
            "--seed",
            "3",
        ])
        .args(args)
        .current_dir(cwd)
        .env_remove("THINTER_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn pipeline_produces_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());

    let out = run_in(
        dir.path(),
        &["pipeline", "--pair", manifest.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    assert!(dir.path().join("corpus_out/corpus.json").is_file());
    assert!(dir.path().join("exec_log.jsonl").is_file());
    assert!(dir.path().join("report.json").is_file());
    assert!(dir.path().join("report.txt").is_file());

    // The planted divergence is on line 2 and must be the thing reported.
    let text = stdout_of(&out);
    assert!(text.contains("line"), "report missing from output: {text}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let flagged = report["flagged"].as_array().expect("flagged array");
    assert!(
        flagged.iter().any(|f| f["line"] == 2),
        "line 2 not flagged: {report}"
    );
}

#[test]
fn exec_respects_limit() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());
    let pair = manifest.to_str().unwrap();

    let out = run_in(dir.path(), &["fuzz", "--pair", pair]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let out = run_in(dir.path(), &["exec", "--pair", pair, "--limit", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let log = fs::read_to_string(dir.path().join("exec_log.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1, "limit ignored: {log}");
}

#[test]
fn rejected_seeds_fail_with_usage_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());
    // Overwrite both seeds with bytes outside the character whitelist.
    fs::write(dir.path().join("seeds/a.txt"), [0x01u8, 0x02]).unwrap();
    fs::write(dir.path().join("seeds/b.txt"), [0xffu8]).unwrap();

    let out = run_in(dir.path(), &["fuzz", "--pair", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(!stderr_of(&out).is_empty(), "error goes to stderr");
}

#[test]
fn bad_override_fails_with_usage_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());

    let out = Command::new(BIN)
        .args([
            "pipeline",
            "--pair",
            manifest.to_str().unwrap(),
            "--set",
            "no_such_section.key=1",
        ])
        .current_dir(dir.path())
        .env_remove("THINTER_CONFIG")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
}

#[test]
fn override_changes_behavior() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());

    let out = run_in(
        dir.path(),
        &[
            "pipeline",
            "--pair",
            manifest.to_str().unwrap(),
            "--set",
            "paths.report_text=custom_report.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("custom_report.txt").is_file());
    assert!(!dir.path().join("report.txt").exists());
}

#[test]
fn config_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());
    fs::write(
        dir.path().join("thinter.toml"),
        "[paths]\nreport_json = \"from_env.json\"\n\n[fuzz]\ntime_budget_s = 3.0\nmax_cases = 60\n",
    )
    .unwrap();

    let out = Command::new(BIN)
        .args(["pipeline", "--pair", manifest.to_str().unwrap()])
        .current_dir(dir.path())
        .env("THINTER_CONFIG", dir.path().join("thinter.toml"))
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("from_env.json").is_file());
}

#[test]
fn missing_pair_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["pipeline"])
        .current_dir(dir.path())
        .env_remove("THINTER_CONFIG")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
}

#[test]
fn clean_translation_reports_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());
    // Make the translation behave: identical output on every input.
    fs::write(
        dir.path().join("translated.sh"),
        "#!/bin/sh\ncat \"$1\" >/dev/null\necho ok\n",
    )
    .unwrap();

    let out = run_in(
        dir.path(),
        &["pipeline", "--pair", manifest.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.contains("nothing stands out"),
        "expected an all-clear report, got: {text}"
    );
}

#[test]
fn bench_requires_corpus_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["bench"])
        .current_dir(dir.path())
        .env_remove("THINTER_CONFIG")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(
        stderr_of(&out).contains("--corpus"),
        "error should name the missing flag: {}",
        stderr_of(&out)
    );
}

#[test]
fn localize_runs_from_existing_log() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_fixture_pair(dir.path());
    let pair = manifest.to_str().unwrap();

    let out = run_in(dir.path(), &["fuzz", "--pair", pair]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let out = run_in(dir.path(), &["exec", "--pair", pair]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let out = run_in(dir.path(), &["localize", "--pair", pair]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("report.json").is_file());
    assert!(dir.path().join("report.txt").is_file());
}
