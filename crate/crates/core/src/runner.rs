//! Subprocess execution of program pairs: spawning with timeouts,
//! differential verdicts, and per-case coverage collection.
//!
//! Commands are described by templates (see [`RunnerProfile`]); the
//! `{input}` placeholder is replaced with the path of a file holding the
//! test-case payload, which is additionally piped to the child's stdin.
//! Timed-out children are killed together with their whole process
//! group, so wrapper scripts cannot leak grandchildren.

use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::lcov::{parse_lcov, CoverageMap};
use crate::model::{
    oracle_verdict, CodePair, ExclusionReason, ExecutionRecord, RunnerProfile, TestCase, Verdict,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot parse command template {template:?}: {detail}")]
    BadCommand { template: String, detail: String },
    #[error("cannot spawn {command:?}: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o failure while running {command:?}: {source}")]
    Io {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot stage test-case input: {0}")]
    TempIo(#[source] std::io::Error),
    #[error("cannot write execution record: {0}")]
    Sink(#[source] std::io::Error),
}

/// How one child process ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    /// Nonzero exit code or death by signal.
    NonzeroExit,
    Timeout,
}

/// Captured result of one child process.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_status: ExitStatus,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub duration_ms: u64,
}

/// Splits a command template into argv tokens, honoring single and
/// double quotes so substituted paths may contain spaces.
pub fn tokenize_command(template: &str) -> Result<Vec<String>, RunError> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut has_current = false;
    let mut quote: Option<char> = None;

    for ch in template.chars() {
        match quote {
            Some(q) => {
                if ch == q {
                    quote = None;
                } else {
                    current.push(ch);
                }
            }
            None => match ch {
                '\'' | '"' => {
                    quote = Some(ch);
                    has_current = true;
                }
                c if c.is_whitespace() => {
                    if has_current {
                        tokens.push(std::mem::take(&mut current));
                        has_current = false;
                    }
                }
                c => {
                    current.push(c);
                    has_current = true;
                }
            },
        }
    }
    if quote.is_some() {
        return Err(RunError::BadCommand {
            template: template.to_string(),
            detail: "unbalanced quote".to_string(),
        });
    }
    if has_current {
        tokens.push(current);
    }
    if tokens.is_empty() {
        return Err(RunError::BadCommand {
            template: template.to_string(),
            detail: "empty command".to_string(),
        });
    }
    Ok(tokens)
}

fn substitute(tokens: &[String], pairs: &[(&str, &str)]) -> Vec<String> {
    tokens
        .iter()
        .map(|tok| {
            let mut out = tok.clone();
            for (placeholder, value) in pairs {
                out = out.replace(placeholder, value);
            }
            out
        })
        .collect()
}

/// Runs one command to completion or timeout, feeding `payload` on
/// stdin and capturing both output streams.
pub fn execute_command(
    argv: &[String],
    payload: &[u8],
    timeout: Duration,
) -> Result<RunOutcome, RunError> {
    let command_str = argv.join(" ");
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|source| RunError::Spawn {
            command: command_str.clone(),
            source,
        })?;

    let started = Instant::now();

    // Feed stdin from a separate thread; the child may exit without
    // reading, so broken pipes are expected and ignored.
    let mut stdin = child.stdin.take().expect("stdin was piped");
    let payload_owned = payload.to_vec();
    let stdin_writer = std::thread::spawn(move || {
        let _ = stdin.write_all(&payload_owned);
    });

    let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
    let stdout_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stdout_pipe.read_to_end(&mut buf);
        buf
    });
    let mut stderr_pipe = child.stderr.take().expect("stderr was piped");
    let stderr_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stderr_pipe.read_to_end(&mut buf);
        buf
    });

    let mut timed_out = false;
    let exit = loop {
        match child.try_wait().map_err(|source| RunError::Io {
            command: command_str.clone(),
            source,
        })? {
            Some(status) => break status,
            None => {
                if started.elapsed() >= timeout {
                    timed_out = true;
                    kill_process_group(&child);
                    break child.wait().map_err(|source| RunError::Io {
                        command: command_str.clone(),
                        source,
                    })?;
                }
                std::thread::sleep(Duration::from_millis(2));
            }
        }
    };

    let stdout = stdout_reader.join().unwrap_or_default();
    let stderr = stderr_reader.join().unwrap_or_default();
    let _ = stdin_writer.join();

    let elapsed = started.elapsed();
    let exit_status = if timed_out {
        ExitStatus::Timeout
    } else if exit.success() {
        ExitStatus::Ok
    } else {
        ExitStatus::NonzeroExit
    };
    // A timeout never reports a duration below the configured budget.
    let duration = if timed_out {
        elapsed.max(timeout)
    } else {
        elapsed
    };

    Ok(RunOutcome {
        exit_status,
        stdout,
        stderr,
        duration_ms: duration.as_millis() as u64,
    })
}

fn kill_process_group(child: &Child) {
    let pid = child.id() as libc::pid_t;
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
}

/// Result of a coverage run: either a parsed map or a reason it could
/// not be obtained (soft failure — the caller decides how to degrade).
#[derive(Debug)]
pub enum CoverageOutcome {
    Map(CoverageMap),
    Unavailable(String),
}

/// Runs the profile's coverage command on `payload` and parses the LCOV
/// tracefile it writes. Spawn failures are hard errors (the command is
/// configuration); everything else — nonzero exit, timeout, missing or
/// malformed tracefile, absent coverage command — is soft.
pub fn run_coverage(runner: &RunnerProfile, payload: &[u8]) -> Result<CoverageOutcome, RunError> {
    let Some(template) = &runner.coverage_command_template else {
        return Ok(CoverageOutcome::Unavailable(
            "no coverage command configured".to_string(),
        ));
    };
    let dir = tempfile::tempdir().map_err(RunError::TempIo)?;
    let input_path = dir.path().join("input.bin");
    std::fs::write(&input_path, payload).map_err(RunError::TempIo)?;
    let cov_path = dir.path().join("coverage.lcov");

    let tokens = tokenize_command(template)?;
    let argv = substitute(
        &tokens,
        &[
            ("{input}", &input_path.display().to_string()),
            ("{coverage_out}", &cov_path.display().to_string()),
        ],
    );
    let outcome = execute_command(&argv, payload, runner.timeout)?;
    match outcome.exit_status {
        ExitStatus::Ok => {}
        ExitStatus::NonzeroExit => {
            return Ok(CoverageOutcome::Unavailable(format!(
                "coverage command exited nonzero: {}",
                String::from_utf8_lossy(&outcome.stderr).trim()
            )))
        }
        ExitStatus::Timeout => {
            return Ok(CoverageOutcome::Unavailable(
                "coverage command timed out".to_string(),
            ))
        }
    }
    let text = match std::fs::read_to_string(&cov_path) {
        Ok(text) => text,
        Err(err) => {
            return Ok(CoverageOutcome::Unavailable(format!(
                "coverage command wrote no tracefile: {err}"
            )))
        }
    };
    match parse_lcov(&text) {
        Ok(map) => Ok(CoverageOutcome::Map(map)),
        Err(err) => Ok(CoverageOutcome::Unavailable(err.to_string())),
    }
}

fn run_program(
    runner: &RunnerProfile,
    payload: &[u8],
    input_path: &str,
) -> Result<RunOutcome, RunError> {
    let tokens = tokenize_command(&runner.run_command_template)?;
    let argv = substitute(&tokens, &[("{input}", input_path)]);
    execute_command(&argv, payload, runner.timeout)
}

/// Executes one valid test case against both programs, applies the
/// verdict rules, and attaches coverage of the translated program.
///
/// Verdicts: if the source program is untrustworthy the record is
/// excluded (`source_crash` on nonzero exit, `source_timeout` /
/// `both_timeout` on timeouts); a translated-side crash or timeout with
/// a healthy source is a failure; otherwise the output oracle decides.
/// Coverage problems degrade to an empty line set with a warning.
pub fn run_one(pair: &CodePair, case: &TestCase) -> Result<ExecutionRecord, RunError> {
    assert!(case.valid, "run_one requires a valid (filtered) test case");

    let dir = tempfile::tempdir().map_err(RunError::TempIo)?;
    let input_path = dir.path().join("input.bin");
    std::fs::write(&input_path, &case.payload).map_err(RunError::TempIo)?;
    let input_str = input_path.display().to_string();

    let source = run_program(&pair.source_runner, &case.payload, &input_str)?;
    let translated = run_program(&pair.translated_runner, &case.payload, &input_str)?;

    let (verdict, exclusion_reason) = {
        use ExitStatus::*;
        match (source.exit_status, translated.exit_status) {
            (Timeout, Timeout) => (Verdict::Excluded, Some(ExclusionReason::BothTimeout)),
            (Timeout, _) => (Verdict::Excluded, Some(ExclusionReason::SourceTimeout)),
            (NonzeroExit, _) => (Verdict::Excluded, Some(ExclusionReason::SourceCrash)),
            (Ok, NonzeroExit) | (Ok, Timeout) => (Verdict::Fail, None),
            (Ok, Ok) => (
                oracle_verdict(
                    &source.stdout,
                    &translated.stdout,
                    pair.translated_runner.output_normalization,
                ),
                None,
            ),
        }
    };

    let covered_lines = match run_coverage(&pair.translated_runner, &case.payload)? {
        CoverageOutcome::Map(map) => map
            .covered()
            .into_iter()
            .filter(|&line| line as usize <= pair.translated_line_count)
            .collect(),
        CoverageOutcome::Unavailable(reason) => {
            if pair.translated_runner.coverage_command_template.is_some() {
                eprintln!(
                    "warning: coverage unavailable for case {} of pair {}: {reason}",
                    case.case_id, pair.pair_id
                );
            }
            Default::default()
        }
    };

    Ok(ExecutionRecord {
        case_id: case.case_id,
        verdict,
        exclusion_reason,
        source_output: source.stdout,
        translated_output: translated.stdout,
        covered_lines,
        wall_time_ms: source.duration_ms + translated.duration_ms,
    })
}

/// Executes the first `limit` valid cases of the corpus (all of them if
/// `limit` is `None`), in corpus order.
///
/// Each finished record is handed to `sink` (the persistent log) as it
/// completes before the batch moves on. With `workers > 1` the cases
/// fan out to that many threads and records arrive in completion order;
/// with one worker the order matches the corpus and is deterministic.
pub fn run_batch(
    pair: &CodePair,
    corpus: &[TestCase],
    limit: Option<usize>,
    workers: usize,
    mut sink: impl FnMut(&ExecutionRecord) -> std::io::Result<()>,
) -> Result<Vec<ExecutionRecord>, RunError> {
    let selected: Vec<&TestCase> = corpus
        .iter()
        .filter(|c| c.valid)
        .take(limit.unwrap_or(usize::MAX))
        .collect();

    if workers <= 1 || selected.len() <= 1 {
        let mut records = Vec::with_capacity(selected.len());
        for case in selected {
            let record = run_one(pair, case)?;
            sink(&record).map_err(RunError::Sink)?;
            records.push(record);
        }
        return Ok(records);
    }

    let next = std::sync::atomic::AtomicUsize::new(0);
    let (tx, rx) = std::sync::mpsc::channel::<Result<ExecutionRecord, RunError>>();
    let records = std::thread::scope(|scope| -> Result<Vec<ExecutionRecord>, RunError> {
        for _ in 0..workers.min(selected.len()) {
            let tx = tx.clone();
            let next = &next;
            let selected = &selected;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(case) = selected.get(idx) else { break };
                let result = run_one(pair, case);
                let failed = result.is_err();
                if tx.send(result).is_err() || failed {
                    break;
                }
            });
        }
        drop(tx);

        let mut records = Vec::with_capacity(selected.len());
        let mut first_error: Option<RunError> = None;
        for incoming in rx {
            match incoming {
                Ok(record) => {
                    if first_error.is_none() {
                        sink(&record).map_err(RunError::Sink)?;
                        records.push(record);
                    }
                }
                Err(err) => {
                    // Remember the first failure; workers drain and stop.
                    first_error.get_or_insert(err);
                }
            }
        }
        match first_error {
            Some(err) => Err(err),
            None => Ok(records),
        }
    })?;

    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CaseOrigin, OutputNormalization};

    fn sh_profile(script: &str, timeout_ms: u64) -> RunnerProfile {
        // Tests drive /bin/sh directly; {input} lands in $0.
        RunnerProfile::new(
            format!("/bin/sh -c '{script}' {{input}}"),
            None,
            Duration::from_millis(timeout_ms),
            OutputNormalization::TrimTrailingWhitespace,
        )
        .unwrap()
    }

    fn case(payload: &[u8]) -> TestCase {
        TestCase {
            case_id: 0,
            payload: payload.to_vec(),
            origin: CaseOrigin::Seed,
            parent_id: None,
            valid: true,
        }
    }

    fn pair_of(source: RunnerProfile, translated: RunnerProfile, lines: usize) -> CodePair {
        CodePair::new(
            "runner-test",
            source,
            translated,
            (0..lines).map(|i| format!("line{i};")).collect(),
            "c_like",
        )
    }

    #[test]
    fn tokenizer_honors_quotes() {
        let tokens = tokenize_command(r#"python3 "/tmp/my dir/prog.py" {input}"#).unwrap();
        assert_eq!(tokens, vec!["python3", "/tmp/my dir/prog.py", "{input}"]);
        assert!(matches!(
            tokenize_command("prog 'unclosed"),
            Err(RunError::BadCommand { .. })
        ));
        assert!(matches!(
            tokenize_command("   "),
            Err(RunError::BadCommand { .. })
        ));
    }

    #[test]
    fn captures_stdout_stderr_and_exit() {
        let out = execute_command(
            &[
                "/bin/sh".into(),
                "-c".into(),
                "echo hi; echo oops >&2".into(),
            ],
            b"",
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(out.exit_status, ExitStatus::Ok);
        assert_eq!(out.stdout, b"hi\n");
        assert_eq!(out.stderr, b"oops\n");

        let bad = execute_command(
            &["/bin/sh".into(), "-c".into(), "exit 3".into()],
            b"",
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(bad.exit_status, ExitStatus::NonzeroExit);
    }

    #[test]
    fn missing_binary_is_a_spawn_error() {
        let err = execute_command(
            &["/definitely/not/a/binary".into()],
            b"",
            Duration::from_secs(1),
        )
        .unwrap_err();
        assert!(matches!(err, RunError::Spawn { .. }));
    }

    #[test]
    fn timeouts_kill_the_whole_process_group() {
        let started = Instant::now();
        let out = execute_command(
            &["/bin/sh".into(), "-c".into(), "sleep 30".into()],
            b"",
            Duration::from_millis(200),
        )
        .unwrap();
        assert_eq!(out.exit_status, ExitStatus::Timeout);
        assert!(out.duration_ms >= 200);
        assert!(started.elapsed() < Duration::from_secs(5));
    }

    #[test]
    fn payload_reaches_stdin_and_input_file() {
        let profile = sh_profile("cat", 2000);
        let via_stdin = run_one(&pair_of(profile.clone(), profile, 3), &case(b"ping\n")).unwrap();
        assert_eq!(via_stdin.source_output, b"ping\n");

        let file_profile = sh_profile(r#"cat "$0""#, 2000);
        let via_file = run_one(
            &pair_of(file_profile.clone(), file_profile, 3),
            &case(b"pong\n"),
        )
        .unwrap();
        assert_eq!(via_file.source_output, b"pong\n");
    }

    #[test]
    fn verdict_rules_cover_the_exclusion_table() {
        let ok = sh_profile("echo 7", 2000);
        let differs = sh_profile("echo 8", 2000);
        let crashes = sh_profile("exit 1", 2000);
        let hangs = sh_profile("sleep 30", 150);

        let pass = run_one(&pair_of(ok.clone(), ok.clone(), 3), &case(b"")).unwrap();
        assert_eq!(pass.verdict, Verdict::Pass);
        assert_eq!(pass.exclusion_reason, None);

        let fail = run_one(&pair_of(ok.clone(), differs, 3), &case(b"")).unwrap();
        assert_eq!(fail.verdict, Verdict::Fail);

        let translated_crash =
            run_one(&pair_of(ok.clone(), crashes.clone(), 3), &case(b"")).unwrap();
        assert_eq!(translated_crash.verdict, Verdict::Fail);

        let translated_hang = run_one(&pair_of(ok.clone(), hangs.clone(), 3), &case(b"")).unwrap();
        assert_eq!(translated_hang.verdict, Verdict::Fail);

        let source_crash = run_one(&pair_of(crashes.clone(), ok.clone(), 3), &case(b"")).unwrap();
        assert_eq!(source_crash.verdict, Verdict::Excluded);
        assert_eq!(
            source_crash.exclusion_reason,
            Some(ExclusionReason::SourceCrash)
        );

        let source_hang = run_one(&pair_of(hangs.clone(), ok, 3), &case(b"")).unwrap();
        assert_eq!(
            source_hang.exclusion_reason,
            Some(ExclusionReason::SourceTimeout)
        );

        let both_hang = run_one(&pair_of(hangs.clone(), hangs.clone(), 3), &case(b"")).unwrap();
        assert_eq!(
            both_hang.exclusion_reason,
            Some(ExclusionReason::BothTimeout)
        );

        // Source crash wins over translated trouble: no trusted baseline.
        let crash_vs_hang = run_one(&pair_of(crashes, hangs, 3), &case(b"")).unwrap();
        assert_eq!(
            crash_vs_hang.exclusion_reason,
            Some(ExclusionReason::SourceCrash)
        );
    }

    #[test]
    fn coverage_failures_degrade_to_empty() {
        let mut translated = sh_profile("echo 7", 2000);
        translated.coverage_command_template =
            Some("/bin/sh -c 'exit 9' x {input} {coverage_out}".to_string());
        let source = sh_profile("echo 7", 2000);
        let record = run_one(&pair_of(source, translated, 3), &case(b"")).unwrap();
        assert_eq!(record.verdict, Verdict::Pass);
        assert!(record.covered_lines.is_empty());
    }

    #[test]
    fn coverage_tracefile_is_parsed_and_clamped() {
        let mut translated = sh_profile("echo 7", 2000);
        // Writes a tracefile claiming lines 2 and 99; the pair has 3 lines.
        translated.coverage_command_template = Some(
            r#"/bin/sh -c 'printf "SF:x\nDA:2,1\nDA:3,0\nDA:99,5\nend_of_record\n" > "$2"' sh {input} {coverage_out}"#
                .to_string(),
        );
        let source = sh_profile("echo 7", 2000);
        let record = run_one(&pair_of(source, translated, 3), &case(b"")).unwrap();
        assert_eq!(record.covered_lines, [2u32].into_iter().collect());
    }

    #[test]
    fn batch_honors_limit_validity_and_order() {
        let profile = sh_profile(r#"cat "$0""#, 2000);
        let pair = pair_of(profile.clone(), profile, 3);
        let corpus: Vec<TestCase> = (0..6)
            .map(|i| {
                let mut c = case(format!("p{i}").as_bytes());
                c.case_id = i;
                c.valid = i != 1; // case 1 must be skipped
                c
            })
            .collect();

        let mut seen = Vec::new();
        let records = run_batch(&pair, &corpus, Some(3), 1, |r| {
            seen.push(r.case_id);
            Ok(())
        })
        .unwrap();
        // First three *valid* cases: ids 0, 2, 3.
        assert_eq!(seen, vec![0, 2, 3]);
        assert_eq!(records.len(), 3);
        assert_eq!(records[1].source_output, b"p2");
    }

    #[test]
    fn parallel_batch_produces_the_same_record_set() {
        let profile = sh_profile(r#"cat "$0""#, 4000);
        let pair = pair_of(profile.clone(), profile, 3);
        let corpus: Vec<TestCase> = (0..8)
            .map(|i| {
                let mut c = case(format!("x{i}").as_bytes());
                c.case_id = i;
                c
            })
            .collect();

        let sequential = run_batch(&pair, &corpus, None, 1, |_| Ok(())).unwrap();
        let parallel = run_batch(&pair, &corpus, None, 4, |_| Ok(())).unwrap();
        let mut seq_ids: Vec<u64> = sequential.iter().map(|r| r.case_id).collect();
        let mut par_ids: Vec<u64> = parallel.iter().map(|r| r.case_id).collect();
        seq_ids.sort_unstable();
        par_ids.sort_unstable();
        assert_eq!(seq_ids, par_ids);
        for record in &parallel {
            assert_eq!(record.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn spawn_errors_abort_the_batch() {
        let good = sh_profile("echo 1", 2000);
        let broken = RunnerProfile::new(
            "/definitely/not/a/binary {input}",
            None,
            Duration::from_secs(1),
            OutputNormalization::Exact,
        )
        .unwrap();
        let pair = pair_of(good, broken, 3);
        let corpus = vec![case(b"a")];
        assert!(matches!(
            run_batch(&pair, &corpus, None, 1, |_| Ok(())),
            Err(RunError::Spawn { .. })
        ));
    }
}
