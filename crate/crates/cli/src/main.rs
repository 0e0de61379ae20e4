//! `thinter` — find likely translation errors in auto-translated code.
//!
//! The binary wires the library stages to the filesystem: `fuzz` grows
//! a test corpus, `exec` runs it against both programs into a JSONL
//! log, `localize` turns a log into suspicion reports, `pipeline` does
//! all three, and `bench` evaluates localization quality over a labeled
//! corpus. Exit code 0 means the requested artifact was produced; 2
//! means a usage, config, or data problem.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use thinter_core::classify::classify_lines;
use thinter_core::config::{load_config, AppConfig};
use thinter_core::corpus_eval::{evaluate_corpus, load_corpus_manifest};
use thinter_core::exec_log::{read_log, write_record};
use thinter_core::fuzz::{load_corpus, run_campaign, save_corpus};
use thinter_core::localize::{localize, SuggestionReport};
use thinter_core::model::{CodePair, Verdict};
use thinter_core::pipeline::{prepare_pair, PreparedPair};
use thinter_core::runner::run_batch;

#[derive(Parser)]
#[command(
    name = "thinter",
    version,
    about = "Localizes translation errors in auto-translated programs",
    after_help = "Config file resolution: --config beats the THINTER_CONFIG \
                  environment variable; built-in defaults apply when neither is set."
)]
struct Cli {
    /// TOML config file (falls back to $THINTER_CONFIG, then defaults).
    #[arg(long, global = true, env = "THINTER_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one config key, e.g. --set fuzz.coverage_target=0.8
    /// (repeatable; wins over the config file).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", value_parser = parse_key_val)]
    set: Vec<(String, String)>,

    /// Fuzzer RNG seed (shorthand for --set fuzz.rng_seed=N).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Parallel workers for batch execution.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Execute at most N corpus cases.
    #[arg(long, global = true, value_name = "N")]
    limit: Option<usize>,

    /// Corpus directory (for `bench`: the corpus manifest JSON file).
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,

    /// Execution log file.
    #[arg(long, global = true, value_name = "FILE")]
    log: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test corpus by coverage-guided mutation fuzzing.
    Fuzz {
        /// Pair manifest JSON file.
        #[arg(long, value_name = "MANIFEST")]
        pair: PathBuf,
    },
    /// Execute a corpus against both programs and log the verdicts.
    Exec {
        #[arg(long, value_name = "MANIFEST")]
        pair: PathBuf,
    },
    /// Score an execution log and report suspicious lines.
    Localize {
        #[arg(long, value_name = "MANIFEST")]
        pair: PathBuf,
    },
    /// Fuzz, execute, and localize in one run.
    Pipeline {
        #[arg(long, value_name = "MANIFEST")]
        pair: PathBuf,
    },
    /// Evaluate localization over a labeled corpus (--corpus manifest).
    Bench,
}

fn parse_key_val(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(cli.config.as_deref(), &cli.set)?;
    // Dedicated flags are the most specific layer: they beat both the
    // file and --set.
    if let Some(seed) = cli.seed {
        cfg.fuzz.rng_seed = seed;
    }
    if let Some(workers) = cli.workers {
        cfg.worker_count = workers;
    }
    if let Some(limit) = cli.limit {
        cfg.exec_limit = Some(limit);
    }
    if let Some(log) = cli.log {
        cfg.paths.log_file = log;
    }
    if let Some(corpus) = &cli.corpus {
        cfg.paths.corpus_dir = corpus.clone();
    }
    cfg.validate()?;

    match &cli.command {
        Command::Fuzz { pair } => cmd_fuzz(pair, &cfg),
        Command::Exec { pair } => cmd_exec(pair, &cfg),
        Command::Localize { pair } => cmd_localize(pair, &cfg),
        Command::Pipeline { pair } => cmd_pipeline(pair, &cfg),
        Command::Bench => cmd_bench(cli.corpus.as_deref(), &cfg),
    }
}

fn cmd_fuzz(pair_path: &Path, cfg: &AppConfig) -> Result<()> {
    let prepared = prepare_pair(pair_path, cfg)?;
    let state = run_campaign(&prepared.pair, &prepared.seeds, &cfg.fuzz)?;
    save_corpus(&cfg.paths.corpus_dir, &state)?;
    println!(
        "corpus: {} case(s) -> {}",
        state.queue.len(),
        cfg.paths.corpus_dir.display()
    );
    println!("coverage fraction: {:.3}", state.coverage_fraction());
    println!(
        "rejection ratio: {:.3} ({} of {} mutants)",
        state.rejection_ratio(),
        state.rejected_count,
        state.generated_count
    );
    Ok(())
}

/// Streams records into the JSONL log as they complete, so a partial
/// log survives an interrupted batch.
fn execute_to_log(
    prepared: &PreparedPair,
    corpus: &[thinter_core::TestCase],
    cfg: &AppConfig,
) -> Result<usize> {
    if let Some(parent) = cfg
        .paths
        .log_file
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
    {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create log directory {}", parent.display()))?;
    }
    let file = fs::File::create(&cfg.paths.log_file)
        .with_context(|| format!("cannot create log file {}", cfg.paths.log_file.display()))?;
    let mut writer = BufWriter::new(file);
    let records = run_batch(
        &prepared.pair,
        corpus,
        cfg.exec_limit,
        cfg.worker_count,
        |record| write_record(&mut writer, record),
    )?;
    writer.flush().context("cannot flush log file")?;

    let tally = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
    println!(
        "executed {} case(s): {} pass, {} fail, {} excluded -> {}",
        records.len(),
        tally(Verdict::Pass),
        tally(Verdict::Fail),
        tally(Verdict::Excluded),
        cfg.paths.log_file.display()
    );
    Ok(records.len())
}

fn cmd_exec(pair_path: &Path, cfg: &AppConfig) -> Result<()> {
    let prepared = prepare_pair(pair_path, cfg)?;
    let corpus = load_corpus(&cfg.paths.corpus_dir)?;
    execute_to_log(&prepared, &corpus, cfg)?;
    Ok(())
}

fn write_reports(report: &SuggestionReport, pair: &CodePair, cfg: &AppConfig) -> Result<()> {
    for path in [&cfg.paths.report_json, &cfg.paths.report_text] {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create report directory {}", parent.display()))?;
        }
    }
    let json =
        serde_json::to_string_pretty(&report.to_json(pair)).context("cannot serialize report")?;
    fs::write(&cfg.paths.report_json, json + "\n")
        .with_context(|| format!("cannot write {}", cfg.paths.report_json.display()))?;
    fs::write(&cfg.paths.report_text, report.render_text(pair))
        .with_context(|| format!("cannot write {}", cfg.paths.report_text.display()))?;
    Ok(())
}

fn localize_and_report(
    prepared: &PreparedPair,
    records: &[thinter_core::ExecutionRecord],
    cfg: &AppConfig,
) -> Result<()> {
    let classifications = classify_lines(&prepared.pair.translated_text, &prepared.profile);
    let report = localize(records, &classifications, &prepared.pair, &cfg.scoring)?;
    write_reports(&report, &prepared.pair, cfg)?;
    print!("{}", report.render_text(&prepared.pair));
    println!(
        "reports -> {} and {}",
        cfg.paths.report_json.display(),
        cfg.paths.report_text.display()
    );
    Ok(())
}

fn cmd_localize(pair_path: &Path, cfg: &AppConfig) -> Result<()> {
    let prepared = prepare_pair(pair_path, cfg)?;
    let records = read_log(&cfg.paths.log_file)?;
    localize_and_report(&prepared, &records, cfg)
}

fn cmd_pipeline(pair_path: &Path, cfg: &AppConfig) -> Result<()> {
    let prepared = prepare_pair(pair_path, cfg)?;

    let state = run_campaign(&prepared.pair, &prepared.seeds, &cfg.fuzz)?;
    save_corpus(&cfg.paths.corpus_dir, &state)?;
    println!(
        "corpus: {} case(s), coverage fraction {:.3}, rejection ratio {:.3}",
        state.queue.len(),
        state.coverage_fraction(),
        state.rejection_ratio()
    );

    execute_to_log(&prepared, &state.queue, cfg)?;
    let records = read_log(&cfg.paths.log_file)?;
    localize_and_report(&prepared, &records, cfg)
}

fn cmd_bench(corpus_manifest: Option<&Path>, cfg: &AppConfig) -> Result<()> {
    let Some(manifest_path) = corpus_manifest else {
        bail!("bench needs --corpus <corpus-manifest.json>");
    };
    let manifest = load_corpus_manifest(manifest_path)?;
    let manifest_dir = manifest_path.parent().unwrap_or(Path::new("."));
    let summary = evaluate_corpus(&manifest, manifest_dir, cfg);

    let json =
        serde_json::to_string_pretty(&summary.to_json()).context("cannot serialize summary")?;
    fs::write(&cfg.paths.report_json, json + "\n")
        .with_context(|| format!("cannot write {}", cfg.paths.report_json.display()))?;
    let table = summary.render_table();
    fs::write(&cfg.paths.report_text, &table)
        .with_context(|| format!("cannot write {}", cfg.paths.report_text.display()))?;
    print!("{table}");
    println!(
        "summary -> {} and {}",
        cfg.paths.report_json.display(),
        cfg.paths.report_text.display()
    );
    Ok(())
}
