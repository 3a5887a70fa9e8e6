//! Command-line front end: argument parsing, config resolution, dispatch and report files.
//!
//! Every command writes `<command>.json` (resolved config, library version, result)
//! and zero or more CSV files into the output directory. Failures produce an
//! error JSON on stderr and in `error.json`, with a nonzero exit status.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
pub use config::{parse_rep, FileConfig, GroupRef, RunConfig, OUT_DIR_ENV};

/// Exit status for configuration and argument errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for computation errors.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "schottky", version, about = "Resonances and zeta functions of Schottky groups and their congruence covers")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `gamma_m:<m>` or a path to a group JSON file.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Output directory (default: $SCHOTTKY_OUT, then ./schottky-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the group's disk and generator invariants.
    Validate,
    /// List reduced words with matrices and intervals.
    Words(commands::WordsArgs),
    /// Build the τ-resolution partition Z(τ), Y(τ).
    Partition(commands::PartitionArgs),
    /// Distortion and scaling-law statistics.
    Distortion(commands::DistortionArgs),
    /// Evaluate the (twisted, optionally refined) zeta function on an s-grid.
    Zeta(commands::ZetaArgs),
    /// Real zeros of the zeta function in an interval.
    Zeros(commands::ZerosArgs),
    /// Critical exponent by two independent methods.
    Delta(commands::DeltaArgs),
    /// New-eigenvalue counts N_p(σ).
    Np(commands::NpArgs),
    /// Compare the closed-form induced trace with brute-force coset counting.
    TraceCheck(commands::TraceCheckArgs),
    /// Weighted Kronecker character sums over dyadic prime ranges.
    Charsum(commands::CharsumArgs),
    /// Prime-summed Hilbert-Schmidt norms by the direct and decomposed paths.
    HsSum(commands::HsSumArgs),
    /// Jensen-formula bounds for new zeros.
    Jensen(commands::JensenArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Words(_) => "words",
            Command::Partition(_) => "partition",
            Command::Distortion(_) => "distortion",
            Command::Zeta(_) => "zeta",
            Command::Zeros(_) => "zeros",
            Command::Delta(_) => "delta",
            Command::Np(_) => "np",
            Command::TraceCheck(_) => "trace-check",
            Command::Charsum(_) => "charsum",
            Command::HsSum(_) => "hs-sum",
            Command::Jensen(_) => "jensen",
        }
    }
}

/// Output of one command: a JSON result and named CSV files.
pub struct Output {
    pub result: Value,
    pub csv: Vec<(String, Vec<u8>)>,
}

#[derive(Serialize)]
struct Report<'a, P: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig<P>,
    result: Value,
}

struct Failure {
    error: Error,
    command: String,
    params: Value,
    out: Option<PathBuf>,
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return 0;
            }
            let fail = Failure { error: Error::Config(e.to_string()), command: String::new(), params: Value::Null, out: None };
            return report_failure(&fail);
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(fail) => report_failure(&fail),
    }
}

fn report_failure(f: &Failure) -> i32 {
    let doc = json!({
        "error": {
            "kind": f.error.kind(),
            "message": f.error.to_string(),
            "violations": f.error.violations(),
            "command": f.command,
            "params": f.params,
            "version": crate::VERSION,
        }
    });
    let text = serde_json::to_string_pretty(&doc).unwrap_or_default();
    eprintln!("{text}");
    if let Some(dir) = &f.out {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = std::fs::write(dir.join("error.json"), format!("{text}\n"));
        }
    }
    if matches!(f.error, Error::Config(_)) {
        EXIT_CONFIG
    } else {
        EXIT_FAILURE
    }
}

fn execute(cli: &Cli) -> std::result::Result<(), Failure> {
    let name = cli.command.name().to_string();
    let fail = |error: Error, params: Value, out: Option<PathBuf>| Failure { error, command: name.clone(), params, out };

    let file = config::load_file_config(cli.config.as_deref()).map_err(|e| fail(e, Value::Null, None))?;
    let out = config::output_dir_from(cli.out.as_deref(), &file);
    let group = config::group_from(cli.group.as_deref(), &file).map_err(|e| fail(e, Value::Null, Some(out.clone())))?;
    let workers = cli
        .workers
        .or(file.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if workers == 0 {
        return Err(fail(Error::Config("workers must be at least 1".into()), Value::Null, Some(out)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| fail(Error::Config(format!("worker pool: {e}")), Value::Null, Some(out.clone())))?;

    let ctx = commands::Context { file: &file, group, out: out.clone(), workers, command: &name };
    pool.install(|| commands::dispatch(&cli.command, &ctx)).map_err(|(e, params)| fail(e, params, Some(out)))
}

/// Write `<command>.json` and the CSV files of `output` into `cfg.output_dir`.
pub(crate) fn write_outputs<P: Serialize>(cfg: &RunConfig<P>, output: Output) -> Result<()> {
    let dir: &Path = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    let stem = cfg.command.replace('-', "_");
    let report = Report { command: &cfg.command, version: crate::VERSION, config: cfg, result: output.result };
    let text = serde_json::to_string_pretty(&report)?;
    std::fs::write(dir.join(format!("{stem}.json")), format!("{text}\n"))?;
    for (file, bytes) in output.csv {
        std::fs::write(dir.join(file), bytes)?;
    }
    Ok(())
}
