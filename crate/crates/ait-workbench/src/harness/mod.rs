//! The `ait` command line: subcommand families `vm`, `kx`, `cls` and `qc`,
//! experiment configs, the cache directory and reports.
//!
//! Every `kx`, `cls` and `qc` command is turned into an [`ExperimentConfig`],
//! prepared (defaults, validation, absolute paths) and run; the report
//! echoes the prepared config, so feeding that echo back to `ait run`
//! repeats the run. Exit codes: 0 on success, 1 on usage or I/O errors,
//! 2 when a report assertion fails.
//!
//! ```text
//! ait vm run add.prog --inputs 3,4 --budget 100000
//! ait vm number forever.prog
//! ait vm decode 1023
//! ait kx search --mode prefix --max-len 20 --max-steps 100000
//! ait kx estimate --target 0
//! ait kx kraft
//! ait kx landauer --bits 8 --temp 300
//! ait cls entropy --source s.json --n 12
//! ait cls typical --n 12 --eps 0.1
//! ait cls brudno --n 10000 --trials 20 --backend compressor
//! ait qc af --site rho.json --opu matrix-units --nmax 8
//! ait qc typical --site rho.json --n 12 --eps 0.1
//! ait qc gacs --rho state.json --ensemble ens.json
//! ait qc brudno --site rho.json --nrange 4:12 --eps 0.15 --seed 7
//! ait run config.json
//! ```

mod cli;
mod config;
mod report;
mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

pub use cli::Cli;
pub use config::{
    default_source, load_config, parse_config, BackendKind, Experiment, ExperimentConfig, Format, NRange, SourceRef,
    DEFAULT_ROUND,
};
pub use report::{render, to_csv, to_fixed_json, write_report, Assertion, RateRow, RunReport};
pub use run::{cache_file_name, run_experiment, RunContext};

use crate::codec::Nat;
use crate::langvm::{self, Outcome};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "AIT_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".ait-cache";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Vm(#[from] langvm::VmError),
    #[error(transparent)]
    Complexity(#[from] crate::complexity::ComplexityError),
    #[error(transparent)]
    Classical(#[from] crate::classical::ClassicalError),
    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

/// Cache directory from the environment.
pub fn cache_dir_from_env() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|err| HarnessError::Io { path: path.display().to_string(), source: err })
}

fn run_vm(cmd: &cli::VmCmd, format: Option<Format>, out: &mut dyn Write) -> Result<(), HarnessError> {
    let json = format == Some(Format::Json);
    let text = match cmd {
        cli::VmCmd::Run { file, inputs, budget } => {
            let p = langvm::parse_program(&read_text(file)?)?;
            let xs = inputs
                .iter()
                .map(|s| s.trim().parse::<Nat>().map_err(|_| HarnessError::Usage(format!("bad input {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            match (langvm::run(&p, &xs, *budget), json) {
                (Outcome::Halted { output, .. }, false) => format!("{output}\n"),
                (Outcome::Halted { output, steps }, true) => {
                    to_fixed_json(&serde_json::json!({"halted": true, "output": output.to_string(), "steps": steps}))
                        + "\n"
                }
                (Outcome::OutOfBudget, false) => format!("no halt within {budget} steps\n"),
                (Outcome::OutOfBudget, true) => {
                    to_fixed_json(&serde_json::json!({"halted": false, "budget": budget})) + "\n"
                }
            }
        }
        cli::VmCmd::Number { file, instructions } => {
            let p = langvm::parse_program(&read_text(file)?)?;
            let number = langvm::program_number(&p);
            let parts: Vec<String> = p.instructions().iter().map(|i| langvm::instruction_number(i).to_string()).collect();
            if json {
                to_fixed_json(&serde_json::json!({"number": number.to_string(), "instructions": parts})) + "\n"
            } else if *instructions {
                format!("{number}\n[{}]\n", parts.join(", "))
            } else {
                format!("{number}\n")
            }
        }
        cli::VmCmd::Decode { nat } => {
            let n: Nat = nat.trim().parse().map_err(|_| HarnessError::Usage(format!("not a natural number: {nat:?}")))?;
            let p = langvm::try_program_from_number(&n)
                .ok_or_else(|| HarnessError::Usage(format!("{n} has a prime factor too large to index")))?;
            format!("{p}")
        }
    };
    let text = if text.ends_with('\n') || text.is_empty() { text } else { text + "\n" };
    out.write_all(text.as_bytes()).map_err(|err| HarnessError::Io { path: "<stdout>".into(), source: err })
}

fn run_config(cfg: &ExperimentConfig, jobs: usize, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, HarnessError> {
    let ctx = RunContext { jobs, cache_dir: cache_dir_from_env() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Usage(format!("thread pool: {e}")))?;
    let report = pool.install(|| run_experiment(cfg, &ctx))?;
    write_report(&report, cfg, out)?;
    let failures: Vec<_> = report.failures().collect();
    for f in &failures {
        let _ = writeln!(err, "assertion failed: {}: {}", f.name, f.detail);
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_ASSERTION })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, HarnessError> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
    let mut cfg = match &cli.family {
        cli::Family::Vm(cmd) => {
            run_vm(cmd, cli.format, out)?;
            return Ok(EXIT_OK);
        }
        cli::Family::Run { config } => load_config(config)?,
        family => {
            let mut c = cli::experiment_config(family).expect("experiment family");
            if c.experiment.samples() {
                c.seed = Some(cli.seed.unwrap_or(0));
            }
            c.prepare(Path::new("."))?
        }
    };
    // flags given on the command line win over the config file
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(o) = &cli.out {
        cfg.output = Some(std::path::absolute(o).map_err(|e| HarnessError::Io { path: o.display().to_string(), source: e })?);
    }
    if cli.seed.is_some() && cfg.experiment.samples() {
        cfg.seed = cli.seed;
    }
    cfg.wall_time |= cli.wall_time;
    run_config(&cfg, jobs, out, err)
}

/// Parses `argv` (program name first) and runs it, writing the report or
/// program output to `out` and diagnostics to `err`. Returns the exit code.
pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// [`dispatch_to`] on the process's standard streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}
