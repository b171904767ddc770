use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{BackendKind, Experiment, ExperimentConfig, Format, NRange, SourceRef};
use crate::codec::BitString;
use crate::complexity::{Mode, Round};

#[derive(Debug, Parser)]
#[command(
    name = "ait",
    version,
    about = "Register-machine complexity, classical entropy rates and quantum Gacs complexity",
    after_help = "Caches without an explicit --cache live in $AIT_CACHE_DIR (default .ait-cache)."
)]
pub struct Cli {
    /// Seed for sampling experiments.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub wall_time: bool,
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Register-machine programs.
    #[command(subcommand)]
    Vm(VmCmd),
    /// Program search and complexity estimates.
    #[command(subcommand)]
    Kx(KxCmd),
    /// Classical sources.
    #[command(subcommand)]
    Cls(ClsCmd),
    /// Quantum spin chains.
    #[command(subcommand)]
    Qc(QcCmd),
    /// Run an experiment config file.
    Run {
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VmCmd {
    /// Run a program and print Y.
    Run {
        file: PathBuf,
        /// Comma-separated values of X1, X2, ...
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Print the Gödel number of a program.
    Number {
        file: PathBuf,
        /// Also print the instruction numbers.
        #[arg(long)]
        instructions: bool,
    },
    /// Print the program with the given Gödel number.
    Decode { nat: String },
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Longest program string.
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Step budget per program.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Nested rounds `len:steps,len:steps,...`, instead of one round.
    #[arg(long, value_delimiter = ',', value_parser = parse_round, conflicts_with_all = ["max_len", "max_steps"])]
    pub schedule: Vec<Round>,
    /// Cache file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum KxCmd {
    /// Dovetail programs and store the cache.
    Search(ScheduleArgs),
    /// Complexity upper bound and semi-measure mass of one string.
    Estimate {
        #[arg(long)]
        target: BitString,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Kraft sum and prefix-freeness of a prefix cache.
    Kraft(ScheduleArgs),
    /// Energy to erase bits at a temperature.
    Landauer {
        #[arg(long)]
        bits: f64,
        /// Kelvin.
        #[arg(long)]
        temp: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClsCmd {
    /// Block entropies and H_n / n.
    Entropy {
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Size and measure of the typical set.
    Typical {
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Complexity rates of sampled words.
    Brudno {
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        backend: Option<BackendKind>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum QcCmd {
    /// AF entropy rates of a product state.
    Af {
        #[arg(long)]
        site: PathBuf,
        /// `matrix-units`, `identity`, or an OPU file.
        #[arg(long)]
        opu: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Spectra of the two marginals of the purified OPU state.
    Purify {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        opu: Option<String>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Typical projection of a product state.
    Typical {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Lower and upper Gacs complexity of a state.
    Gacs {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        ensemble: PathBuf,
    },
    /// Quantum Brudno experiment.
    Brudno {
        #[arg(long)]
        site: PathBuf,
        /// `min:max`.
        #[arg(long)]
        nrange: Option<NRange>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        c_lit: Option<u32>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Product ensemble on two copies of the chain.
    Composite {
        #[arg(long)]
        site: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_round(s: &str) -> Result<Round, String> {
    let (l, t) = s.split_once(':').ok_or_else(|| format!("expected len:steps, got {s:?}"))?;
    let l = l.parse().map_err(|_| format!("bad length in {s:?}"))?;
    let t = t.parse().map_err(|_| format!("bad step count in {s:?}"))?;
    Ok(Round::new(l, t))
}

impl ScheduleArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        cfg.mode = self.mode.or(cfg.mode);
        cfg.cache = self.cache.clone();
        if !self.schedule.is_empty() {
            cfg.schedule = Some(self.schedule.clone());
        } else if self.max_len.is_some() || self.max_steps.is_some() {
            let d = super::config::DEFAULT_ROUND;
            cfg.schedule =
                Some(vec![Round::new(self.max_len.unwrap_or(d.max_len), self.max_steps.unwrap_or(d.max_steps))]);
        }
    }
}

/// The experiment config a `kx`, `cls` or `qc` command stands for.
pub fn experiment_config(family: &Family) -> Option<ExperimentConfig> {
    use Experiment as E;
    let mut cfg;
    match family {
        Family::Vm(_) | Family::Run { .. } => return None,
        Family::Kx(cmd) => match cmd {
            KxCmd::Search(s) => {
                cfg = ExperimentConfig::new(E::KxSearch);
                s.apply(&mut cfg);
            }
            KxCmd::Estimate { target, schedule } => {
                cfg = ExperimentConfig::new(E::KxEstimate);
                cfg.target = Some(target.clone());
                schedule.apply(&mut cfg);
            }
            KxCmd::Kraft(s) => {
                cfg = ExperimentConfig::new(E::KxKraft);
                s.apply(&mut cfg);
            }
            KxCmd::Landauer { bits, temp } => {
                cfg = ExperimentConfig::new(E::KxLandauer);
                cfg.bits = Some(*bits);
                cfg.temp = *temp;
            }
        },
        Family::Cls(cmd) => match cmd {
            ClsCmd::Entropy { source, n } => {
                cfg = ExperimentConfig::new(E::ClsEntropy);
                cfg.source = source.clone().map(SourceRef::Path);
                cfg.n = n.map(NRange::single);
            }
            ClsCmd::Typical { source, n, eps } => {
                cfg = ExperimentConfig::new(E::ClsTypical);
                cfg.source = source.clone().map(SourceRef::Path);
                cfg.n = n.map(NRange::single);
                cfg.eps = *eps;
            }
            ClsCmd::Brudno { source, n, trials, backend, tol, schedule } => {
                cfg = ExperimentConfig::new(E::ClsBrudno);
                cfg.source = source.clone().map(SourceRef::Path);
                cfg.n = n.map(NRange::single);
                cfg.trials = *trials;
                cfg.backend = *backend;
                cfg.tol = *tol;
                if *backend == Some(BackendKind::SearchCache) {
                    schedule.apply(&mut cfg);
                }
            }
        },
        Family::Qc(cmd) => match cmd {
            QcCmd::Af { site, opu, nmax } | QcCmd::Purify { site, opu, nmax } => {
                let kind = if matches!(cmd, QcCmd::Af { .. }) { E::QcAf } else { E::QcPurify };
                cfg = ExperimentConfig::new(kind);
                cfg.state = Some(site.clone());
                cfg.opu = opu.clone();
                cfg.n = nmax.map(|m| NRange { min: 1, max: m });
            }
            QcCmd::Typical { site, n, eps, horizon } => {
                cfg = ExperimentConfig::new(E::QcTypical);
                cfg.state = Some(site.clone());
                cfg.n = n.map(NRange::single);
                cfg.eps = *eps;
                cfg.horizon = *horizon;
            }
            QcCmd::Gacs { rho, ensemble } => {
                cfg = ExperimentConfig::new(E::QcGacs);
                cfg.state = Some(rho.clone());
                cfg.ensemble = Some(ensemble.clone());
            }
            QcCmd::Brudno { site, nrange, eps, samples, c_lit, horizon, tol, cache } => {
                cfg = ExperimentConfig::new(E::QcBrudno);
                cfg.state = Some(site.clone());
                cfg.n = *nrange;
                cfg.eps = *eps;
                cfg.samples = *samples;
                cfg.c_lit = *c_lit;
                cfg.horizon = *horizon;
                cfg.tol = *tol;
                cfg.cache = cache.clone();
            }
            QcCmd::Composite { site, n, eps, samples, cache } => {
                cfg = ExperimentConfig::new(E::QcComposite);
                cfg.state = Some(site.clone());
                cfg.n = n.map(NRange::single);
                cfg.eps = *eps;
                cfg.samples = *samples;
                cfg.cache = cache.clone();
            }
        },
    }
    Some(cfg)
}
