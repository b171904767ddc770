//! Experiment configuration.
//!
//! A config file is one JSON object. `experiment` picks what runs; every
//! other field is a parameter of that experiment and may be omitted to take
//! its default. Unknown fields, and fields the chosen experiment does not
//! use, are rejected.
//!
//! ```json
//! {"experiment": "cls-brudno", "source": {"kind": "bernoulli", "probs": [0.5, 0.5]}, "n": 10000, "seed": 7}
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HarnessError;
use crate::classical::SourceModel;
use crate::codec::BitString;
use crate::complexity::{Mode, Round};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    KxSearch,
    KxEstimate,
    KxKraft,
    KxLandauer,
    ClsEntropy,
    ClsTypical,
    ClsBrudno,
    QcAf,
    QcPurify,
    QcTypical,
    QcGacs,
    QcBrudno,
    QcComposite,
}

impl Experiment {
    /// Experiments that draw random samples and so need a seed.
    pub fn samples(self) -> bool {
        matches!(self, Experiment::ClsBrudno | Experiment::QcBrudno | Experiment::QcComposite)
    }

    /// Fields besides `experiment`, `output`, `format` and `wall_time` that
    /// the experiment reads.
    fn fields(self) -> &'static [&'static str] {
        use Experiment::*;
        match self {
            KxSearch | KxKraft => &["cache", "mode", "schedule"],
            KxEstimate => &["cache", "mode", "schedule", "target", "c_lit"],
            KxLandauer => &["bits", "temp"],
            ClsEntropy => &["source", "n"],
            ClsTypical => &["source", "n", "eps"],
            ClsBrudno => &["source", "n", "trials", "backend", "tol", "c_lit", "cache", "mode", "schedule", "seed"],
            QcAf | QcPurify => &["state", "opu", "n"],
            QcTypical => &["state", "n", "eps", "horizon"],
            QcGacs => &["state", "ensemble"],
            QcBrudno => &[
                "state", "n", "eps", "samples", "c_lit", "horizon", "tol", "cache", "mode", "schedule", "seed",
            ],
            QcComposite => &["state", "n", "eps", "samples", "c_lit", "cache", "mode", "schedule", "seed"],
        }
    }

    pub fn name(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Compressor,
    SearchCache,
}

/// A source model given inline or as the path of a source file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceRef {
    Path(PathBuf),
    Inline(SourceModel),
}

/// Inclusive range of chain or word lengths, written `"4:12"` or `12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub min: usize,
    pub max: usize,
}

impl NRange {
    pub fn single(n: usize) -> Self {
        NRange { min: n, max: n }
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad length {t:?} in range {s:?}"));
        let r = match s.split_once(':') {
            Some((a, b)) => NRange { min: num(a)?, max: num(b)? },
            None => NRange::single(num(s)?),
        };
        if r.min > r.max {
            return Err(format!("empty range {s:?}"));
        }
        Ok(r)
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.max)
        } else {
            write!(f, "{}:{}", self.min, self.max)
        }
    }
}

impl Serialize for NRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.min == self.max {
            s.serialize_u64(self.max as u64)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for NRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Single(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Single(n) => Ok(NRange::single(n)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Classical source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRef>,
    /// Matrix file of the site state (or of the state, for `qc-gacs`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<PathBuf>,
    /// Ensemble file for `qc-gacs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<PathBuf>,
    /// `matrix-units`, `identity`, or the path of an OPU file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opu: Option<String>,
    /// Enumeration cache. Written by `kx-search`, read by the rest; when
    /// absent a cache in the cache directory named after mode and schedule
    /// is used, and computed if missing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<Round>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<NRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Slack of the rate comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_lit: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<BitString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<f64>,
    /// Kelvin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Report path; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Include wall time in the report (which then is no longer
    /// reproducible byte for byte).
    #[serde(default, skip_serializing_if = "is_false")]
    pub wall_time: bool,
}

/// Schedule used when none is given: strings up to 20 bits, `10^5` steps.
pub const DEFAULT_ROUND: Round = Round { max_len: 20, max_steps: 100_000 };

pub fn default_source() -> SourceModel {
    SourceModel::Bernoulli { probs: vec![0.25, 0.75] }
}

fn invalid(field: &str, message: impl fmt::Display) -> HarnessError {
    HarnessError::Config { field: field.to_string(), message: message.to_string() }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            source: None,
            state: None,
            ensemble: None,
            opu: None,
            cache: None,
            mode: None,
            schedule: None,
            n: None,
            eps: None,
            tol: None,
            trials: None,
            samples: None,
            horizon: None,
            c_lit: None,
            backend: None,
            target: None,
            bits: None,
            temp: None,
            seed: None,
            output: None,
            format: Format::Json,
            wall_time: false,
        }
    }

    /// Fills defaults, validates, and makes every path absolute (relative
    /// ones against `base`). Applying it twice changes nothing.
    pub fn prepare(mut self, base: &Path) -> Result<Self, HarnessError> {
        use Experiment::*;
        let e = self.experiment;
        self.check_fields()?;
        let uses_cache = matches!(e, KxSearch | KxKraft | KxEstimate | QcBrudno | QcComposite)
            || (e == ClsBrudno && self.backend == Some(BackendKind::SearchCache));
        if uses_cache {
            let mode = match e {
                ClsBrudno => Mode::Plain,
                QcBrudno | QcComposite => Mode::Prefix,
                _ => self.mode.unwrap_or(Mode::Prefix),
            };
            if self.mode.is_some_and(|m| m != mode) {
                return Err(invalid("mode", format!("{} needs a {mode} cache", e.name())));
            }
            self.mode = Some(mode);
            self.schedule.get_or_insert_with(|| vec![DEFAULT_ROUND]);
        }
        if matches!(e, ClsEntropy | ClsTypical | ClsBrudno) && self.source.is_none() {
            self.source = Some(SourceRef::Inline(default_source()));
        }
        let (n, eps) = match e {
            ClsEntropy => (Some(NRange::single(12)), None),
            ClsTypical => (Some(NRange::single(12)), Some(0.1)),
            ClsBrudno => (Some(NRange::single(10_000)), None),
            QcAf => (Some(NRange { min: 1, max: 6 }), None),
            QcPurify => (Some(NRange { min: 1, max: 3 }), None),
            QcTypical => (Some(NRange::single(12)), Some(0.1)),
            QcBrudno => (Some(NRange { min: 4, max: 12 }), Some(0.15)),
            QcComposite => (Some(NRange::single(3)), Some(0.15)),
            _ => (None, None),
        };
        if self.n.is_none() {
            self.n = n;
        }
        if self.eps.is_none() {
            self.eps = eps;
        }
        match e {
            ClsBrudno => {
                self.trials.get_or_insert(20);
                self.backend.get_or_insert(BackendKind::Compressor);
                self.tol.get_or_insert(0.05);
                if self.backend == Some(BackendKind::SearchCache) {
                    self.c_lit.get_or_insert(8);
                }
            }
            KxEstimate => {
                self.c_lit.get_or_insert(8);
            }
            KxLandauer => {
                self.temp.get_or_insert(300.0);
            }
            QcAf | QcPurify => {
                self.opu.get_or_insert_with(|| "matrix-units".into());
            }
            QcTypical => {
                self.horizon.get_or_insert(256);
            }
            QcBrudno => {
                self.samples.get_or_insert(16);
                self.c_lit.get_or_insert(8);
                self.horizon.get_or_insert(256);
                self.tol.get_or_insert(0.2);
            }
            QcComposite => {
                self.samples.get_or_insert(4);
                self.c_lit.get_or_insert(8);
            }
            _ => {}
        }
        self.validate()?;
        self.resolve(base)
    }

    fn check_fields(&self) -> Result<(), HarnessError> {
        let v = serde_json::to_value(self).map_err(|err| invalid("config", err))?;
        let allowed = self.experiment.fields();
        let fixed = ["experiment", "output", "format", "wall_time"];
        for key in v.as_object().into_iter().flat_map(|o| o.keys()) {
            if !fixed.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                return Err(invalid(key, format!("not used by {}", self.experiment.name())));
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), HarnessError> {
        use Experiment::*;
        let e = self.experiment;
        let need = |present: bool, field: &str| {
            if present {
                Ok(())
            } else {
                Err(invalid(field, format!("required by {}", e.name())))
            }
        };
        if e.samples() {
            need(self.seed.is_some(), "seed")?;
        }
        match e {
            KxEstimate => need(self.target.is_some(), "target")?,
            KxLandauer => need(self.bits.is_some(), "bits")?,
            QcAf | QcPurify | QcTypical | QcBrudno | QcComposite => need(self.state.is_some(), "state")?,
            QcGacs => {
                need(self.state.is_some(), "state")?;
                need(self.ensemble.is_some(), "ensemble")?;
            }
            _ => {}
        }
        if let Some(n) = self.n {
            if n.min == 0 {
                return Err(invalid("n", "lengths start at 1"));
            }
        }
        if let Some(eps) = self.eps {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(invalid("eps", format!("{eps} is not in (0, 1)")));
            }
        }
        for (field, v) in [("tol", self.tol), ("bits", self.bits), ("temp", self.temp)] {
            if v.is_some_and(|x| !(x.is_finite() && x >= 0.0)) {
                return Err(invalid(field, "must be finite and non-negative"));
            }
        }
        if self.trials == Some(0) {
            return Err(invalid("trials", "must be positive"));
        }
        if let Some(s) = &self.schedule {
            if s.is_empty() {
                return Err(invalid("schedule", "needs at least one round"));
            }
            if let Some(r) = s.iter().find(|r| r.max_len > 30) {
                return Err(invalid("schedule", format!("length {} is above the limit of 30", r.max_len)));
            }
        }
        Ok(())
    }

    fn resolve(mut self, base: &Path) -> Result<Self, HarnessError> {
        let abs = |p: &Path| -> Result<PathBuf, HarnessError> {
            let joined = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
            std::path::absolute(&joined).map_err(|err| HarnessError::Io { path: p.display().to_string(), source: err })
        };
        let input = |p: &Path| -> Result<PathBuf, HarnessError> {
            let q = abs(p)?;
            if !q.is_file() {
                return Err(HarnessError::Io {
                    path: q.display().to_string(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                });
            }
            Ok(q)
        };
        if let Some(SourceRef::Path(p)) = &self.source {
            self.source = Some(SourceRef::Path(input(p)?));
        }
        for p in [&mut self.state, &mut self.ensemble] {
            if let Some(q) = p.as_ref() {
                *p = Some(input(q)?);
            }
        }
        if let Some(o) = &self.opu {
            if !matches!(o.as_str(), "matrix-units" | "identity") {
                self.opu = Some(input(Path::new(o))?.display().to_string());
            }
        }
        if let Some(c) = &self.cache {
            // kx-search writes its cache; everything else reads one
            self.cache = Some(if self.experiment == Experiment::KxSearch { abs(c)? } else { input(c)? });
        }
        if let Some(o) = &self.output {
            self.output = Some(abs(o)?);
        }
        Ok(self)
    }
}

/// Parses a config without defaults or path resolution.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, HarnessError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let field = err.path().to_string();
        HarnessError::Config { field, message: err.into_inner().to_string() }
    })
}

/// Reads, parses and prepares a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| HarnessError::Io { path: path.display().to_string(), source: err })?;
    let base = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    parse_config(&text)?.prepare(base)
}
