//! Run reports.
//!
//! A report is a single line of JSON: the prepared config, the tool version,
//! the experiment's records and the list of assertions. Every float is
//! written with 17 significant digits in exponent form (`8.1127812445913283e-1`)
//! and non-finite values as `null`, so equal runs give equal bytes. Wall
//! time is only included when the config asks for it.
//!
//! Rate tables can be written as CSV instead, with the columns
//! `n,trial,rate,h,backend`.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use super::config::{ExperimentConfig, Format};
use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), passed, detail: detail.into() }
    }
}

/// One line of a rate table. `trial` is empty for deterministic rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub trial: Option<usize>,
    pub rate: f64,
    pub h: f64,
    pub backend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub records: serde_json::Value,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(skip)]
    pub table: Option<Vec<RateRow>>,
}

impl RunReport {
    pub fn new(config: ExperimentConfig, records: serde_json::Value, assertions: Vec<Assertion>) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            records,
            passed: assertions.iter().all(|a| a.passed),
            assertions,
            wall_time_s: None,
            table: None,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}

/// Compact JSON with fixed-width floats.
struct FixedFloats;

fn write_float<W: ?Sized + Write>(w: &mut W, v: f64) -> io::Result<()> {
    if v.is_finite() {
        write!(w, "{v:.16e}")
    } else {
        w.write_all(b"null")
    }
}

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write_float(w, v)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write_float(w, v as f64)
    }
}

/// Serializes any value the way reports are written.
pub fn to_fixed_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

pub fn to_csv(rows: &[RateRow]) -> String {
    let mut s = String::from("n,trial,rate,h,backend\n");
    for r in rows {
        let trial = r.trial.map(|t| t.to_string()).unwrap_or_default();
        s.push_str(&format!("{},{},{:.16e},{:.16e},{}\n", r.n, trial, r.rate, r.h, r.backend));
    }
    s
}

/// The bytes of a report in the config's format.
pub fn render(report: &RunReport, config: &ExperimentConfig) -> Result<String, HarnessError> {
    match config.format {
        Format::Json => Ok(to_fixed_json(report) + "\n"),
        Format::Csv => match &report.table {
            Some(rows) => Ok(to_csv(rows)),
            None => Err(HarnessError::Usage(format!(
                "{} has no rate table; use --format json",
                config.experiment.name()
            ))),
        },
    }
}

/// Writes the report to `config.output`, or to `out` when there is none.
pub fn write_report(report: &RunReport, config: &ExperimentConfig, out: &mut dyn Write) -> Result<(), HarnessError> {
    let text = render(report, config)?;
    match &config.output {
        Some(path) => {
            let io = |err| HarnessError::Io { path: path.display().to_string(), source: err };
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(io)?;
            }
            std::fs::write(path, text).map_err(io)
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|err| HarnessError::Io { path: "<stdout>".into(), source: err }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{Experiment, ExperimentConfig};

    #[test]
    fn floats_have_seventeen_digits() {
        let v = serde_json::json!({"a": 0.1, "b": [1.0, f64::INFINITY], "c": 3});
        assert_eq!(to_fixed_json(&v), r#"{"a":1.0000000000000001e-1,"b":[1.0000000000000000e0,null],"c":3}"#);
        let back: serde_json::Value = serde_json::from_str(&to_fixed_json(&v)).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn csv_columns() {
        let rows = [RateRow { n: 4, trial: None, rate: 0.5, h: 1.0, backend: "exact".into() }];
        assert_eq!(to_csv(&rows), "n,trial,rate,h,backend\n4,,5.0000000000000000e-1,1.0000000000000000e0,exact\n");
        let mut cfg = ExperimentConfig::new(Experiment::KxLandauer);
        cfg.format = Format::Csv;
        let r = RunReport::new(cfg.clone(), serde_json::Value::Null, vec![]);
        assert!(render(&r, &cfg).is_err());
    }
}
