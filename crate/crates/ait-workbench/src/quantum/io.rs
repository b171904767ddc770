//! Matrix and state files.
//!
//! A matrix file is JSON with the dimension and the row-major entries:
//!
//! ```json
//! {"dim": 2, "entries": ["1/4", 0, 0, "3/4"]}
//! ```
//!
//! An entry is a real scalar or a `[re, im]` pair. A scalar is a JSON number
//! or a string holding an integer, a fraction `p/q`, or a decimal such as
//! `"0.125"`. Strings are read exactly; JSON numbers carry their binary
//! value.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{CMatrix, C64};
use super::QuantumError;
use crate::codec::{ComplexRational, ElementaryMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(Scalar),
    Complex([Scalar; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Entry>,
}

/// Parses `"-3"`, `"2/7"`, `"0.125"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, QuantumError> {
    let t = s.trim();
    let bad = || QuantumError::Format(format!("not a number: {s:?}"));
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let neg = int.starts_with('-');
    let int = int.trim_start_matches(['-', '+']);
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * ten.pow(scale as u32))
    } else {
        Rational::new(num, ten.pow((-scale) as u32))
    })
}

impl Scalar {
    pub fn to_rational(&self) -> Result<Rational, QuantumError> {
        match self {
            Scalar::Number(x) => {
                Rational::from_float(*x).ok_or_else(|| QuantumError::Format(format!("non-finite entry {x}")))
            }
            Scalar::Text(s) => parse_rational(s),
        }
    }

    fn from_rational(r: &Rational) -> Scalar {
        if r.denom().is_one() {
            Scalar::Text(r.numer().to_string())
        } else {
            Scalar::Text(format!("{}/{}", r.numer(), r.denom()))
        }
    }
}

impl MatrixFile {
    pub fn to_elementary(&self) -> Result<ElementaryMatrix, QuantumError> {
        if self.dim == 0 || self.entries.len() != self.dim * self.dim {
            return Err(QuantumError::Format(format!(
                "dimension {} needs {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(match e {
                    Entry::Real(x) => ComplexRational::new(x.to_rational()?, Rational::zero()),
                    Entry::Complex([re, im]) => ComplexRational::new(re.to_rational()?, im.to_rational()?),
                })
            })
            .collect::<Result<_, QuantumError>>()?;
        Ok(ElementaryMatrix { dim: self.dim, entries })
    }

    pub fn to_cmatrix(&self) -> Result<CMatrix, QuantumError> {
        let m = self.to_elementary()?;
        Ok(CMatrix::from_row_slice(m.dim, m.dim, &m.to_f64()))
    }

    pub fn from_elementary(m: &ElementaryMatrix) -> Self {
        let entries = m
            .entries
            .iter()
            .map(|c| {
                if c.im.is_zero() {
                    Entry::Real(Scalar::from_rational(&c.re))
                } else {
                    Entry::Complex([Scalar::from_rational(&c.re), Scalar::from_rational(&c.im)])
                }
            })
            .collect();
        MatrixFile { dim: m.dim, entries }
    }

    /// Entries written as JSON numbers, for matrices with no exact form.
    pub fn from_cmatrix(m: &CMatrix) -> Self {
        let entries = m
            .transpose()
            .iter()
            .map(|z: &C64| {
                if z.im == 0.0 {
                    Entry::Real(Scalar::Number(z.re))
                } else {
                    Entry::Complex([Scalar::Number(z.re), Scalar::Number(z.im)])
                }
            })
            .collect();
        MatrixFile { dim: m.nrows(), entries }
    }
}

/// One extra component of an ensemble file: `scale * matrix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraSpec {
    pub name: String,
    pub matrix: MatrixFile,
    #[serde(default = "one")]
    pub scale: Scalar,
}

fn one() -> Scalar {
    Scalar::Text("1".into())
}

/// An ensemble file: dimension, an optional enumeration cache whose outputs
/// are decoded into components, and extra components.
///
/// ```json
/// {"dim": 4, "cache": "prefix.cache", "extra": [{"name": "a", "matrix": {"dim": 1, "entries": [1]}, "scale": "1/2"}]}
/// ```
///
/// Relative cache paths are resolved against the ensemble file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<std::path::PathBuf>,
    #[serde(default)]
    pub extra: Vec<ExtraSpec>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("1e-3").unwrap(), Rational::new(1.into(), 1000.into()));
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn matrix_file_round_trip() {
        let text = r#"{"dim": 2, "entries": ["1/4", [0, "0.5"], [0, "-1/2"], 0.75]}"#;
        let f: MatrixFile = serde_json::from_str(text).unwrap();
        let m = f.to_elementary().unwrap();
        assert!(m.is_hermitian());
        let back = MatrixFile::from_elementary(&m);
        assert_eq!(back.to_elementary().unwrap(), m);
        let c = f.to_cmatrix().unwrap();
        assert_eq!(c[(0, 1)], C64::new(0.0, 0.5));
    }

    #[test]
    fn wrong_entry_count() {
        let f: MatrixFile = serde_json::from_str(r#"{"dim": 2, "entries": [1, 0, 0]}"#).unwrap();
        assert!(f.to_elementary().is_err());
        assert!(serde_json::from_str::<MatrixFile>(r#"{"dim": 1, "entries": [1], "x": 0}"#).is_err());
    }
}
