use std::sync::OnceLock;

use serde::Serialize;

use super::entropy::{block_entropy, for_each_word};
use super::source::SourceModel;
use super::ClassicalError;
use crate::codec::BitString;
use crate::complexity::SemiMeasureEstimate;

/// `delta(n) = 1 / (n log2^2 n)` for `n >= 2`; summable over `n`.
pub fn delta(n: usize) -> f64 {
    assert!(n >= 2, "delta is defined from n = 2");
    let l = (n as f64).log2();
    1.0 / (n as f64 * l * l)
}

/// `sum_{n >= 2} delta(n)`: a partial sum to 10^6 plus an Euler-Maclaurin
/// tail.
pub fn delta_normalizer() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| {
        const N: usize = 1_000_000;
        let head: f64 = (2..N).map(delta).sum();
        let nf = N as f64;
        let ln2 = std::f64::consts::LN_2;
        let l = nf.log2();
        let integral = ln2 / l;
        // f'(x) = -(l + 2/ln2) / (x^2 l^3)
        let fprime = -(l + 2.0 / ln2) / (nf * nf * l * l * l);
        head + integral + delta(N) / 2.0 - fprime / 12.0
    })
}

/// A semi-measure on words, queried by log-mass.
pub trait WordMeasure {
    fn log2_mass(&self, w: &[usize]) -> f64;
}

/// Words as bit strings (fixed width `ceil(log2 p)` per symbol) looked up in
/// a semi-measure snapshot, with the literal floor where the snapshot has no
/// mass.
pub struct SnapshotMeasure<'a> {
    pub snapshot: &'a SemiMeasureEstimate,
    pub alphabet: usize,
    pub c_lit: u32,
}

pub fn word_bits(w: &[usize], alphabet: usize) -> BitString {
    let width = (usize::BITS - (alphabet.max(2) - 1).leading_zeros()) as usize;
    let mut out = BitString::new();
    for &s in w {
        out.extend_from(&BitString::from_index(width, s as u64));
    }
    out
}

impl WordMeasure for SnapshotMeasure<'_> {
    fn log2_mass(&self, w: &[usize]) -> f64 {
        self.snapshot.mass_or_floor(&word_bits(w, self.alphabet), self.c_lit).log2()
    }
}

/// The source itself scaled into a semi-measure over all lengths:
/// `mu(w) = delta(|w|) nu(w) / sum delta`.
pub struct PlugInMeasure<'a> {
    pub source: &'a SourceModel,
}

impl WordMeasure for PlugInMeasure<'_> {
    fn log2_mass(&self, w: &[usize]) -> f64 {
        let lp = self.source.log2_word_probability(w).unwrap_or(f64::NEG_INFINITY);
        delta(w.len()).log2() - delta_normalizer().log2() + lp
    }
}

/// `G_n = -sum_{|w| = n} nu(w) log2 mu(w)`.
pub fn classical_gacs(source: &SourceModel, n: usize, measure: &dyn WordMeasure) -> Result<f64, ClassicalError> {
    let mut g = 0.0;
    for_each_word(source, n, |w, p| {
        if p > 0.0 {
            g -= p * measure.log2_mass(w);
        }
    })?;
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalGacsRow {
    pub n: usize,
    pub gacs: f64,
    pub block_entropy: f64,
    /// `H_n + log2(1 / delta(n)) + log2(sum delta)`, the value for the
    /// plug-in measure.
    pub plug_in_value: f64,
}

/// Gacs entropy against `measure` next to the block entropy, for `n` in
/// `2..=n_max`.
pub fn classical_gacs_table(
    source: &SourceModel,
    n_max: usize,
    measure: &dyn WordMeasure,
) -> Result<Vec<ClassicalGacsRow>, ClassicalError> {
    (2..=n_max)
        .map(|n| {
            let h = block_entropy(source, n)?;
            Ok(ClassicalGacsRow {
                n,
                gacs: classical_gacs(source, n, measure)?,
                block_entropy: h,
                plug_in_value: h - delta(n).log2() + delta_normalizer().log2(),
            })
        })
        .collect()
}
