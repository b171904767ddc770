use rayon::prelude::*;
use serde::Serialize;

use super::gacs::word_bits;
use super::source::SourceModel;
use super::ClassicalError;
use crate::complexity::{compress_symbols, CacheIndex, EnumerationCache, Mode, SemiMeasureEstimate};
use crate::rng;

/// How a sampled word is turned into a complexity estimate.
#[derive(Clone, Copy)]
pub enum Backend<'a> {
    /// Length of the KT arithmetic code.
    Compressor,
    /// Shortest cached plain program, or the literal bound
    /// `l + 2 ceil(log2 l) + c_lit` when the cache has none.
    SearchCache { cache: &'a EnumerationCache, c_lit: u32 },
}

impl Backend<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Compressor => "compressor",
            Backend::SearchCache { .. } => "search-cache",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrudnoRow {
    pub n: usize,
    pub trial: usize,
    pub rate: f64,
    pub h: f64,
    pub backend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrudnoReport {
    pub source: SourceModel,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub backend: String,
    pub h: f64,
    pub rows: Vec<BrudnoRow>,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

/// Samples `trials` words of length `n` and reports `estimate / n` for each.
/// Trial `t` draws from stream `t` of `seed`, so results do not depend on
/// the thread count.
pub fn brudno_experiment(
    source: &SourceModel,
    n: usize,
    trials: usize,
    backend: Backend<'_>,
    seed: u64,
) -> Result<BrudnoReport, ClassicalError> {
    source.validate()?;
    if n == 0 || trials == 0 {
        return Err(ClassicalError::InvalidArgument("n and trials must be positive".into()));
    }
    let index = match backend {
        Backend::SearchCache { cache, .. } => {
            if cache.mode != Mode::Plain {
                return Err(ClassicalError::InvalidArgument("search-cache backend needs a plain-mode cache".into()));
            }
            Some(CacheIndex::new(cache))
        }
        Backend::Compressor => None,
    };
    let h = source.entropy_rate()?;
    let p = source.alphabet();
    let name = backend.name().to_string();
    let rates: Result<Vec<f64>, ClassicalError> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, t as u64);
            let w = source.sample(n, &mut r)?;
            let bits = match backend {
                Backend::Compressor => compress_symbols(&w, p).len(),
                Backend::SearchCache { c_lit, .. } => {
                    let x = word_bits(&w, p);
                    let est = index.as_ref().expect("built above").estimate(&x);
                    est.value.unwrap_or_else(|| {
                        let floor = SemiMeasureEstimate::literal_floor(x.len(), c_lit);
                        (-floor.log2()) as usize
                    })
                }
            };
            Ok(bits as f64 / n as f64)
        })
        .collect();
    let rates = rates?;
    let mean = rates.iter().sum::<f64>() / trials as f64;
    let var = rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / trials as f64;
    let rows = rates
        .iter()
        .enumerate()
        .map(|(t, rate)| BrudnoRow { n, trial: t, rate: *rate, h, backend: name.clone() })
        .collect();
    Ok(BrudnoReport {
        source: source.clone(),
        n,
        trials,
        seed,
        backend: name,
        h,
        rows,
        mean,
        stddev: var.sqrt(),
        min: rates.iter().copied().fold(f64::INFINITY, f64::min),
        max: rates.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
