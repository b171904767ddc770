use serde::Serialize;

use super::source::SourceModel;
use super::ClassicalError;

/// Largest number of words the enumerating routines will visit.
pub const MAX_WORDS: u64 = 1 << 22;

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64, ClassicalError> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(ClassicalError::InvalidSource("negative or non-finite probability".into()));
    }
    let s: f64 = probs.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(ClassicalError::InvalidSource(format!("probabilities sum to {s}")));
    }
    Ok(probs.iter().filter(|p| **p > 0.0).map(|p| -p * p.log2()).sum())
}

/// Probability of `w` as a plain product of the model's factors.
pub fn word_probability(source: &SourceModel, w: &[usize]) -> Result<f64, ClassicalError> {
    let p = source.alphabet();
    if let Some(&s) = w.iter().find(|s| **s >= p) {
        return Err(ClassicalError::Symbol { symbol: s, alphabet: p });
    }
    let Some((&first, rest)) = w.split_first() else {
        return Ok(1.0);
    };
    let mut prob = source.initial()?[first];
    let mut prev = first;
    for &s in rest {
        prob *= source.step_prob(prev, s);
        prev = s;
    }
    Ok(prob)
}

pub(crate) fn check_enumerable(alphabet: usize, n: usize) -> Result<(), ClassicalError> {
    let words = (alphabet as f64).powi(n as i32);
    if words > MAX_WORDS as f64 {
        return Err(ClassicalError::TooLarge { alphabet, n, limit: MAX_WORDS });
    }
    Ok(())
}

/// Visits every word of length `n` in lexicographic order together with its
/// probability.
pub(crate) fn for_each_word(
    source: &SourceModel,
    n: usize,
    mut f: impl FnMut(&[usize], f64),
) -> Result<(), ClassicalError> {
    check_enumerable(source.alphabet(), n)?;
    let init = source.initial()?;
    let p = source.alphabet();
    let mut word = vec![0usize; n];
    let mut probs = vec![0.0f64; n + 1];
    probs[0] = 1.0;
    fn rec(
        source: &SourceModel,
        init: &[f64],
        p: usize,
        k: usize,
        word: &mut Vec<usize>,
        probs: &mut Vec<f64>,
        f: &mut dyn FnMut(&[usize], f64),
    ) {
        if k == word.len() {
            f(word, probs[k]);
            return;
        }
        for s in 0..p {
            let step = if k == 0 { init[s] } else { source.step_prob(word[k - 1], s) };
            word[k] = s;
            probs[k + 1] = probs[k] * step;
            rec(source, init, p, k + 1, word, probs, f);
        }
    }
    rec(source, &init, p, 0, &mut word, &mut probs, &mut f);
    Ok(())
}

/// `H_n = -sum_{|w| = n} nu(w) log2 nu(w)` by enumeration.
pub fn block_entropy(source: &SourceModel, n: usize) -> Result<f64, ClassicalError> {
    let mut h = 0.0;
    for_each_word(source, n, |_, p| {
        if p > 0.0 {
            h -= p * p.log2();
        }
    })?;
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsRow {
    pub n: usize,
    pub block_entropy: f64,
    /// `H_n / n`.
    pub rate: f64,
    /// `H_n - H_{n-1}`, the conditional entropy of the last symbol.
    pub conditional: f64,
}

/// Finite-`n` estimates of the Kolmogorov-Sinai entropy of the shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsRateReport {
    pub source: SourceModel,
    pub rows: Vec<KsRow>,
    /// The analytic entropy rate of the model.
    pub analytic: f64,
    /// `inf_n H_n / n` over the computed rows.
    pub inf_rate: f64,
    /// `H_n - H_{n-1}` at the largest `n`.
    pub conditional_estimate: f64,
}

pub fn ks_rate(source: &SourceModel, n_max: usize) -> Result<KsRateReport, ClassicalError> {
    source.validate()?;
    if n_max == 0 {
        return Err(ClassicalError::InvalidArgument("n_max must be at least 1".into()));
    }
    check_enumerable(source.alphabet(), n_max)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut prev = 0.0;
    for n in 1..=n_max {
        let h = block_entropy(source, n)?;
        rows.push(KsRow { n, block_entropy: h, rate: h / n as f64, conditional: h - prev });
        prev = h;
    }
    let inf_rate = rows.iter().map(|r| r.rate).fold(f64::INFINITY, f64::min);
    let conditional_estimate = rows.last().map_or(f64::NAN, |r| r.conditional);
    Ok(KsRateReport { source: source.clone(), rows, analytic: source.entropy_rate()?, inf_rate, conditional_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_probability_example() {
        let s = SourceModel::bernoulli(vec![0.25, 0.75]).unwrap();
        assert_eq!(word_probability(&s, &[0, 1, 1]).unwrap(), 9.0 / 64.0);
    }

    #[test]
    fn binary_entropy_value() {
        let h = shannon_entropy(&[0.25, 0.75]).unwrap();
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-15);
    }

    #[test]
    fn fair_coin_rate_is_one() {
        let s = SourceModel::bernoulli(vec![0.5, 0.5]).unwrap();
        let r = ks_rate(&s, 10).unwrap();
        assert!(r.rows.iter().all(|row| row.rate == 1.0));
    }

    #[test]
    fn too_many_words() {
        let s = SourceModel::bernoulli(vec![0.5, 0.5]).unwrap();
        assert!(block_entropy(&s, 23).is_err());
    }
}
