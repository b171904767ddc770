use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::entropy::{check_enumerable, for_each_word};
use super::source::SourceModel;
use super::ClassicalError;

/// Membership in the window `2^{-n(h+eps)} <= p <= 2^{-n(h-eps)}`, tested on
/// `log2 p`. Shared with the quantum typical projection so both sides agree
/// at the boundary.
pub fn in_typical_window(log2_p: f64, n: usize, h: f64, eps: f64) -> bool {
    let n = n as f64;
    log2_p >= -n * (h + eps) && log2_p <= -n * (h - eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypicalMethod {
    Enumerate,
    TypeClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalSetReport {
    pub n: usize,
    pub eps: f64,
    pub h: f64,
    pub method: TypicalMethod,
    /// Exact number of typical words, in decimal.
    pub count: String,
    pub log2_count: f64,
    /// Probability of the typical set.
    pub measure: f64,
    /// `log2((1 - eps) 2^{n(h - eps)})`.
    pub log2_count_lower: f64,
    /// `n (h + eps)`.
    pub log2_count_upper: f64,
    pub measure_at_least_1_minus_eps: bool,
    pub count_within_bounds: bool,
    /// Typical words as base-`p` integers (first symbol most significant);
    /// only filled by enumeration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<u64>>,
}

fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    (x >> shift).to_f64().expect("fits").log2() + shift as f64
}

fn finish(
    n: usize,
    eps: f64,
    h: f64,
    method: TypicalMethod,
    count: BigUint,
    measure: f64,
    members: Option<Vec<u64>>,
) -> TypicalSetReport {
    let log2_count = log2_big(&count);
    let nf = n as f64;
    let lower = (1.0 - eps).log2() + nf * (h - eps);
    let upper = nf * (h + eps);
    TypicalSetReport {
        n,
        eps,
        h,
        method,
        count: count.to_string(),
        log2_count,
        measure,
        log2_count_lower: lower,
        log2_count_upper: upper,
        measure_at_least_1_minus_eps: measure >= 1.0 - eps,
        count_within_bounds: log2_count >= lower && log2_count <= upper,
        members,
    }
}

/// The `eps`-typical set of words of length `n`. Enumerates when there are at
/// most [`MAX_WORDS`](super::MAX_WORDS) words; otherwise Bernoulli sources are summed over type
/// classes and Markov sources are refused.
pub fn typical_set(source: &SourceModel, n: usize, eps: f64) -> Result<TypicalSetReport, ClassicalError> {
    source.validate()?;
    if !(eps > 0.0) {
        return Err(ClassicalError::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    match check_enumerable(source.alphabet(), n) {
        Ok(()) => typical_set_enumerate(source, n, eps),
        Err(e) => match source {
            SourceModel::Bernoulli { .. } => typical_set_by_type(source, n, eps),
            _ => Err(e),
        },
    }
}

pub fn typical_set_enumerate(source: &SourceModel, n: usize, eps: f64) -> Result<TypicalSetReport, ClassicalError> {
    let h = source.entropy_rate()?;
    let p = source.alphabet() as u64;
    let mut members = Vec::new();
    let mut measure = 0.0;
    let mut err = None;
    for_each_word(source, n, |w, _| {
        // window test on the log-probability, summed the same way as the
        // quantum side sums log-eigenvalues
        match source.log2_word_probability(w) {
            Ok(lp) if in_typical_window(lp, n, h, eps) => {
                members.push(w.iter().fold(0u64, |acc, s| acc * p + *s as u64));
                measure += lp.exp2();
            }
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let count = BigUint::from(members.len());
    Ok(finish(n, eps, h, TypicalMethod::Enumerate, count, measure, Some(members)))
}

/// `ln k!` for `k <= n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

fn compositions(n: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(left: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k + 1 == cur.len() {
            cur[k] = left;
            f(cur);
            return;
        }
        for c in 0..=left {
            cur[k] = c;
            rec(left - c, k + 1, cur, f);
        }
    }
    let mut cur = vec![0; parts];
    rec(n, 0, &mut cur, f);
}

pub(crate) fn multinomial(n: usize, ks: &[usize]) -> BigUint {
    let mut left = n;
    let mut acc = BigUint::one();
    for &k in ks {
        acc *= num_integer::binomial(BigUint::from(left), BigUint::from(k));
        left -= k;
    }
    acc
}

/// Bernoulli typical set by type classes: every word with symbol counts
/// `k` has probability `prod p_a^{k_a}`, so membership is decided per class.
pub fn typical_set_by_type(source: &SourceModel, n: usize, eps: f64) -> Result<TypicalSetReport, ClassicalError> {
    let SourceModel::Bernoulli { probs } = source else {
        return Err(ClassicalError::InvalidArgument("type classes need a Bernoulli source".into()));
    };
    let h = source.entropy_rate()?;
    let lf = ln_factorials(n);
    let log2p: Vec<f64> = probs.iter().map(|p| p.log2()).collect();
    let mut count = BigUint::zero();
    let mut measure = 0.0;
    compositions(n, probs.len(), &mut |ks| {
        let lp: f64 = ks.iter().zip(&log2p).map(|(k, l)| if *k == 0 { 0.0 } else { *k as f64 * l }).sum();
        if in_typical_window(lp, n, h, eps) {
            count += multinomial(n, ks);
            let ln_mult = lf[n] - ks.iter().map(|k| lf[*k]).sum::<f64>();
            measure += (ln_mult + lp * std::f64::consts::LN_2).exp();
        }
    });
    Ok(finish(n, eps, h, TypicalMethod::TypeClass, count, measure, None))
}
