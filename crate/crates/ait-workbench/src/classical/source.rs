use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{shannon_entropy, ClassicalError};

const ROW_TOL: f64 = 1e-12;

fn draw<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    row.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

/// A stationary shift source over the alphabet `{0, .., p-1}`.
///
/// JSON form: `{"kind": "bernoulli", "probs": [0.25, 0.75]}` or
/// `{"kind": "markov", "transition": [[0.9, 0.1], [0.1, 0.9]]}` with an
/// optional `"initial"` row (the stationary distribution when omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceModel {
    Bernoulli {
        probs: Vec<f64>,
    },
    Markov {
        transition: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
    },
}

fn check_row(row: &[f64], what: &str) -> Result<(), ClassicalError> {
    if row.is_empty() {
        return Err(ClassicalError::InvalidSource(format!("{what} is empty")));
    }
    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(ClassicalError::InvalidSource(format!("{what} has a negative or non-finite entry")));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > ROW_TOL {
        return Err(ClassicalError::InvalidSource(format!("{what} sums to {s}, not 1")));
    }
    Ok(())
}

impl SourceModel {
    pub fn bernoulli(probs: Vec<f64>) -> Result<Self, ClassicalError> {
        let s = SourceModel::Bernoulli { probs };
        s.validate()?;
        Ok(s)
    }

    /// A Markov chain started in its stationary distribution.
    pub fn markov(transition: Vec<Vec<f64>>) -> Result<Self, ClassicalError> {
        let s = SourceModel::Markov { transition, initial: None };
        s.validate()?;
        Ok(s)
    }

    /// Symmetric binary chain that flips with probability `flip`.
    pub fn binary_flip(flip: f64) -> Result<Self, ClassicalError> {
        Self::markov(vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]])
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        match self {
            SourceModel::Bernoulli { probs } => check_row(probs, "probability vector"),
            SourceModel::Markov { transition, initial } => {
                let p = transition.len();
                for (i, row) in transition.iter().enumerate() {
                    if row.len() != p {
                        return Err(ClassicalError::InvalidSource(format!("transition row {i} has length {}, expected {p}", row.len())));
                    }
                    check_row(row, &format!("transition row {i}"))?;
                }
                if let Some(init) = initial {
                    if init.len() != p {
                        return Err(ClassicalError::InvalidSource("initial distribution has the wrong length".into()));
                    }
                    check_row(init, "initial distribution")?;
                }
                Ok(())
            }
        }
    }

    pub fn alphabet(&self) -> usize {
        match self {
            SourceModel::Bernoulli { probs } => probs.len(),
            SourceModel::Markov { transition, .. } => transition.len(),
        }
    }

    /// Solves `pi P = pi`, `sum pi = 1`.
    pub fn stationary(transition: &[Vec<f64>]) -> Result<Vec<f64>, ClassicalError> {
        let p = transition.len();
        let mut a = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                a[(i, j)] = transition[j][i] - if i == j { 1.0 } else { 0.0 };
            }
        }
        for j in 0..p {
            a[(p - 1, j)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(p);
        b[p - 1] = 1.0;
        let pi = a
            .lu()
            .solve(&b)
            .ok_or_else(|| ClassicalError::InvalidSource("chain has no unique stationary distribution".into()))?;
        Ok(pi.iter().map(|x| x.max(0.0)).collect())
    }

    /// Distribution of the first symbol.
    pub fn initial(&self) -> Result<Vec<f64>, ClassicalError> {
        match self {
            SourceModel::Bernoulli { probs } => Ok(probs.clone()),
            SourceModel::Markov { initial: Some(i), .. } => Ok(i.clone()),
            SourceModel::Markov { transition, initial: None } => Self::stationary(transition),
        }
    }

    /// `P(next = b | previous = a)`; for Bernoulli the previous symbol is
    /// ignored.
    pub fn step_prob(&self, a: usize, b: usize) -> f64 {
        match self {
            SourceModel::Bernoulli { probs } => probs[b],
            SourceModel::Markov { transition, .. } => transition[a][b],
        }
    }

    /// Analytic entropy rate in bits per symbol: `H(p)` for Bernoulli and
    /// `sum_i pi_i H(P_i)` for a stationary Markov chain.
    pub fn entropy_rate(&self) -> Result<f64, ClassicalError> {
        match self {
            SourceModel::Bernoulli { probs } => shannon_entropy(probs),
            SourceModel::Markov { transition, .. } => {
                let pi = Self::stationary(transition)?;
                let mut h = 0.0;
                for (i, row) in transition.iter().enumerate() {
                    h += pi[i] * shannon_entropy(row)?;
                }
                Ok(h)
            }
        }
    }

    /// `log2` of the probability of `w`; `-inf` for impossible words.
    pub fn log2_word_probability(&self, w: &[usize]) -> Result<f64, ClassicalError> {
        let p = self.alphabet();
        if let Some(&s) = w.iter().find(|s| **s >= p) {
            return Err(ClassicalError::Symbol { symbol: s, alphabet: p });
        }
        let Some((&first, rest)) = w.split_first() else {
            return Ok(0.0);
        };
        let init = self.initial()?;
        let mut lp = init[first].log2();
        let mut prev = first;
        for &s in rest {
            lp += self.step_prob(prev, s).log2();
            prev = s;
        }
        Ok(lp)
    }

    /// Draws a word of length `n`.
    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Result<Vec<usize>, ClassicalError> {
        let init = self.initial()?;
        let mut out: Vec<usize> = Vec::with_capacity(n);
        for k in 0..n {
            let s = match (k, self) {
                (0, _) => draw(&init, rng),
                (_, SourceModel::Bernoulli { probs }) => draw(probs, rng),
                (_, SourceModel::Markov { transition, .. }) => draw(&transition[out[k - 1]], rng),
            };
            out.push(s);
        }
        Ok(out)
    }
}
