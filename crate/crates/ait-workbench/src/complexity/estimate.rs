use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::cache::{EnumerationCache, Round};
use super::machine::Mode;
use super::ComplexityError;
use crate::codec::{BitString, Nat};

/// An exact non-negative dyadic rational `num / 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dyadic {
    num: Nat,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic::default()
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u64) -> Self {
        Dyadic { num: Nat::one(), exp: k }
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
        self
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Dyadic { num: a + b, exp: e }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact comparison with 1.
    pub fn at_most_one(&self) -> bool {
        self.num <= (Nat::one() << self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        self.log2().exp2()
    }

    /// `log2` computed from the leading bits, exact enough for reporting.
    pub fn log2(&self) -> f64 {
        if self.num.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.num.bits();
        let shift = bits.saturating_sub(60);
        let top = (&self.num >> shift).to_f64().expect("fits");
        top.log2() + shift as f64 - self.exp as f64
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let e = self.exp.max(other.exp);
        (&self.num << (e - self.exp)).cmp(&(&other.num << (e - other.exp)))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateKind {
    Plain,
    Prefix,
}

/// An upper bound on `C(x)` or `K(x)`: the length of the shortest program
/// found so far whose output is `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityEstimate {
    pub target: BitString,
    pub kind: EstimateKind,
    pub value: Option<usize>,
    pub witness: Option<BitString>,
    pub budget: Round,
}

/// Shortest known program per output, first in canonical order on ties.
#[derive(Debug, Clone)]
pub struct CacheIndex {
    mode: Mode,
    budget: Round,
    best: BTreeMap<BitString, BitString>,
}

impl CacheIndex {
    pub fn new(cache: &EnumerationCache) -> Self {
        let mut best: BTreeMap<BitString, BitString> = BTreeMap::new();
        for r in &cache.records {
            match best.get(&r.output) {
                Some(p) if p <= &r.program => {}
                _ => {
                    best.insert(r.output.clone(), r.program.clone());
                }
            }
        }
        CacheIndex { mode: cache.mode, budget: cache.budget(), best }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn estimate(&self, x: &BitString) -> ComplexityEstimate {
        let witness = self.best.get(x).cloned();
        ComplexityEstimate {
            target: x.clone(),
            kind: match self.mode {
                Mode::Plain => EstimateKind::Plain,
                Mode::Prefix => EstimateKind::Prefix,
            },
            value: witness.as_ref().map(BitString::len),
            witness,
            budget: self.budget,
        }
    }

    /// Outputs with their best program lengths.
    pub fn lengths(&self) -> impl Iterator<Item = (&BitString, usize)> {
        self.best.iter().map(|(x, p)| (x, p.len()))
    }
}

fn require(cache: &EnumerationCache, mode: Mode) -> Result<(), ComplexityError> {
    if cache.mode == mode {
        Ok(())
    } else {
        Err(ComplexityError::ModeMismatch { expected: mode, found: cache.mode })
    }
}

/// Upper bound on plain complexity from a plain-mode cache.
pub fn c_upper(x: &BitString, cache: &EnumerationCache) -> Result<ComplexityEstimate, ComplexityError> {
    require(cache, Mode::Plain)?;
    Ok(CacheIndex::new(cache).estimate(x))
}

/// Upper bound on prefix complexity from a prefix-mode cache.
pub fn k_upper(x: &BitString, cache: &EnumerationCache) -> Result<ComplexityEstimate, ComplexityError> {
    require(cache, Mode::Prefix)?;
    Ok(CacheIndex::new(cache).estimate(x))
}

/// Lower bound on the universal semi-measure: `m(x) >= sum 2^{-|p|}` over
/// cached programs with output `x`.
#[derive(Debug, Clone, Serialize)]
pub struct SemiMeasureEstimate {
    pub mass: BTreeMap<BitString, Dyadic>,
    pub total: Dyadic,
    pub budget: Round,
}

impl SemiMeasureEstimate {
    pub fn mass_of(&self, x: &BitString) -> f64 {
        self.mass.get(x).map_or(0.0, Dyadic::to_f64)
    }

    /// `2^{-(l + 2 ceil(log2 l) + c_lit)}` with `l = |x|`: a literal-program
    /// floor used where the snapshot has no mass.
    pub fn literal_floor(len: usize, c_lit: u32) -> f64 {
        let l = len.max(1) as f64;
        let k = len as f64 + 2.0 * l.log2().ceil() + c_lit as f64;
        (-k).exp2()
    }

    /// Snapshot mass, or the literal floor when the snapshot has none.
    pub fn mass_or_floor(&self, x: &BitString, c_lit: u32) -> f64 {
        let m = self.mass_of(x);
        if m > 0.0 {
            m
        } else {
            Self::literal_floor(x.len(), c_lit)
        }
    }
}

pub fn m_lower(cache: &EnumerationCache) -> Result<SemiMeasureEstimate, ComplexityError> {
    require(cache, Mode::Prefix)?;
    let mut mass: BTreeMap<BitString, Dyadic> = BTreeMap::new();
    let mut total = Dyadic::zero();
    for r in &cache.records {
        let w = Dyadic::pow2_neg(r.program.len() as u64);
        total = total.add(&w);
        let e = mass.entry(r.output.clone()).or_default();
        *e = e.add(&w);
    }
    assert!(total.at_most_one(), "Kraft sum exceeds 1 on a prefix-free domain");
    Ok(SemiMeasureEstimate { mass, total, budget: cache.budget() })
}

/// Number of distinct strings with a known plain program shorter than `c`.
pub fn count_below(cache: &EnumerationCache, c: usize) -> Result<u64, ComplexityError> {
    require(cache, Mode::Plain)?;
    let idx = CacheIndex::new(cache);
    let n = idx.lengths().filter(|(_, l)| *l < c).count() as u64;
    assert!(c >= 64 || n < (1u64 << c), "counting bound violated");
    Ok(n)
}

/// Targets of `before` whose best program length grew in `after`, or (for
/// prefix caches) whose semi-measure mass shrank. Empty when `after` only
/// extends `before`.
pub fn monotonicity_violations(
    before: &EnumerationCache,
    after: &EnumerationCache,
) -> Result<Vec<BitString>, ComplexityError> {
    require(after, before.mode)?;
    let (a, b) = (CacheIndex::new(before), CacheIndex::new(after));
    let longer = a.best.iter().filter(|(x, p)| b.best.get(*x).is_none_or(|q| q.len() > p.len()));
    let mut bad: Vec<BitString> = longer.map(|(x, _)| x.clone()).collect();
    if before.mode == Mode::Prefix {
        let (ma, mb) = (m_lower(before)?, m_lower(after)?);
        for (x, m) in &ma.mass {
            let grown = mb.mass.get(x).is_some_and(|n| n >= m);
            if !grown {
                bad.push(x.clone());
            }
        }
    }
    bad.sort();
    bad.dedup();
    Ok(bad)
}
