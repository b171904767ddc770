use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::Nat;

/// A finite binary string. Ordered by length first, then lexicographically,
/// which is the canonical enumeration order used by the dovetailer.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {0:?} at position {1}")]
pub struct BitParseError(pub char, pub usize);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// The `len`-bit string whose bits, read most significant first, spell `v`.
    pub fn from_index(len: usize, v: u64) -> Self {
        BitString((0..len).map(|k| (v >> (len - 1 - k)) & 1 == 1).collect())
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Reads the bits as a big-endian unsigned integer.
    pub fn to_u64(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, b| (acc << 1) | *b as u64))
    }

    /// All strings of length `len` in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "refusing to enumerate 2^{len} strings");
        (0..(1u64 << len)).map(move |v| BitString::from_index(len, v))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = BitParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BitParseError(c, i)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `str(a0 .. an) = 2^{n+1} - 1 + sum a_k 2^k`; a bijection onto the naturals.
pub fn str_encode(x: &BitString) -> Nat {
    let mut v = Nat::zero();
    for (k, b) in x.bits().iter().enumerate() {
        if *b {
            v.set_bit(k as u64, true);
        }
    }
    v + (Nat::one() << x.len()) - 1u32
}

pub fn str_decode(n: &Nat) -> BitString {
    let m = n + 1u32;
    let len = m.bits() - 1;
    let payload = m - (Nat::one() << len);
    BitString((0..len).map(|k| payload.bit(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn str_examples() {
        assert_eq!(str_encode(&b("")), Nat::from(0u32));
        assert_eq!(str_encode(&b("0")), Nat::from(1u32));
        assert_eq!(str_encode(&b("1")), Nat::from(2u32));
        assert_eq!(str_encode(&b("01")), Nat::from(5u32));
    }

    #[test]
    fn str_is_a_bijection_on_short_strings() {
        // every n < 2^11 - 1 is hit exactly once by strings of length <= 10
        let mut seen = vec![false; (1 << 11) - 1];
        for len in 0..=10 {
            for s in BitString::all_of_len(len) {
                let n: usize = str_encode(&s).try_into().unwrap();
                assert!(!seen[n]);
                seen[n] = true;
                assert_eq!(str_decode(&Nat::from(n)), s);
            }
        }
        assert!(seen.iter().all(|x| *x));
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![b("10"), b("1"), b(""), b("01"), b("0")];
        v.sort();
        assert_eq!(v, vec![b(""), b("0"), b("1"), b("01"), b("10")]);
    }
}
