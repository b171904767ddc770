//! Order-0 adaptive arithmetic coder with the Krichevsky-Trofimov estimator.
//!
//! Stream layout: Elias-gamma(alphabet size), Elias-gamma(length + 1), then
//! the arithmetic-coded body (absent for the empty sequence). The KT estimate
//! `(c_s + 1/2) / (t + m/2)` is kept as integer frequencies `2 c_s + 1` over
//! `2 t + m`; counts are halved if the total would exceed the coder's
//! precision, which only happens past 2^29 symbols.

use thiserror::Error;

use crate::codec::BitString;

const TOP: u64 = (1 << 32) - 1;
const HALF: u64 = 1 << 31;
const QUARTER: u64 = 1 << 30;
const MAX_TOTAL: u64 = 1 << 29;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecStreamError {
    #[error("truncated header")]
    Header,
    #[error("alphabet size must be at least 1")]
    Alphabet,
}

fn push_gamma(out: &mut BitString, v: u64) {
    debug_assert!(v >= 1);
    let width = 64 - v.leading_zeros() as usize;
    for _ in 1..width {
        out.push(false);
    }
    out.extend_from(&BitString::from_index(width, v));
}

fn read_gamma(bits: &[bool], pos: &mut usize) -> Option<u64> {
    let mut zeros = 0;
    while !*bits.get(*pos)? {
        zeros += 1;
        *pos += 1;
        if zeros > 63 {
            return None;
        }
    }
    let mut v = 0u64;
    for _ in 0..=zeros {
        v = (v << 1) | *bits.get(*pos)? as u64;
        *pos += 1;
    }
    Some(v)
}

struct Model {
    freq: Vec<u64>,
    total: u64,
}

impl Model {
    fn new(m: usize) -> Self {
        Model { freq: vec![1; m], total: m as u64 }
    }

    fn range(&self, s: usize) -> (u64, u64) {
        let lo: u64 = self.freq[..s].iter().sum();
        (lo, lo + self.freq[s])
    }

    fn update(&mut self, s: usize) {
        self.freq[s] += 2;
        self.total += 2;
        if self.total > MAX_TOTAL {
            for f in &mut self.freq {
                *f = f.div_ceil(2);
            }
            self.total = self.freq.iter().sum();
        }
    }
}

struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitString,
}

impl Encoder {
    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, lo: u64, hi: u64, total: u64) {
        let range = self.high - self.low + 1;
        self.high = self.low + range * hi / total - 1;
        self.low += range * lo / total;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    fn finish(mut self) -> BitString {
        self.pending += 1;
        let bit = self.low >= QUARTER;
        self.emit(bit);
        self.out
    }
}

/// Encodes a sequence over `{0, .., m-1}`.
///
/// # Panics
/// If a symbol is out of range or `m == 0`.
pub fn compress_symbols(xs: &[usize], m: usize) -> BitString {
    assert!(m >= 1, "alphabet size must be at least 1");
    let mut out = BitString::new();
    push_gamma(&mut out, m as u64);
    push_gamma(&mut out, xs.len() as u64 + 1);
    if xs.is_empty() {
        return out;
    }
    let mut enc = Encoder { low: 0, high: TOP, pending: 0, out };
    let mut model = Model::new(m);
    for &s in xs {
        assert!(s < m, "symbol {s} outside alphabet of size {m}");
        let (lo, hi) = model.range(s);
        enc.encode(lo, hi, model.total);
        model.update(s);
    }
    enc.finish()
}

pub fn decompress_symbols(bits: &BitString) -> Result<(Vec<usize>, usize), CodecStreamError> {
    let b = bits.bits();
    let mut pos = 0;
    let m = read_gamma(b, &mut pos).ok_or(CodecStreamError::Header)? as usize;
    let n = read_gamma(b, &mut pos).ok_or(CodecStreamError::Header)? - 1;
    if m == 0 {
        return Err(CodecStreamError::Alphabet);
    }
    let mut next = || {
        let bit = b.get(pos).copied().unwrap_or(false);
        pos += 1;
        bit as u64
    };
    let mut out = Vec::with_capacity(n as usize);
    if n == 0 {
        return Ok((out, m));
    }
    let (mut low, mut high) = (0u64, TOP);
    let mut value = 0u64;
    for _ in 0..32 {
        value = (value << 1) | next();
    }
    let mut model = Model::new(m);
    for _ in 0..n {
        let range = high - low + 1;
        let target = ((value - low + 1) * model.total - 1) / range;
        let mut s = 0;
        let mut acc = 0;
        while acc + model.freq[s] <= target {
            acc += model.freq[s];
            s += 1;
        }
        let (lo, hi) = model.range(s);
        high = low + range * hi / model.total - 1;
        low += range * lo / model.total;
        loop {
            if high < HALF {
            } else if low >= HALF {
                low -= HALF;
                high -= HALF;
                value -= HALF;
            } else if low >= QUARTER && high < HALF + QUARTER {
                low -= QUARTER;
                high -= QUARTER;
                value -= QUARTER;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1;
            value = (value << 1) | next();
        }
        out.push(s);
        model.update(s);
    }
    Ok((out, m))
}

pub fn compress(x: &BitString) -> BitString {
    let xs: Vec<usize> = x.bits().iter().map(|b| *b as usize).collect();
    compress_symbols(&xs, 2)
}

pub fn decompress(bits: &BitString) -> Result<BitString, CodecStreamError> {
    let (xs, _) = decompress_symbols(bits)?;
    Ok(BitString::from_bits(xs.into_iter().map(|s| s == 1).collect()))
}

/// Compressed length in bits; a computable upper-bound proxy for `C(x)`.
pub fn compress_proxy(x: &BitString) -> usize {
    compress(x).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_round_trip() {
        let mut b = BitString::new();
        for v in 1..200 {
            push_gamma(&mut b, v);
        }
        let mut pos = 0;
        for v in 1..200 {
            assert_eq!(read_gamma(b.bits(), &mut pos), Some(v));
        }
    }

    #[test]
    fn empty_is_header_only() {
        let e = compress(&BitString::new());
        // gamma(2) = 010, gamma(1) = 1
        assert_eq!(e.to_string(), "0101");
        assert_eq!(decompress(&e).unwrap(), BitString::new());
    }

    #[test]
    fn zeros_compress_well() {
        let x = BitString::zeros(10_000);
        let c = compress(&x);
        assert!(c.len() <= 200, "{}", c.len());
        assert_eq!(decompress(&c).unwrap(), x);
    }

    #[test]
    fn ternary_round_trip() {
        let xs: Vec<usize> = (0..500).map(|i| (i * i + 3 * i) % 3).collect();
        let c = compress_symbols(&xs, 3);
        assert_eq!(decompress_symbols(&c).unwrap(), (xs, 3));
    }
}
