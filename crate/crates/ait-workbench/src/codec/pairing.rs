use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::Nat;

/// Largest prime factor `decode_list` will index. Beyond this the sieve would
/// not fit comfortably in memory.
pub const MAX_INDEXED_PRIME: u64 = 1 << 24;

/// `<x, y> = 2^x (2y + 1) - 1`.
///
/// # Panics
/// If `x` does not fit in a `u64` shift amount.
pub fn pair(x: &Nat, y: &Nat) -> Nat {
    let shift = x.to_u64().expect("pairing exponent out of range");
    (((y << 1u32) + 1u32) << shift) - 1u32
}

pub fn pair_u64(x: u64, y: u64) -> Nat {
    pair(&Nat::from(x), &Nat::from(y))
}

/// Inverse of [`pair`]: `x` is the 2-adic valuation of `z + 1`.
pub fn unpair(z: &Nat) -> (Nat, Nat) {
    let w = z + 1u32;
    let x = w.trailing_zeros().unwrap_or(0);
    let odd = w >> x;
    (Nat::from(x), (odd - 1u32) >> 1u32)
}

/// `[a1..an] = prod p_i^{a_i} - 1`.
///
/// # Panics
/// If an exponent does not fit in `u32`.
pub fn encode_list(xs: &[Nat]) -> Nat {
    let mut primes = PrimeTable::new();
    let mut acc = BigUint::one();
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let p = primes.nth(i);
        let e = x.to_u32().expect("list entry too large to use as an exponent");
        acc *= BigUint::from(p).pow(e);
    }
    acc - 1u32
}

/// Inverse of [`encode_list`], with trailing zero exponents dropped.
///
/// Returns `None` when `n + 1` has a prime factor above [`MAX_INDEXED_PRIME`]
/// that cannot be indexed.
pub fn try_decode_list(n: &Nat) -> Option<Vec<Nat>> {
    let mut m = n + 1u32;
    let mut out: Vec<Nat> = Vec::new();
    let mut primes = PrimeTable::new();
    let mut i = 0usize;
    while !m.is_one() {
        let p = primes.nth(i);
        if p > MAX_INDEXED_PRIME {
            return None;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            // what is left is a single prime
            let q = m.to_u64().filter(|q| *q <= MAX_INDEXED_PRIME)?;
            let idx = primes.index_of(q);
            out.resize(idx, Nat::zero());
            out.push(Nat::one());
            return Some(out);
        }
        let mut e = 0u64;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        out.push(Nat::from(e));
        i += 1;
    }
    while out.last().is_some_and(|e| e.is_zero()) {
        out.pop();
    }
    Some(out)
}

/// # Panics
/// See [`try_decode_list`].
pub fn decode_list(n: &Nat) -> Vec<Nat> {
    try_decode_list(n).expect("largest prime factor too large to index")
}

/// Growable table of primes by sieving.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn new() -> Self {
        let mut t = PrimeTable { primes: Vec::new(), limit: 0 };
        t.grow_to(1 << 8);
        t
    }

    fn grow_to(&mut self, limit: u64) {
        if limit <= self.limit {
            return;
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        self.primes = primes;
        self.limit = limit;
    }

    /// Zero-based: `nth(0) == 2`.
    pub fn nth(&mut self, i: usize) -> u64 {
        while self.primes.len() <= i {
            let next = self.limit * 2;
            self.grow_to(next);
        }
        self.primes[i]
    }

    /// Zero-based index of a prime `q`.
    pub fn index_of(&mut self, q: u64) -> usize {
        self.grow_to(q.max(2));
        match self.primes.binary_search(&q) {
            Ok(i) => i,
            Err(_) => panic!("{q} is not prime"),
        }
    }
}

impl Default for PrimeTable {
    fn default() -> Self {
        Self::new()
    }
}
