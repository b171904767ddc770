use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::pairing::{encode_list, pair, try_decode_list, unpair};
use super::Nat;

pub type Rational = BigRational;
pub type ComplexRational = Complex<BigRational>;

/// `<eps, <p, q>>` with `eps` the sign bit; zero maps to `(0, 0, 0)`.
pub fn rational_encode(r: &Rational) -> Nat {
    if r.is_zero() {
        return Nat::zero();
    }
    let eps = if r.is_negative() { Nat::one() } else { Nat::zero() };
    let p = r.numer().abs().to_biguint().expect("abs is non-negative");
    let q = r.denom().to_biguint().expect("denominator is positive");
    pair(&eps, &pair(&p, &q))
}

/// Returns `None` for codes that are not in the image of [`rational_encode`]:
/// a sign bit above 1, a zero numerator or denominator, or a reducible pair.
pub fn rational_decode(n: &Nat) -> Option<Rational> {
    let (eps, w) = unpair(n);
    let (p, q) = unpair(&w);
    if eps.is_zero() && p.is_zero() && q.is_zero() {
        return Some(Rational::zero());
    }
    if eps > Nat::one() || p.is_zero() || q.is_zero() || !p.gcd(&q).is_one() {
        return None;
    }
    let sign = if eps.is_one() { Sign::Minus } else { Sign::Plus };
    Some(Rational::new_raw(BigInt::from_biguint(sign, p), BigInt::from(q)))
}

/// A square matrix with complex rational entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryMatrix {
    pub dim: usize,
    pub entries: Vec<ComplexRational>,
}

impl ElementaryMatrix {
    pub fn zeros(dim: usize) -> Self {
        ElementaryMatrix { dim, entries: vec![ComplexRational::zero(); dim * dim] }
    }

    pub fn from_real(dim: usize, rows: &[(i64, i64)]) -> Self {
        assert_eq!(rows.len(), dim * dim);
        let entries = rows
            .iter()
            .map(|(p, q)| ComplexRational::new(Rational::new((*p).into(), (*q).into()), Rational::zero()))
            .collect();
        ElementaryMatrix { dim, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexRational {
        &self.entries[i * self.dim + j]
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    pub fn trace(&self) -> ComplexRational {
        (0..self.dim).fold(ComplexRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn to_f64(&self) -> Vec<num_complex::Complex64> {
        self.entries
            .iter()
            .map(|c| num_complex::Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

/// `[dim, re00, im00, re01, im01, ...]` as a prime-power list.
pub fn matrix_encode(m: &ElementaryMatrix) -> Nat {
    let mut xs = Vec::with_capacity(1 + 2 * m.entries.len());
    xs.push(Nat::from(m.dim));
    for c in &m.entries {
        xs.push(rational_encode(&c.re));
        xs.push(rational_encode(&c.im));
    }
    encode_list(&xs)
}

/// Entries dropped as trailing zeros by the list code are restored as zero.
/// Returns `None` for dimension 0, too many entries, or an undecodable entry.
pub fn matrix_decode(n: &Nat) -> Option<ElementaryMatrix> {
    let xs = try_decode_list(n)?;
    let dim = xs.first()?.to_usize()?;
    if dim == 0 || dim > 1 << 12 {
        return None;
    }
    let want = 2 * dim * dim;
    if xs.len() - 1 > want {
        return None;
    }
    let mut vals = Vec::with_capacity(want);
    for k in 0..want {
        match xs.get(k + 1) {
            Some(c) => vals.push(rational_decode(c)?),
            None => vals.push(Rational::zero()),
        }
    }
    let entries = vals.chunks(2).map(|c| ComplexRational::new(c[0].clone(), c[1].clone())).collect();
    Some(ElementaryMatrix { dim, entries })
}
