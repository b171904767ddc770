//! Positivity of Hermitian matrices read off the characteristic polynomial.
//!
//! A Hermitian matrix has real roots, so when the coefficients of
//! `det(x - H)` alternate in sign every root is positive. Zero eigenvalues
//! show up as a trailing block of zero coefficients, which the non-strict
//! tests accept.

use num_traits::{Signed, Zero};

use super::linalg::{frobenius, is_hermitian, CMatrix, C64};
use crate::codec::{ComplexRational, ElementaryMatrix, Rational};

/// Coefficients of `det(x I - A)`, lowest degree first (`c[n] = 1`), by
/// Faddeev-LeVerrier.
pub fn charpoly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    let mut c = vec![C64::zero(); n + 1];
    c[n] = C64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m;
        for i in 0..n {
            m[(i, i)] += c[n - k + 1];
        }
        let am = a * &m;
        c[n - k] = -am.diagonal().iter().sum::<C64>() / k as f64;
    }
    c
}

/// Exact coefficients over the rationals; the input must be Hermitian so the
/// coefficients are real.
pub fn charpoly_exact(a: &ElementaryMatrix) -> Vec<Rational> {
    let n = a.dim;
    let mul = |x: &[ComplexRational], y: &[ComplexRational]| -> Vec<ComplexRational> {
        let mut out = vec![ComplexRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let xik = &x[i * n + k];
                if xik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = &out[i * n + j] + xik * &y[k * n + j];
                }
            }
        }
        out
    };
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::from_integer(1.into());
    let mut m = vec![ComplexRational::zero(); n * n];
    for k in 1..=n {
        m = mul(&a.entries, &m);
        for i in 0..n {
            m[i * n + i] = &m[i * n + i] + ComplexRational::new(c[n - k + 1].clone(), Rational::zero());
        }
        let am = mul(&a.entries, &m);
        let tr = (0..n).fold(ComplexRational::zero(), |acc, i| acc + &am[i * n + i]);
        c[n - k] = -(tr.re / Rational::from_integer(k.into()));
    }
    c
}

/// The sign pattern test on coefficients `c`, lowest degree first.
fn alternating<T>(c: &[T], sign: impl Fn(&T) -> i8, strict: bool) -> bool {
    let n = c.len() - 1;
    let mut trailing = false;
    for k in 0..=n {
        // coefficient of x^{n-k} should have sign (-1)^k
        let s = sign(&c[n - k]);
        if s == 0 {
            if strict {
                return false;
            }
            trailing = true;
            continue;
        }
        let want = if k % 2 == 0 { 1 } else { -1 };
        if trailing || s != want {
            return false;
        }
    }
    true
}

/// Sign of each coefficient, with `c_{n-k}` counted as zero when it is far
/// below its natural scale `binom(n, k) r^k`, `r` bounding the spectral
/// radius.
fn float_signs(h: &CMatrix) -> Vec<i8> {
    let c = charpoly(h);
    let n = c.len() - 1;
    let r = frobenius(h).max(f64::MIN_POSITIVE);
    let mut binom = 1.0;
    let mut out = vec![0i8; n + 1];
    for k in 0..=n {
        let x = c[n - k].re;
        let scale = binom * r.powi(k as i32);
        out[n - k] = if x.abs() <= 1e-9 * scale { 0 } else if x > 0.0 { 1 } else { -1 };
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    out
}

/// `H >= 0` by the sign pattern of its characteristic polynomial (zero
/// eigenvalues allowed). Non-Hermitian input returns `false`.
pub fn is_positive_charpoly(h: &CMatrix) -> bool {
    if !is_hermitian(h) {
        return false;
    }
    alternating(&float_signs(h), |s| *s, false)
}

/// `H > 0`: every coefficient nonzero with alternating sign.
pub fn is_strictly_positive_charpoly(h: &CMatrix) -> bool {
    if !is_hermitian(h) {
        return false;
    }
    alternating(&float_signs(h), |s| *s, true)
}

fn rational_sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact positivity test for an elementary matrix.
pub fn is_positive_exact(h: &ElementaryMatrix) -> bool {
    h.is_hermitian() && alternating(&charpoly_exact(h), rational_sign, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::real_diag;

    #[test]
    fn identity_and_indefinite() {
        let c = charpoly(&real_diag(&[1.0, 1.0]));
        assert_eq!(c.iter().map(|z| z.re).collect::<Vec<_>>(), vec![1.0, -2.0, 1.0]);
        assert!(is_positive_charpoly(&real_diag(&[1.0, 1.0])));
        assert!(!is_positive_charpoly(&real_diag(&[1.0, -1.0])));
        assert!(is_positive_charpoly(&real_diag(&[2.0, 0.0])));
        assert!(!is_strictly_positive_charpoly(&real_diag(&[2.0, 0.0])));
        assert!(!is_positive_charpoly(&real_diag(&[0.0, -1.0])));
    }

    #[test]
    fn exact_matches_float() {
        let m = ElementaryMatrix::from_real(2, &[(1, 2), (1, 4), (1, 4), (1, 2)]);
        let c = charpoly_exact(&m);
        // x^2 - x + 3/16
        assert_eq!(c[0], Rational::new(3.into(), 16.into()));
        assert_eq!(c[1], Rational::from_integer((-1).into()));
        assert!(is_positive_exact(&m));
        let bad = ElementaryMatrix::from_real(2, &[(1, 4), (1, 2), (1, 2), (1, 4)]);
        assert!(!is_positive_exact(&bad));
        let singular = ElementaryMatrix::from_real(2, &[(1, 2), (1, 2), (1, 2), (1, 2)]);
        assert!(is_positive_exact(&singular));
    }
}
