//! Bijections between finite-support configurations of the two-sided chain
//! and the naturals / integers.

use std::collections::BTreeSet;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::pairing::{pair, unpair};
use super::Nat;

/// A 0/1 configuration on the sites of the integer lattice that is 1 only on
/// the finite set `support`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct OmegaElement {
    pub support: BTreeSet<i64>,
}

impl OmegaElement {
    pub fn new(sites: impl IntoIterator<Item = i64>) -> Self {
        OmegaElement { support: sites.into_iter().collect() }
    }

    /// Negative sites packed as `x` (site `-1` is bit 0), non-negative as `y`.
    fn halves(&self) -> (Nat, Nat) {
        let mut x = Nat::zero();
        let mut y = Nat::zero();
        for &k in &self.support {
            if k < 0 {
                x.set_bit((-k - 1) as u64, true);
            } else {
                y.set_bit(k as u64, true);
            }
        }
        (x, y)
    }

    fn from_halves(x: &Nat, y: &Nat) -> Self {
        let mut support = BTreeSet::new();
        for b in 0..x.bits() {
            if x.bit(b) {
                support.insert(-(b as i64) - 1);
            }
        }
        for b in 0..y.bits() {
            if y.bit(b) {
                support.insert(b as i64);
            }
        }
        OmegaElement { support }
    }
}

/// `eta(i) = <x, y>`.
///
/// # Panics
/// If the support reaches far enough left that `x` overflows a shift amount.
pub fn omega_to_nat(i: &OmegaElement) -> Nat {
    let (x, y) = i.halves();
    pair(&x, &y)
}

pub fn nat_to_omega(n: &Nat) -> OmegaElement {
    let (x, y) = unpair(n);
    OmegaElement::from_halves(&x, &y)
}

// y when x = 0, otherwise -2^{x-1}(2y+1); a bijection N x N -> Z
fn fold_to_int(x: &Nat, y: &Nat) -> BigInt {
    if x.is_zero() {
        BigInt::from(y.clone())
    } else {
        let x1 = x - 1u32;
        let m = pair(&x1, y) + 1u32;
        BigInt::from_biguint(Sign::Minus, m)
    }
}

fn unfold_from_int(z: &BigInt) -> (Nat, Nat) {
    if !z.is_negative() {
        return (Nat::zero(), z.magnitude().clone());
    }
    let (x1, y) = unpair(&(z.magnitude() - 1u32));
    (x1 + 1u32, y)
}

/// `nu(i)`, the integer code of a configuration.
pub fn omega_to_int(i: &OmegaElement) -> BigInt {
    let (x, y) = i.halves();
    fold_to_int(&x, &y)
}

pub fn int_to_omega(z: &BigInt) -> OmegaElement {
    let (x, y) = unfold_from_int(z);
    OmegaElement::from_halves(&x, &y)
}

/// Pairs two configurations into one: `nu^{-1}` of the integer built from
/// `(eta(i), eta(j))` by the same folding `nu` uses.
///
/// # Panics
/// If `eta(i)` is too large to be used as a shift amount.
pub fn zeta(i: &OmegaElement, j: &OmegaElement) -> OmegaElement {
    let z = fold_to_int(&omega_to_nat(i), &omega_to_nat(j));
    int_to_omega(&z)
}

pub fn zeta_inverse(k: &OmegaElement) -> (OmegaElement, OmegaElement) {
    let (a, b) = unfold_from_int(&omega_to_int(k));
    (nat_to_omega(&a), nat_to_omega(&b))
}

/// Small helper for reports: the integer code as `i64` when it fits.
pub fn omega_to_i64(i: &OmegaElement) -> Option<i64> {
    omega_to_int(i).to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn empty_configuration_is_zero() {
        let e = OmegaElement::default();
        assert_eq!(omega_to_nat(&e), Nat::zero());
        assert_eq!(omega_to_int(&e), BigInt::zero());
    }

    #[test]
    fn site_minus_one_is_odd_exponent() {
        // x = 1, y = 0 -> <1, 0> = 1
        let e = OmegaElement::new([-1]);
        assert_eq!(omega_to_nat(&e), Nat::one());
        assert_eq!(omega_to_int(&e), BigInt::from(-1));
    }

    #[test]
    fn int_codes_cover_a_window() {
        for z in -200i64..=200 {
            let o = int_to_omega(&BigInt::from(z));
            assert_eq!(omega_to_int(&o), BigInt::from(z));
        }
        for n in 0u32..400 {
            let o = nat_to_omega(&Nat::from(n));
            assert_eq!(omega_to_nat(&o), Nat::from(n));
        }
    }
}
