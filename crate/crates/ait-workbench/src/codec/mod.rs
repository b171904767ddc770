//! Gödel-style numberings: Cantor-like pairing, prime-power lists, binary
//! strings, rationals, elementary matrices and chain configurations.

mod bits;
mod omega;
mod pairing;
mod rational;

pub use num_bigint::BigUint as Nat;

pub use bits::{str_decode, str_encode, BitParseError, BitString};
pub use omega::{
    int_to_omega, nat_to_omega, omega_to_i64, omega_to_int, omega_to_nat, zeta, zeta_inverse, OmegaElement,
};
pub use pairing::{
    decode_list, encode_list, pair, pair_u64, try_decode_list, unpair, PrimeTable, MAX_INDEXED_PRIME,
};
pub use rational::{
    matrix_decode, matrix_encode, rational_decode, rational_encode, ComplexRational, ElementaryMatrix, Rational,
};

/// Serde helper that writes a [`Nat`] as a decimal string.
pub mod nat_dec {
    use super::Nat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let s = String::deserialize(d)?;
        Nat::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom(format!("not a natural number: {s:?}")))
    }
}
