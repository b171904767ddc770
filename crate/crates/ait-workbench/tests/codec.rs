use ait_workbench::codec::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn nat(v: u64) -> Nat {
    Nat::from(v)
}

#[test]
fn pairing_matches_closed_form() {
    for x in 0..20u64 {
        for y in 0..50u64 {
            let want = (BigUint::from(1u32) << x) * (2 * y + 1) - 1u32;
            assert_eq!(pair(&nat(x), &nat(y)), want);
            assert_eq!(pair_u64(x, y), want);
        }
    }
}

#[test]
fn pairing_enumerates_every_natural_once() {
    let mut seen = vec![false; 4096];
    for z in 0..4096u64 {
        let (x, y) = unpair(&nat(z));
        assert_eq!(pair(&x, &y), nat(z));
        assert!(!seen[z as usize]);
        seen[z as usize] = true;
    }
}

#[test]
fn list_code_is_prime_power_product() {
    // [1, 0, 2] = 2 * 5^2 - 1
    assert_eq!(encode_list(&[nat(1), nat(0), nat(2)]), nat(49));
    assert_eq!(decode_list(&nat(49)), vec![nat(1), nat(0), nat(2)]);
    assert_eq!(encode_list(&[]), nat(0));
    assert!(decode_list(&nat(0)).is_empty());
}

#[test]
fn str_code_counts_shorter_strings_first() {
    // strings of length l take exactly the codes 2^l - 1 .. 2^{l+1} - 2
    for len in 0..10usize {
        let mut codes: Vec<u64> =
            BitString::all_of_len(len).map(|x| str_encode(&x).try_into().unwrap()).collect();
        codes.sort_unstable();
        let first = (1u64 << len) - 1;
        assert_eq!(codes, (first..first + (1 << len)).collect::<Vec<_>>());
    }
    // bit k carries weight 2^k
    assert_eq!(str_encode(&"01".parse().unwrap()), nat(3 + 2));
}

proptest! {
    #[test]
    fn pair_round_trip(x in 0u64..200, y in any::<u64>()) {
        let z = pair(&nat(x), &nat(y));
        prop_assert_eq!(unpair(&z), (nat(x), nat(y)));
    }

    #[test]
    fn list_round_trip(mut xs in prop::collection::vec(0u64..6, 0..8)) {
        let ns: Vec<Nat> = xs.iter().copied().map(nat).collect();
        let code = encode_list(&ns);
        while xs.last() == Some(&0) {
            xs.pop();
        }
        prop_assert_eq!(decode_list(&code), xs.into_iter().map(nat).collect::<Vec<_>>());
    }

    #[test]
    fn str_round_trip(bits in prop::collection::vec(any::<bool>(), 0..64)) {
        let x = BitString::from_bits(bits);
        prop_assert_eq!(str_decode(&str_encode(&x)), x);
    }

    #[test]
    fn rational_round_trip(p in -500i64..500, q in 1i64..500) {
        let r = BigRational::new(p.into(), q.into());
        prop_assert_eq!(rational_decode(&rational_encode(&r)), Some(r));
    }

    #[test]
    fn integers_through_omega(z in -100_000i64..100_000) {
        let w = int_to_omega(&BigInt::from(z));
        prop_assert_eq!(omega_to_int(&w), BigInt::from(z));
        prop_assert_eq!(omega_to_i64(&w), Some(z));
    }

    #[test]
    fn zeta_is_invertible(a in -300i64..300, b in -300i64..300) {
        let (i, j) = (int_to_omega(&BigInt::from(a)), int_to_omega(&BigInt::from(b)));
        let k = zeta(&i, &j);
        prop_assert_eq!(zeta_inverse(&k), (i, j));
    }
}

#[test]
fn small_matrix_round_trip() {
    let m = ElementaryMatrix::from_real(2, &[(1, 2), (0, 1), (0, 1), (1, 2)]);
    let code = matrix_encode(&m);
    assert_eq!(matrix_decode(&code), Some(m));
}
