//! The number codes: pairs, lists, strings and rationals.

use ait_workbench::codec::*;
use num_rational::BigRational;

fn main() {
    let z = pair_u64(3, 5);
    println!("<3, 5> = {z}, unpairs to {:?}", unpair(&z));

    let list = encode_list(&[Nat::from(1u32), Nat::from(0u32), Nat::from(2u32)]);
    println!("[1, 0, 2] = {list}, decodes to {:?}", decode_list(&list));

    for s in ["", "0", "1", "00", "0110"] {
        let x: BitString = s.parse().unwrap();
        println!("str({s:?}) = {}", str_encode(&x));
    }

    let r = BigRational::new((-3).into(), 4.into());
    let code = rational_encode(&r);
    println!("-3/4 -> {code} -> {:?}", rational_decode(&code));
}
