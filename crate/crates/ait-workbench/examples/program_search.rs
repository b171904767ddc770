//! Dovetail the universal machine and read complexity bounds off the cache.

use ait_workbench::codec::BitString;
use ait_workbench::complexity::*;

fn main() {
    let machine = UniversalMachine::new(Mode::Prefix);
    let cache = dovetail(&machine, &[Round::new(16, 10_000)], None, 4).expect("search");
    println!("{} halting programs up to 16 bits, prefix-free: {}", cache.records.len(), cache.is_prefix_free());

    let m = m_lower(&cache).unwrap();
    println!("Kraft sum {:.6}", m.total.to_f64());
    for (x, mass) in &m.mass {
        let k = k_upper(x, &cache).unwrap();
        println!("x = {x:?}: K <= {:?} (witness {:?}), m >= {:.3e}", k.value, k.witness, mass.to_f64());
    }

    // strings no program printed fall back to the literal floor
    let x: BitString = "10110".parse().unwrap();
    println!("floor for {x}: {:.3e}", m.mass_or_floor(&x, 8));

    // a longer round only adds records
    let more = dovetail(&machine, &[Round::new(18, 10_000)], Some(cache.clone()), 4).unwrap();
    println!("{} -> {} records, regressions: {:?}", cache.records.len(), more.records.len(),
        monotonicity_violations(&cache, &more).unwrap());

    println!("erasing 1 bit at 300 K costs at least {:.3e} J", landauer_cost(1.0, 300.0).unwrap());
}
