use std::collections::BTreeMap;

use ait_workbench::codec::BitString;
use ait_workbench::complexity::*;
use proptest::prelude::*;

fn bits(v: Vec<bool>) -> BitString {
    BitString::from_bits(v)
}

proptest! {
    #[test]
    fn compressor_round_trips(v in prop::collection::vec(any::<bool>(), 0..400)) {
        let x = bits(v);
        let c = compress(&x);
        prop_assert_eq!(decompress(&c).unwrap(), x.clone());
        prop_assert_eq!(compress_proxy(&x), c.len());
    }

    #[test]
    fn symbol_streams_round_trip(xs in prop::collection::vec(0usize..5, 0..300)) {
        let c = compress_symbols(&xs, 5);
        let (back, m) = decompress_symbols(&c).unwrap();
        prop_assert_eq!(back, xs);
        prop_assert_eq!(m, 5);
    }

    #[test]
    fn wrapped_payloads_unwrap(v in prop::collection::vec(any::<bool>(), 0..200)) {
        let x = bits(v);
        let w = prefix_wrap(&x);
        prop_assert_eq!(prefix_unwrap(&w), Some(x.clone()));
        // 1^k 0, a k-bit length field, then the payload
        let k = (usize::BITS - x.len().leading_zeros()) as usize;
        prop_assert_eq!(w.len(), x.len() + 2 * k + 1);
    }

    #[test]
    fn no_wrapped_word_extends_another(a in prop::collection::vec(any::<bool>(), 0..40),
                                       b in prop::collection::vec(any::<bool>(), 0..40)) {
        let (wa, wb) = (prefix_wrap(&bits(a.clone())), prefix_wrap(&bits(b.clone())));
        if a != b {
            prop_assert!(!wa.is_prefix_of(&wb) && !wb.is_prefix_of(&wa));
        }
    }
}

#[test]
fn long_runs_compress() {
    let x = BitString::zeros(10_000);
    // adaptive frequencies make a constant run cost O(log n) bits
    assert!(compress(&x).len() < 64, "{}", compress(&x).len());
    assert_eq!(compress(&BitString::new()).len(), 4);
}

fn search(mode: Mode, len: usize) -> EnumerationCache {
    dovetail(&UniversalMachine::new(mode), &[Round::new(len, 10_000)], None, 2).unwrap()
}

#[test]
fn counts_match_records() {
    let c = search(Mode::Plain, 12);
    let mut best: BTreeMap<BitString, usize> = BTreeMap::new();
    for r in &c.records {
        let e = best.entry(r.output.clone()).or_insert(usize::MAX);
        *e = (*e).min(r.program.len());
    }
    for k in 0..=12 {
        let want = best.values().filter(|l| **l < k).count() as u64;
        assert_eq!(count_below(&c, k).unwrap(), want);
        assert!(want < 1 << k);
    }
    for (x, l) in &best {
        let e = c_upper(x, &c).unwrap();
        assert_eq!(e.value, Some(*l));
        let w = e.witness.unwrap();
        let run = UniversalMachine::new(Mode::Plain).run(&w, 10_000).unwrap();
        assert_eq!(&run.output, x);
    }
}

#[test]
fn prefix_masses_sum_to_the_kraft_total() {
    let c = search(Mode::Prefix, 16);
    assert!(c.is_prefix_free());
    let m = m_lower(&c).unwrap();
    let by_hand: f64 = c.records.iter().map(|r| (-(r.program.len() as f64)).exp2()).sum();
    assert!((m.total.to_f64() - by_hand).abs() < 1e-15);
    assert!(m.total.at_most_one());
    let sum: f64 = m.mass.values().map(Dyadic::to_f64).sum();
    assert!((sum - by_hand).abs() < 1e-15);
    assert!(k_upper(&BitString::new(), &c).unwrap().value.is_some());
    // a plain cache has no semi-measure
    assert!(m_lower(&search(Mode::Plain, 8)).is_err());
}

#[test]
fn cache_files_round_trip() {
    let c = search(Mode::Prefix, 14);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.cache");
    c.save(&path).unwrap();
    let back = EnumerationCache::load(&path).unwrap();
    assert_eq!(back.records, c.records);
    assert_eq!(back.content_hash(), c.content_hash());
    assert_eq!(back.header().records, c.records.len());
    // resuming with a longer round keeps every earlier record
    let more = dovetail(&UniversalMachine::new(Mode::Prefix), &[Round::new(16, 10_000)], Some(back), 2).unwrap();
    assert!(monotonicity_violations(&c, &more).unwrap().is_empty());
    assert!(c.records.iter().all(|r| more.contains(&r.program)));
}

#[test]
fn corrupted_caches_are_rejected() {
    let c = search(Mode::Plain, 10);
    let mut buf = Vec::new();
    c.write_to(&mut buf).unwrap();
    let mut text = String::from_utf8(buf).unwrap();
    text.push_str("{\"not\": \"a record\"}\n");
    assert!(EnumerationCache::read_from(text.as_bytes(), "mem").is_err());
}

#[test]
fn landauer_at_room_temperature() {
    let e = landauer_cost(1.0, 300.0).unwrap();
    assert!((e - 2.870979e-21).abs() < 1e-26);
    assert!(landauer_cost(1.0, 0.0).is_err());
}
