use ait_workbench::classical::*;
use proptest::prelude::*;

fn h(ps: &[f64]) -> f64 {
    -ps.iter().filter(|p| **p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

/// Every word of length n over the alphabet, with its probability.
fn words(s: &SourceModel, n: usize) -> Vec<(Vec<usize>, f64)> {
    let m = s.alphabet();
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut w = vec![0; n];
            for k in (0..n).rev() {
                w[k] = i % m;
                i /= m;
            }
            let p = word_probability(s, &w).unwrap();
            (w, p)
        })
        .collect()
}

proptest! {
    #[test]
    fn block_entropy_of_iid_source_is_additive(p in 0.01f64..0.99, n in 1usize..10) {
        let s = SourceModel::bernoulli(vec![p, 1.0 - p]).unwrap();
        let got = block_entropy(&s, n).unwrap();
        prop_assert!((got - n as f64 * h(&[p, 1.0 - p])).abs() < 1e-9);
    }

    #[test]
    fn markov_block_entropy_by_enumeration(a in 0.05f64..0.95, b in 0.05f64..0.95, n in 1usize..9) {
        let s = SourceModel::markov(vec![vec![1.0 - a, a], vec![b, 1.0 - b]]).unwrap();
        let ws = words(&s, n);
        let total: f64 = ws.iter().map(|w| w.1).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let by_hand = h(&ws.iter().map(|w| w.1).collect::<Vec<_>>());
        prop_assert!((block_entropy(&s, n).unwrap() - by_hand).abs() < 1e-9);
    }

    #[test]
    fn typical_methods_agree(p in 0.05f64..0.95, n in 1usize..13, eps in 0.02f64..0.4) {
        let s = SourceModel::bernoulli(vec![p, 1.0 - p]).unwrap();
        let a = typical_set_enumerate(&s, n, eps).unwrap();
        let b = typical_set_by_type(&s, n, eps).unwrap();
        prop_assert_eq!(&a.count, &b.count);
        prop_assert!((a.measure - b.measure).abs() < 1e-9);
    }
}

#[test]
fn typical_set_by_brute_force() {
    let s = SourceModel::bernoulli(vec![0.3, 0.7]).unwrap();
    let hs = h(&[0.3, 0.7]);
    for n in [4, 8, 12] {
        let eps = 0.1;
        let (mut count, mut measure) = (0u64, 0.0);
        for (_, p) in words(&s, n) {
            let rate = -p.log2() / n as f64;
            if rate >= hs - eps && rate <= hs + eps {
                count += 1;
                measure += p;
            }
        }
        let r = typical_set(&s, n, eps).unwrap();
        assert_eq!(r.count, count.to_string());
        assert!((r.measure - measure).abs() < 1e-12);
        assert!(r.log2_count <= r.log2_count_upper + 1e-12);
    }
}

#[test]
fn stationary_distribution_is_fixed() {
    let t = vec![vec![0.9, 0.1], vec![0.3, 0.7]];
    let pi = SourceModel::stationary(&t).unwrap();
    assert!((pi[0] - 0.75).abs() < 1e-12 && (pi[1] - 0.25).abs() < 1e-12);
    let s = SourceModel::markov(t).unwrap();
    // entropy rate of a stationary chain: sum_i pi_i H(row i)
    let rate = 0.75 * h(&[0.9, 0.1]) + 0.25 * h(&[0.3, 0.7]);
    let r = ks_rate(&s, 10).unwrap();
    assert!((r.analytic - rate).abs() < 1e-12);
    assert!((r.rows[9].conditional - rate).abs() < 1e-9);
}

#[test]
fn invalid_sources_are_rejected() {
    assert!(SourceModel::bernoulli(vec![0.5, 0.6]).is_err());
    assert!(SourceModel::bernoulli(vec![]).is_err());
    assert!(SourceModel::markov(vec![vec![1.0, 0.0]]).is_err());
}

#[test]
fn compressor_rates_settle_near_entropy() {
    let s = SourceModel::bernoulli(vec![0.1, 0.9]).unwrap();
    let r = brudno_experiment(&s, 20_000, 5, Backend::Compressor, 3).unwrap();
    assert!((r.mean - h(&[0.1, 0.9])).abs() < 0.03, "{}", r.mean);
    // same seed, same rows
    let again = brudno_experiment(&s, 20_000, 5, Backend::Compressor, 3).unwrap();
    assert_eq!(r.rows, again.rows);
}
