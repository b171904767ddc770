//! Compressed length per symbol of sampled words approaches the entropy.

use ait_workbench::classical::*;

fn main() {
    for probs in [vec![0.5, 0.5], vec![0.25, 0.75], vec![0.05, 0.95]] {
        let s = SourceModel::bernoulli(probs.clone()).unwrap();
        for n in [1_000, 10_000, 100_000] {
            let r = brudno_experiment(&s, n, 10, Backend::Compressor, 1).unwrap();
            println!("{probs:?} n = {n:6}: mean rate {:.4} (sd {:.4}), entropy {:.4}", r.mean, r.stddev, r.h);
        }
    }
}
