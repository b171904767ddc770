//! Block entropies, entropy rates and typical sets of classical sources.

use ait_workbench::classical::*;

fn main() {
    let sources = [
        ("fair coin", SourceModel::bernoulli(vec![0.5, 0.5]).unwrap()),
        ("biased coin", SourceModel::bernoulli(vec![0.25, 0.75]).unwrap()),
        ("flip chain", SourceModel::binary_flip(0.1).unwrap()),
    ];
    for (name, s) in &sources {
        let r = ks_rate(s, 12).unwrap();
        println!("{name}: analytic rate {:.6}", r.analytic);
        for row in r.rows.iter().step_by(3) {
            println!("  n = {:2}  H_n/n = {:.6}  H_n - H_n-1 = {:.6}", row.n, row.rate, row.conditional);
        }
        let t = typical_set(s, 12, 0.1).unwrap();
        println!("  typical set at n = 12: {} words, measure {:.4}", t.count, t.measure);
    }
}
