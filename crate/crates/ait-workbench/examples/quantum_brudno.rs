//! Complexity rates of typical projections against the universal ensemble.

use ait_workbench::complexity::{dovetail, m_lower, Mode, Round, UniversalMachine};
use ait_workbench::quantum::*;

fn main() {
    let cache = dovetail(&UniversalMachine::new(Mode::Prefix), &[Round::new(20, 100_000)], None, 4).unwrap();
    let snapshot = m_lower(&cache).unwrap();
    let rho = DensityMatrix::from_diag(&[0.25, 0.75]).unwrap();
    let cfg = QuantumBrudnoConfig { n_min: 4, n_max: 10, eps: 0.15, seed: 7, samples: 8, c_lit: 8, horizon: 256 };
    let rep = quantum_brudno_experiment(&rho, &Inputs { snapshot: &snapshot, cache: Some(&cache) }, &cfg).unwrap();
    println!("s = {:.4}, N_eps = {:?}", rep.s, rep.n_eps);
    for row in &rep.rows {
        println!("n = {:2}: rank {:4}, rates in [{:.4}, {:.4}]", row.n, row.rank, row.rate_min, row.rate_max);
    }
}
