//! Typical projections of a product state and the onset of the typical regime.

use ait_workbench::quantum::*;

fn main() {
    let rho = DensityMatrix::from_diag(&[0.25, 0.75]).unwrap();
    for n in [4, 8, 12] {
        let p = typical_projection(&rho, n, 0.1, n).unwrap();
        println!("n = {n:2}: rank {:4} of {:4}, weight {:.4}", p.rank, 1 << n, p.weight);
    }
    let onset = typical_onset(&SiteSpectrum::of(&rho), 0.1, 1, 256);
    println!("weight stays above 0.9 from n = {:?}; items hold after: {}", onset.n_eps, onset.items_hold_after);
}
