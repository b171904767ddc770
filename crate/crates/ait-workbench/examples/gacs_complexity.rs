//! Lower and upper Gacs complexity of states against a small ensemble.

use ait_workbench::quantum::*;
use ait_workbench::rng;

fn main() {
    let mut r = rng::stream(1, 0);
    let bell = {
        let mut v = CVector::zeros(4);
        v[0] = c(0.5f64.sqrt(), 0.0);
        v[3] = c(0.5f64.sqrt(), 0.0);
        DensityMatrix::pure(&v).unwrap()
    };
    let ens = build_mu_hat(4, None, vec![Extra::dense("bell", SemiDensityMatrix::new(bell.matrix().clone()).unwrap())])
        .unwrap();
    println!("ensemble trace {:.4}, components {}", ens.trace(), ens.components.len());

    let states = [("bell", bell), ("mixed", DensityMatrix::maximally_mixed(4)), ("random", random_density(4, 2, &mut r))];
    for (name, rho) in &states {
        let g = gacs_pair(rho, &ens).unwrap();
        println!("{name:>6}: lower {:.4}  upper {:.4}", g.lower, g.upper);
    }
}
