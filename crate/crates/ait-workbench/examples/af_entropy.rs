//! AF entropy of a qubit chain under matrix units, and the purification check.

use ait_workbench::quantum::*;

fn main() {
    let rho = DensityMatrix::from_diag(&[0.25, 0.75]).unwrap();
    println!("S(rho) = {:.6}", vn_entropy(&rho));
    for row in af_entropy_estimate(&rho, &Opu::matrix_units(2), 6).unwrap() {
        println!("n = {}: S(rho[U]) = {:.6}, n S(rho) + n = {:.6}", row.n, row.entropy, row.state_entropy + row.n as f64);
    }
    for n in 1..=3 {
        let rep = af_purification_check(&rho.tensor_power(n), &opu_refine(&Opu::matrix_units(2), n)).unwrap();
        println!("n = {n}: marginal spectra differ by {:.1e}", rep.spectrum_gap);
    }
}
