use serde::Serialize;

use super::ensemble::Ensemble;
use super::linalg::{hermitian_eig, CMatrix, Eigen};
use super::state::DensityMatrix;
use super::QuantumError;

/// Largest ensemble dimension diagonalized for the upper complexity.
pub const MAX_UPPER_DIM: usize = 1024;

/// Slack allowed when checking `lower <= upper` numerically.
pub const GACS_TOL: f64 = 1e-9;

fn check_dim(rho: &DensityMatrix, m: &Ensemble) -> Result<(), QuantumError> {
    if rho.dim() != m.dim {
        return Err(QuantumError::Dimension(format!("state has dimension {}, ensemble {}", rho.dim(), m.dim)));
    }
    Ok(())
}

/// `-log2 Tr(rho M)`.
pub fn gacs_lower(rho: &DensityMatrix, m: &Ensemble) -> Result<f64, QuantumError> {
    check_dim(rho, m)?;
    Ok(-m.trace_with(rho.matrix()).log2())
}

/// The spectral decomposition of `M`, reused across states.
#[derive(Debug, Clone)]
pub struct SpectralEnsemble {
    pub eig: Eigen,
}

impl SpectralEnsemble {
    pub fn new(m: &Ensemble) -> Result<Self, QuantumError> {
        if m.dim > MAX_UPPER_DIM {
            return Err(QuantumError::TooLarge(format!("upper complexity needs a dense {}-dimensional ensemble", m.dim)));
        }
        let eig = hermitian_eig(&m.to_dense()?)?;
        if eig.values.last().is_some_and(|u| *u <= 0.0) {
            return Err(QuantumError::NotPositive(*eig.values.last().expect("nonempty")));
        }
        Ok(SpectralEnsemble { eig })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    /// `<u_i| rho |u_i>` for each eigenvector of `M`, descending eigenvalue.
    pub fn weights(&self, rho: &DensityMatrix) -> Vec<f64> {
        let rv = rho.matrix() * &self.eig.vectors;
        (0..self.dim()).map(|i| self.eig.vectors.column(i).dotc(&rv.column(i)).re).collect()
    }

    pub fn lower(&self, rho: &DensityMatrix) -> f64 {
        let w = self.weights(rho);
        -w.iter().zip(&self.eig.values).map(|(w, u)| w * u).sum::<f64>().log2()
    }

    /// `-Tr(rho log2 M) = -sum_i log2(u_i) <u_i|rho|u_i>`.
    pub fn upper(&self, rho: &DensityMatrix) -> f64 {
        let w = self.weights(rho);
        -w.iter().zip(&self.eig.values).map(|(w, u)| w * u.log2()).sum::<f64>()
    }

    /// `E_m`: projection onto the eigenvectors of the `m` largest
    /// eigenvalues (`m` capped at the dimension).
    pub fn ek_projection(&self, m: usize) -> CMatrix {
        let m = m.min(self.dim());
        let v = self.eig.vectors.columns(0, m);
        v * v.adjoint()
    }
}

/// `-Tr(rho log2 M)`.
pub fn gacs_upper(rho: &DensityMatrix, m: &Ensemble) -> Result<f64, QuantumError> {
    check_dim(rho, m)?;
    Ok(SpectralEnsemble::new(m)?.upper(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GacsValues {
    pub lower: f64,
    pub upper: f64,
}

/// Both complexities, checking `lower <= upper` (Jensen on `-log`).
pub fn gacs_pair(rho: &DensityMatrix, m: &Ensemble) -> Result<GacsValues, QuantumError> {
    check_dim(rho, m)?;
    let s = SpectralEnsemble::new(m)?;
    let v = GacsValues { lower: s.lower(rho), upper: s.upper(rho) };
    if v.lower > v.upper + GACS_TOL {
        return Err(QuantumError::Invariant(format!("lower {} exceeds upper {}", v.lower, v.upper)));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub k: u32,
    pub lambda: f64,
    /// `floor(2^{lambda k})`, capped at the dimension.
    pub m: usize,
    pub lower: f64,
    pub upper: f64,
    /// `Tr(rho E_m)`.
    pub weight: f64,
    /// `None` when the hypothesis `upper < k` fails.
    pub upper_implication: Option<bool>,
    /// `None` when the hypothesis `lower < k` fails.
    pub lower_implication: Option<bool>,
}

impl LowerBoundReport {
    pub fn violated(&self) -> bool {
        self.upper_implication == Some(false) || self.lower_implication == Some(false)
    }
}

/// Checks both lower-bound implications for `E_{floor(2^{lambda k})}`:
/// `upper < k => Tr(rho E) > 1 - 1/lambda` and
/// `lower < k => Tr(rho E) > 2^{-k} (1 - 1/lambda)`.
pub fn lower_bound_check(
    rho: &DensityMatrix,
    s: &SpectralEnsemble,
    k: u32,
    lambda: f64,
) -> Result<LowerBoundReport, QuantumError> {
    if !(lambda > 1.0) {
        return Err(QuantumError::Argument(format!("lambda must exceed 1, got {lambda}")));
    }
    if rho.dim() != s.dim() {
        return Err(QuantumError::Dimension("state and ensemble dimensions differ".into()));
    }
    let exp = lambda * k as f64;
    let m = if exp >= 62.0 { s.dim() } else { (exp.exp2().floor() as usize).min(s.dim()) };
    let w = s.weights(rho);
    let weight: f64 = w[..m].iter().sum();
    let (lower, upper) = (s.lower(rho), s.upper(rho));
    let kf = k as f64;
    let slack = 1.0 - 1.0 / lambda;
    Ok(LowerBoundReport {
        k,
        lambda,
        m,
        lower,
        upper,
        weight,
        upper_implication: (upper < kf).then_some(weight > slack),
        lower_implication: (lower < kf).then_some(weight > (-kf).exp2() * slack),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ensemble::build_mu_hat;

    #[test]
    fn flat_ensemble_closed_form() {
        let m = build_mu_hat(16, None, vec![]).unwrap();
        let rho = DensityMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        let v = gacs_pair(&rho, &m).unwrap();
        assert!((v.lower - 5.0).abs() < 1e-12);
        assert!((v.upper - 5.0).abs() < 1e-9);
    }

    #[test]
    fn top_eigenvector_is_fully_covered() {
        let mut m = build_mu_hat(4, None, vec![]).unwrap();
        m.push(
            super::super::ensemble::Component::Diagonal(vec![(2, 1.0)]),
            1.0,
            super::super::ensemble::Provenance::Extra { name: "x".into() },
        );
        let s = SpectralEnsemble::new(&m).unwrap();
        let top = s.eig.vectors.column(0).into_owned();
        let rho = DensityMatrix::pure(&top).unwrap();
        let r = lower_bound_check(&rho, &s, 3, 2.0).unwrap();
        assert!((r.weight - 1.0).abs() < 1e-12);
        assert!(!r.violated());
    }
}
