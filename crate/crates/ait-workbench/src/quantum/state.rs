use super::linalg::{frobenius, hermitian_eig, is_hermitian, real_diag, tensor, tensor_power, trace, CMatrix, CVector, C64};
use super::QuantumError;

/// Eigenvalues down to this are treated as rounding noise and clamped to 0.
pub const EIG_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

fn check_psd(m: &CMatrix) -> Result<Vec<f64>, QuantumError> {
    if !is_hermitian(m) {
        return Err(QuantumError::NotHermitian);
    }
    let vals = hermitian_eig(m)?.values;
    if let Some(min) = vals.last() {
        if *min < -EIG_TOL {
            return Err(QuantumError::NotPositive(*min));
        }
    }
    Ok(vals)
}

/// A positive operator of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        check_psd(&m)?;
        let t = trace(&m);
        if (t.re - 1.0).abs() > TRACE_TOL || t.im.abs() > TRACE_TOL {
            return Err(QuantumError::Trace(t.re));
        }
        Ok(DensityMatrix(m))
    }

    pub fn from_diag(p: &[f64]) -> Result<Self, QuantumError> {
        Self::new(real_diag(p))
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &CVector) -> Result<Self, QuantumError> {
        Self::new(psi * psi.adjoint())
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(CMatrix::identity(d, d).unscale(d as f64))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(tensor(&self.0, &other.0))
    }

    pub fn tensor_power(&self, n: usize) -> DensityMatrix {
        DensityMatrix(tensor_power(&self.0, n))
    }

    /// Eigenvalues, descending, with rounding noise clamped to 0.
    pub fn spectrum(&self) -> Vec<f64> {
        let e = hermitian_eig(&self.0).expect("checked Hermitian at construction");
        e.values.into_iter().map(|x| x.max(0.0)).collect()
    }

    /// `<v| rho |v>`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.0 * v)[(0, 0)].re
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix, QuantumError> {
        DensityMatrix::new(u * &self.0 * u.adjoint())
    }
}

/// A positive operator with trace in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiDensityMatrix(CMatrix);

impl SemiDensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        check_psd(&m)?;
        let t = trace(&m).re;
        if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&t) {
            return Err(QuantumError::Trace(t));
        }
        Ok(SemiDensityMatrix(m))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }

    pub fn is_zero(&self) -> bool {
        frobenius(&self.0) == 0.0
    }
}

impl From<DensityMatrix> for SemiDensityMatrix {
    fn from(d: DensityMatrix) -> Self {
        SemiDensityMatrix(d.0)
    }
}

/// `-sum lambda log2 lambda` over a spectrum, `0 log 0 = 0`.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum()
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

/// `Tr rho (log2 rho - log2 sigma)`; `+inf` when the support of `rho` is not
/// inside the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho.dim() != sigma.dim() {
        return Err(QuantumError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let e = hermitian_eig(sigma.matrix())?;
    let mut cross = 0.0;
    for (k, s) in e.values.iter().enumerate() {
        let v = e.vectors.column(k).into_owned();
        let w = rho.expectation(&v);
        if *s <= EIG_TOL {
            if w > EIG_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross -= w * s.log2();
    }
    Ok((cross - vn_entropy(rho)).max(0.0))
}

/// Random density matrix `G G^dagger / Tr` with Gaussian `G`; `rank` columns.
pub fn random_density(d: usize, rank: usize, rng: &mut impl rand::Rng) -> DensityMatrix {
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian_c(rng));
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    let mut m = m.unscale(t);
    // exact Hermitian symmetry
    m = (&m + m.adjoint()).scale(0.5);
    DensityMatrix::new(m).expect("G G^dagger is a state")
}

/// Haar-random unit vector in `C^d`.
pub fn random_unit_vector(d: usize, rng: &mut impl rand::Rng) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian_c(rng));
    let n = v.norm();
    v.unscale(n)
}

pub(crate) fn gaussian_c(rng: &mut impl rand::Rng) -> C64 {
    use rand_distr::{Distribution, StandardNormal};
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn pure_and_mixed_entropy() {
        let mut r = rng::stream(3, 0);
        let psi = random_unit_vector(4, &mut r);
        assert!(vn_entropy(&DensityMatrix::pure(&psi).unwrap()).abs() < 1e-9);
        assert!((vn_entropy(&DensityMatrix::maximally_mixed(8)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_basics() {
        let mut r = rng::stream(4, 0);
        for _ in 0..20 {
            let a = random_density(3, 3, &mut r);
            let b = random_density(3, 3, &mut r);
            assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-9);
            assert!(relative_entropy(&a, &b).unwrap() >= 0.0);
        }
        let p = DensityMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let q = DensityMatrix::from_diag(&[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&p, &q).unwrap(), f64::INFINITY);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(matches!(DensityMatrix::from_diag(&[0.5, 0.6]), Err(QuantumError::Trace(_))));
        assert!(matches!(DensityMatrix::from_diag(&[1.5, -0.5]), Err(QuantumError::NotPositive(_))));
    }
}
