use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::QuantumError;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative tolerance for claimed Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real_diag(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|x| c(*x, 0.0))))
}

/// Kronecker product, `a` as the left (more significant) factor.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn tensor_power(a: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for _ in 0..n {
        out = tensor(&out, a);
    }
    out
}

pub fn tensor_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn is_hermitian(m: &CMatrix) -> bool {
    m.is_square() && frobenius(&(m - m.adjoint())) <= HERMITIAN_TOL * frobenius(m)
}

fn dims_product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Traces out every tensor factor not listed in `keep`. `dims` lists the
/// factor dimensions, most significant first.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix, QuantumError> {
    let total = dims_product(dims);
    if m.nrows() != total || m.ncols() != total {
        return Err(QuantumError::Dimension(format!(
            "matrix is {}x{} but factors multiply to {total}",
            m.nrows(),
            m.ncols()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|k| *k >= dims.len()) {
        return Err(QuantumError::Dimension("keep must be strictly increasing factor indices".into()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|k| dims[*k]).collect();
    let td: Vec<usize> = traced.iter().map(|k| dims[*k]).collect();
    let (kn, tn) = (dims_product(&kd), dims_product(&td));

    // place value of each factor in the full index
    let mut place = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        place[k] = place[k + 1] * dims[k + 1];
    }
    let offsets = |factors: &[usize], fdims: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for (f, d) in factors.iter().zip(fdims).rev() {
            off += (idx % d) * place[*f];
            idx /= d;
        }
        off
    };
    let kept_off: Vec<usize> = (0..kn).map(|i| offsets(keep, &kd, i)).collect();
    let traced_off: Vec<usize> = (0..tn).map(|i| offsets(&traced, &td, i)).collect();

    let mut out = CMatrix::zeros(kn, kn);
    for (i, ri) in kept_off.iter().enumerate() {
        for (j, cj) in kept_off.iter().enumerate() {
            out[(i, j)] = traced_off.iter().map(|t| m[(ri + t, cj + t)]).sum();
        }
    }
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `k` belongs to `values[k]`.
    pub vectors: CMatrix,
}

impl Eigen {
    /// `V f(Lambda) V^dagger`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let d = real_diag(&self.values.iter().map(|x| f(*x)).collect::<Vec<_>>());
        &self.vectors * d * self.vectors.adjoint()
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
/// matrix.
pub fn hermitian_eig(m: &CMatrix) -> Result<Eigen, QuantumError> {
    if !is_hermitian(m) {
        return Err(QuantumError::NotHermitian);
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: CMatrix::zeros(0, 0) });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let e = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| e.eigenvalues[*b].total_cmp(&e.eigenvalues[*a]));
    let values = order.iter().map(|k| e.eigenvalues[*k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| e.eigenvectors[(i, order[j])]);
    Ok(Eigen { values, vectors })
}
