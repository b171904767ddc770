use serde::Serialize;

use super::linalg::{frobenius, hermitian_eig, CMatrix, C64};
use super::opu::{opu_state, RefinedOpu};
use super::state::{entropy_of_spectrum, vn_entropy, DensityMatrix};
use super::QuantumError;

/// Largest `dim(rho^(n)) * |Z^(n)|` column count handled.
pub const MAX_PURIFICATION_DIM: usize = 1 << 16;

pub const SPECTRUM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurificationReport {
    pub n: usize,
    /// Spectrum of the third-party marginal, which is `rho[Z^(n)]`.
    pub spectrum_opu: Vec<f64>,
    /// Spectrum of `R[Z^(n)]`, the marginal on the doubled chain.
    pub spectrum_r: Vec<f64>,
    /// Largest difference between the two spectra, zero-padded to one length.
    pub spectrum_gap: f64,
    pub entropy_opu: f64,
    pub entropy_r: f64,
    pub state_entropy: f64,
    /// Distance between the third-party marginal and `opu_state`.
    pub marginal_gap: f64,
    pub spectra_agree: bool,
}

fn padded_gap(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Purifies `rho^(n)` to `|sqrt rho> = sum sqrt(r_i) |r_i> (x) |r_i>`, attaches
/// a register for the OPU outcome,
/// `|Psi> = sum_k (Z_k (x) 1) |sqrt rho> (x) |k>`, and compares the two
/// marginals of `|Psi><Psi|`.
pub fn af_purification_check(rho_n: &DensityMatrix, z: &RefinedOpu) -> Result<PurificationReport, QuantumError> {
    let dim = rho_n.dim();
    let outcomes = z.len();
    let rows = dim * dim;
    if rows.saturating_mul(outcomes) > MAX_PURIFICATION_DIM * 64 || rows > MAX_PURIFICATION_DIM {
        return Err(QuantumError::TooLarge(format!("purification of dimension {rows} x {outcomes}")));
    }
    let e = hermitian_eig(rho_n.matrix())?;
    let mut root = CMatrix::zeros(rows, 1);
    for (k, r) in e.values.iter().enumerate() {
        let s = r.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let v = e.vectors.column(k);
        for a in 0..dim {
            for b in 0..dim {
                root[(a * dim + b, 0)] += v[a] * v[b] * s;
            }
        }
    }
    // column k of phi is (Z_k (x) 1)|sqrt rho>
    let mut phi = CMatrix::zeros(rows, outcomes);
    for k in 0..outcomes {
        let zk = z.element(k);
        for a in 0..dim {
            for c in 0..dim {
                let w = zk[(a, c)];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..dim {
                    phi[(a * dim + b, k)] += w * root[(c * dim + b, 0)];
                }
            }
        }
    }
    let m1 = phi.transpose() * phi.conjugate();
    let m2 = &phi * phi.adjoint();
    let s1: Vec<f64> = hermitian_eig(&m1)?.values.into_iter().map(|x| x.max(0.0)).collect();
    let s2: Vec<f64> = hermitian_eig(&m2)?.values.into_iter().map(|x| x.max(0.0)).collect();
    let gap = padded_gap(&s1, &s2);
    let direct = opu_state(z, rho_n)?.to_dense();
    Ok(PurificationReport {
        n: z.n(),
        entropy_opu: entropy_of_spectrum(&s1),
        entropy_r: entropy_of_spectrum(&s2),
        state_entropy: vn_entropy(rho_n),
        marginal_gap: frobenius(&(&m1 - direct)),
        spectra_agree: gap <= SPECTRUM_TOL,
        spectrum_gap: gap,
        spectrum_opu: s1,
        spectrum_r: s2,
    })
}
