//! Finite quantum spin chains: states and entropies, operational partitions
//! of unity and the AF entropy, typical projections, a truncated universal
//! semi-density matrix, and the Gacs complexities.
//!
//! Logarithms are base 2 throughout.

mod brudno;
mod charpoly;
mod composite;
mod ensemble;
mod gacs;
pub mod io;
mod linalg;
mod opu;
mod purify;
mod state;
mod typical;

use thiserror::Error;

pub use brudno::{
    brudno_ensemble, quantum_brudno_experiment, BrudnoItems, BrudnoOnsetRow, BrudnoQuantumRow, Inputs,
    QuantumBrudnoConfig, QuantumBrudnoReport, FAITHFUL_TOL,
};
pub use charpoly::{charpoly, charpoly_exact, is_positive_charpoly, is_positive_exact, is_strictly_positive_charpoly};
pub use composite::{composite_experiment, CompositeConfig, CompositeReport, CompositeSample};
pub use ensemble::{
    admissible, apply_each_site, build_mu_hat, Component, Ensemble, Extra, Provenance, WeightedComponent,
    MAX_DENSE_DIM,
};
pub use gacs::{
    gacs_lower, gacs_pair, gacs_upper, lower_bound_check, GacsValues, LowerBoundReport, SpectralEnsemble, GACS_TOL,
    MAX_UPPER_DIM,
};
pub use linalg::{
    c, frobenius, hermitian_eig, is_hermitian, partial_trace, real_diag, tensor, tensor_power, tensor_vec, trace,
    CMatrix, CVector, Eigen, C64,
};
pub use opu::{
    af_entropy_estimate, opu_refine, opu_state, opu_state_dense, opu_validate, AfRow, Opu, OpuBlock, OpuState,
    RefinedOpu,
};
pub use purify::{af_purification_check, PurificationReport};
pub use state::{
    entropy_of_spectrum, random_density, random_unit_vector, relative_entropy, vn_entropy, DensityMatrix,
    SemiDensityMatrix,
};
pub use typical::{
    projection_matrix, typical_indices, typical_onset, typical_projection, Onset, OnsetRow, QaepItems, SiteSpectrum,
    TypicalProjectionReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not positive: smallest eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("trace {0} is out of range")]
    Trace(f64),
    #[error("not an operational partition of unity: {0}")]
    Opu(String),
    #[error("size limit: {0}")]
    TooLarge(String),
    #[error("state is not faithful (a site eigenvalue is zero)")]
    NotFaithful,
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Format(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
