//! Resource-bounded plain and prefix complexity over the register machine,
//! a semi-measure lower bound, a compressor proxy and Landauer costs.

mod arith;
mod cache;
mod estimate;
mod machine;

use thiserror::Error;

pub use arith::{compress, compress_proxy, compress_symbols, decompress, decompress_symbols, CodecStreamError};
pub use cache::{dovetail, CacheHeader, EnumerationCache, Record, Round, CACHE_FORMAT_VERSION};
pub use estimate::{
    c_upper, count_below, k_upper, m_lower, monotonicity_violations, CacheIndex, ComplexityEstimate, Dyadic, EstimateKind, SemiMeasureEstimate,
};
pub use machine::{prefix_unwrap, prefix_wrap, MachineRun, Mode, UniversalMachine};

/// Boltzmann's constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

#[derive(Debug, Error)]
pub enum ComplexityError {
    #[error("cache was built in {found} mode but {expected} mode is required")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed cache: {message}")]
    CacheFormat { path: String, message: String },
    #[error("{path}: content hash mismatch (header {expected}, computed {found})")]
    CacheHash { path: String, expected: String, found: String },
    #[error("schedule max_len {max_len} is beyond the enumeration limit of 30")]
    ScheduleTooLarge { max_len: usize },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("temperature must be positive, got {0}")]
    Temperature(f64),
}

/// Minimum heat, in joules, to erase `bits` bits at temperature `kelvin`:
/// `bits * k_B * T * ln 2`.
pub fn landauer_cost(bits: f64, kelvin: f64) -> Result<f64, ComplexityError> {
    if !(kelvin > 0.0) || !kelvin.is_finite() {
        return Err(ComplexityError::Temperature(kelvin));
    }
    Ok(bits * BOLTZMANN * kelvin * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landauer_one_bit_room_temperature() {
        let e = landauer_cost(1.0, 300.0).unwrap();
        assert!((e - 2.871e-21).abs() < 1e-24);
        assert!(landauer_cost(1.0, 0.0).is_err());
        assert!(landauer_cost(1.0, -3.0).is_err());
    }
}
