//! Shift sources, block entropies, typical sets, the classical Gacs entropy
//! and the Brudno rate experiment.

mod brudno;
mod entropy;
mod gacs;
mod source;
mod typical;

use thiserror::Error;

pub use brudno::{brudno_experiment, Backend, BrudnoReport, BrudnoRow};
pub use entropy::{block_entropy, ks_rate, shannon_entropy, word_probability, KsRateReport, KsRow, MAX_WORDS};
pub use gacs::{
    classical_gacs, classical_gacs_table, delta, delta_normalizer, word_bits, ClassicalGacsRow, PlugInMeasure,
    SnapshotMeasure, WordMeasure,
};
pub use source::SourceModel;
pub(crate) use typical::multinomial;
pub use typical::{
    in_typical_window, typical_set, typical_set_by_type, typical_set_enumerate, TypicalMethod, TypicalSetReport,
};


#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error("symbol {symbol} is outside the alphabet of size {alphabet}")]
    Symbol { symbol: usize, alphabet: usize },
    #[error("{alphabet}^{n} words exceeds the enumeration limit of {limit}")]
    TooLarge { alphabet: usize, n: usize, limit: u64 },
    #[error("{0}")]
    InvalidArgument(String),
}
