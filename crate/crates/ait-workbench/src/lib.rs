//! Algorithmic information on a register machine, classical entropy rates of
//! shift sources, and quantum Gacs complexity on finite spin chains.

pub mod codec;
pub mod langvm;
pub mod complexity;
pub mod classical;
pub mod quantum;
pub mod harness;
pub mod rng;
