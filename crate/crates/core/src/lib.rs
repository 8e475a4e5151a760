//! Exact and modular q-series arithmetic for eta-multiplier Shimura lifts,
//! half-integral weight Hecke operators and generalized Frobenius partition
//! congruences.

pub mod arith;
pub mod error;
pub mod forms;
pub mod frobenius;
pub mod hecke;
pub mod lift;
pub mod multipliers;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
