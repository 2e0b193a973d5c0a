pub mod abac;
pub mod chain;
pub mod contracts;
pub mod eval;
pub mod gas;
mod scalar;

pub use scalar::GasScalar;

/// Default gas scalar.
pub type Gas = u64;
/// Gas scalar for sweeps whose totals may exceed `u64`.
pub type WideGas = u128;
