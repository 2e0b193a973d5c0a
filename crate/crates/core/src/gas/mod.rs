//! Analytic gas model.
//!
//! Serves two roles: the chain meters every ABI call by evaluating these
//! formulas, and the cost experiments evaluate them directly.

mod fee;
pub mod formulas;
mod params;

use std::ops::Add;

use serde::Serialize;
use thiserror::Error;

pub use fee::{round, tx_fee, tx_fee_ether, Fee};
pub use formulas::{AddPoliciesCost, SearchMode};
pub use params::{CostParams, DeployConstants, MEASURED_ATTRIBUTE_COUNT};

use crate::scalar::GasScalar;
use crate::Gas;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GasError {
    #[error("{side} add cost is only known for 6 attributes; got {count} without a calibration constant")]
    UnsupportedBound { side: &'static str, count: u32 },
    #[error("parameter {0} must be strictly positive")]
    NonPositive(&'static str),
    #[error("{n} policies cannot serve only {m} pairs")]
    MorePoliciesThanPairs { m: usize, n: usize },
}

/// Gas consumed by one call, split into its three components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct GasReceipt<G = Gas> {
    pub code_cost: G,
    pub storage_cost: G,
    pub init_cost: G,
}

impl<G: GasScalar> GasReceipt<G> {
    pub fn new(code_cost: G, storage_cost: G, init_cost: G) -> Self {
        Self { code_cost, storage_cost, init_cost }
    }

    pub fn code(code_cost: G) -> Self {
        Self::new(code_cost, G::zero(), G::zero())
    }

    pub fn zero() -> Self {
        Self::new(G::zero(), G::zero(), G::zero())
    }

    pub fn total(&self) -> G {
        self.code_cost + self.storage_cost + self.init_cost
    }
}

impl<G: GasScalar> Add for GasReceipt<G> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.code_cost + rhs.code_cost,
            self.storage_cost + rhs.storage_cost,
            self.init_cost + rhs.init_cost,
        )
    }
}

impl<G: GasScalar> std::iter::Sum for GasReceipt<G> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}
