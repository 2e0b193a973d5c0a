use std::fmt;

use rust_decimal::{Decimal, RoundingStrategy};
use serde::Serialize;

use super::CostParams;
use crate::scalar::GasScalar;

/// Exact fee of a gas amount, in Ether and in USD.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fee {
    pub ether: Decimal,
    pub usd: Decimal,
}

impl Fee {
    /// USD rounded half away from zero to `dp` places.
    pub fn usd_rounded(&self, dp: u32) -> Decimal {
        round(self.usd, dp)
    }
}

impl fmt::Display for Fee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ETH ({} USD)", self.ether.normalize(), self.usd_rounded(5))
    }
}

pub fn round(v: Decimal, dp: u32) -> Decimal {
    v.round_dp_with_strategy(dp, RoundingStrategy::MidpointAwayFromZero)
}

/// `gas × gasPrice × 10⁻⁹` Ether, exactly.
pub fn tx_fee_ether<G: GasScalar>(gas: G, gas_price_gwei: u64) -> Decimal {
    let gwei = gas.to_u128().expect("gas fits u128") * u128::from(gas_price_gwei);
    Decimal::from_i128_with_scale(gwei as i128, 9).normalize()
}

pub fn tx_fee<G: GasScalar>(gas: G, p: &CostParams) -> Fee {
    let ether = tx_fee_ether(gas, p.gas_price_gwei);
    Fee { ether, usd: ether * p.usd_per_ether }
}
