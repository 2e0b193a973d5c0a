use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::GasError;
use crate::abac::AttrBounds;

/// Attribute-count value at which the add-ABI code costs were measured.
pub const MEASURED_ATTRIBUTE_COUNT: u32 = 6;

/// Size bounds and pricing that every gas formula is evaluated at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    pub a_s: u32,
    pub a_o: u32,
    pub c_s: u32,
    pub c_o: u32,
    pub gas_price_gwei: u64,
    pub usd_per_ether: Decimal,
    /// Code cost of `subjectAdd` when `a_s` differs from the measured count.
    #[serde(default)]
    pub subject_add_code: Option<u64>,
    /// Code cost of `objectAdd` when `a_o` differs from the measured count.
    #[serde(default)]
    pub object_add_code: Option<u64>,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            a_s: 6,
            a_o: 6,
            c_s: 10,
            c_o: 10,
            gas_price_gwei: 8,
            usd_per_ether: Decimal::new(13200, 2),
            subject_add_code: None,
            object_add_code: None,
        }
    }
}

impl CostParams {
    pub fn subject_bounds(&self) -> AttrBounds {
        AttrBounds::new(self.a_s as usize, self.c_s as usize)
    }

    pub fn object_bounds(&self) -> AttrBounds {
        AttrBounds::new(self.a_o as usize, self.c_o as usize)
    }

    /// `A_s·C_s + A_o·C_o`, the character capacity of one policy.
    pub fn policy_chars(&self) -> u64 {
        u64::from(self.a_s) * u64::from(self.c_s) + u64::from(self.a_o) * u64::from(self.c_o)
    }

    pub fn attr_slots(&self) -> u64 {
        u64::from(self.a_s) + u64::from(self.a_o)
    }

    pub fn validate(&self) -> Result<(), GasError> {
        for (name, v) in [("a_s", self.a_s), ("a_o", self.a_o), ("c_s", self.c_s), ("c_o", self.c_o)] {
            if v == 0 {
                return Err(GasError::NonPositive(name));
            }
        }
        if self.usd_per_ether.is_sign_negative() {
            return Err(GasError::NonPositive("usd_per_ether"));
        }
        self.subject_add_code()?;
        self.object_add_code()?;
        Ok(())
    }

    pub fn subject_add_code(&self) -> Result<u64, GasError> {
        match (self.a_s, self.subject_add_code) {
            (_, Some(code)) => Ok(code),
            (MEASURED_ATTRIBUTE_COUNT, None) => Ok(151_250),
            (a, None) => Err(GasError::UnsupportedBound { side: "subject", count: a }),
        }
    }

    pub fn object_add_code(&self) -> Result<u64, GasError> {
        match (self.a_o, self.object_add_code) {
            (_, Some(code)) => Ok(code),
            (MEASURED_ATTRIBUTE_COUNT, None) => Ok(151_228),
            (a, None) => Err(GasError::UnsupportedBound { side: "object", count: a }),
        }
    }
}

/// Gas charged to deploy each contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeployConstants {
    pub samc: u64,
    pub oamc: u64,
    pub pmc: u64,
    pub acc: u64,
    /// Registration and judge contracts of the ACL baseline, deployed once.
    pub acl_base: u64,
    /// One ACL access-control contract, deployed per subject-object pair.
    pub acl_pair_acc: u64,
    /// Adding the single policy of a pair contract.
    pub acl_pair_policy: u64,
}

impl Default for DeployConstants {
    fn default() -> Self {
        // Only the aggregate 4,943,332 is known; it splits evenly four ways.
        Self {
            samc: 1_235_833,
            oamc: 1_235_833,
            pmc: 1_235_833,
            acc: 1_235_833,
            acl_base: 2_809_093,
            acl_pair_acc: 1_706_290,
            acl_pair_policy: 238_777,
        }
    }
}

impl DeployConstants {
    pub fn proposed_total(&self) -> u64 {
        self.samc + self.oamc + self.pmc + self.acc
    }

    pub fn acl_total(&self) -> u64 {
        self.acl_base
    }

    /// Per-pair cost of the ACL baseline: one contract plus its policy.
    pub fn acl_per_pair(&self) -> u64 {
        self.acl_pair_acc + self.acl_pair_policy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(CostParams::default().validate().is_ok());
        assert_eq!(CostParams::default().policy_chars(), 120);
    }

    #[test]
    fn unmeasured_bounds_need_calibration() {
        let p = CostParams { a_s: 8, ..Default::default() };
        assert_eq!(
            p.validate(),
            Err(GasError::UnsupportedBound { side: "subject", count: 8 })
        );
        let p = CostParams { a_s: 8, subject_add_code: Some(160_000), ..Default::default() };
        assert_eq!(p.subject_add_code(), Ok(160_000));
        let p = CostParams { c_o: 0, ..Default::default() };
        assert_eq!(p.validate(), Err(GasError::NonPositive("c_o")));
    }

    #[test]
    fn deploy_totals() {
        let d = DeployConstants::default();
        assert_eq!(d.proposed_total(), 4_943_332);
        assert_eq!(d.acl_total(), 2_809_093);
        assert_eq!(d.acl_per_pair(), 1_945_067);
    }
}
