use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::abac::{AccountId, UnixTime};
use crate::contracts::{AccessOutcome, ContractKind};
use crate::gas::GasReceipt;

/// Target of a deployment transaction.
pub const DEPLOY_TARGET: &str = "DEPLOY";
pub const DEPLOY_ABI: &str = "deploy";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transaction {
    pub seq: u64,
    pub sender: AccountId,
    pub target: String,
    pub abi: String,
    pub args: Value,
    pub timestamp: UnixTime,
}

impl Transaction {
    /// One line of canonical JSON: fixed field order, sorted object keys, no whitespace.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("transaction serializes")
    }

    pub fn hash(&self) -> [u8; 32] {
        Sha256::digest(self.canonical_json().as_bytes()).into()
    }

    pub fn hash_hex(&self) -> String {
        format!("0x{}", hex::encode(self.hash()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DeployArgs {
    pub contract: String,
    pub kind: ContractKind,
}

/// Return value of a successful call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CallOutput {
    Deployed { contract: String, address: AccountId },
    Done,
    /// The value actually stored by an attribute update, after normalization.
    Updated { value: String },
    PolicyAdded { index: usize },
    PolicyRemoved { index: usize },
    Matches { indices: Vec<usize> },
    ExactMatch { index: Option<usize> },
    Access(AccessOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TxOutcome {
    pub output: CallOutput,
    pub receipt: GasReceipt,
}
