//! Contract state machines hosted by the chain runtime.
//!
//! Four contracts make up the access-control system: subject attributes
//! (SAMC), object attributes (OAMC), policies (PMC) and the access-control
//! orchestrator (ACC). Two more model the ACL baseline for cost comparison.

mod abi;
mod access;
mod policies;
mod registry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use abi::Call;
pub use access::{run_flow, AccessLog, AccessOutcome, AccessRecord, FlowInputs, FlowStep, StepGas};
pub use policies::PolicyList;
pub use registry::{AttributeRegistry, Side};

use crate::abac::{AbacError, AccountId, Action, ActionFlags};
use crate::gas::DeployConstants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractKind {
    Samc,
    Oamc,
    Pmc,
    Acc,
    AclBase,
    AclPair,
}

impl ContractKind {
    /// The four contracts of the attribute-based scheme, in deployment order.
    pub const ABAC: [ContractKind; 4] = [ContractKind::Acc, ContractKind::Samc, ContractKind::Oamc, ContractKind::Pmc];

    pub fn as_str(self) -> &'static str {
        match self {
            ContractKind::Samc => "samc",
            ContractKind::Oamc => "oamc",
            ContractKind::Pmc => "pmc",
            ContractKind::Acc => "acc",
            ContractKind::AclBase => "acl-base",
            ContractKind::AclPair => "acl-pair",
        }
    }

    /// Singleton kinds live under a fixed name; pair contracts are named freely.
    pub fn canonical_name(self) -> &'static str {
        match self {
            ContractKind::Samc => "SAMC",
            ContractKind::Oamc => "OAMC",
            ContractKind::Pmc => "PMC",
            ContractKind::Acc => "ACC",
            ContractKind::AclBase => "ACL",
            ContractKind::AclPair => "",
        }
    }

    pub fn from_canonical_name(name: &str) -> Option<Self> {
        [
            ContractKind::Samc,
            ContractKind::Oamc,
            ContractKind::Pmc,
            ContractKind::Acc,
            ContractKind::AclBase,
        ]
        .into_iter()
        .find(|k| k.canonical_name() == name)
    }

    pub fn deploy_gas(self, d: &DeployConstants) -> u64 {
        match self {
            ContractKind::Samc => d.samc,
            ContractKind::Oamc => d.oamc,
            ContractKind::Pmc => d.pmc,
            ContractKind::Acc => d.acc,
            ContractKind::AclBase => d.acl_base,
            ContractKind::AclPair => d.acl_pair_acc,
        }
    }

    /// Whether every ABI of this kind is reserved to the deploying admin.
    pub fn admin_only(self) -> bool {
        !matches!(self, ContractKind::Acc)
    }
}

impl fmt::Display for ContractKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContractKind {
    type Err = ContractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "samc" => Ok(ContractKind::Samc),
            "oamc" => Ok(ContractKind::Oamc),
            "pmc" => Ok(ContractKind::Pmc),
            "acc" => Ok(ContractKind::Acc),
            "acl-base" | "acl" => Ok(ContractKind::AclBase),
            "acl-pair" => Ok(ContractKind::AclPair),
            _ => Err(ContractError::InvalidArgs(format!("unknown contract kind {s:?}"))),
        }
    }
}

/// The single permission entry of an ACL pair contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AclEntry {
    pub subject: AccountId,
    pub object: AccountId,
    pub actions: ActionFlags,
}

impl AclEntry {
    pub fn permits(&self, subject: AccountId, object: AccountId, action: Action) -> bool {
        self.subject == subject && self.object == object && self.actions.allows(action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Storage {
    Attributes(AttributeRegistry),
    Policies(PolicyList),
    Access(AccessLog),
    AclBase,
    AclPair(Option<AclEntry>),
}

impl Storage {
    pub fn empty(kind: ContractKind) -> Self {
        match kind {
            ContractKind::Samc => Storage::Attributes(AttributeRegistry::new(Side::Subject)),
            ContractKind::Oamc => Storage::Attributes(AttributeRegistry::new(Side::Object)),
            ContractKind::Pmc => Storage::Policies(PolicyList::new()),
            ContractKind::Acc => Storage::Access(AccessLog::default()),
            ContractKind::AclBase => Storage::AclBase,
            ContractKind::AclPair => Storage::AclPair(None),
        }
    }
}

/// A deployed contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contract {
    pub kind: ContractKind,
    pub address: AccountId,
    pub admin: AccountId,
    pub storage: Storage,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("{sender} is not the admin of {contract}")]
    Unauthorized { sender: AccountId, contract: String },
    #[error(transparent)]
    Attribute(#[from] AbacError),
    #[error("no subject {0}")]
    NoSuchSubject(AccountId),
    #[error("no object {0}")]
    NoSuchObject(AccountId),
    #[error("{id} has no attribute {name:?}")]
    NoSuchAttribute { id: AccountId, name: String },
    #[error("policy duplicates the one at index {index}")]
    DuplicatePolicy { index: usize },
    #[error("policy index {index} out of range for list of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no policy matches exactly")]
    PolicyNotFound,
    #[error("access request names no action")]
    EmptyActionRequest,
    #[error("contract {0} is required but not deployed")]
    MissingDependency(&'static str),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
}

impl ContractError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            ContractError::Unauthorized { .. } => "Unauthorized",
            ContractError::Attribute(
                AbacError::TooManyAttributes { .. } | AbacError::ValueTooLong { .. },
            ) => "AttributeBoundsExceeded",
            ContractError::Attribute(_) => "InvalidAttribute",
            ContractError::NoSuchSubject(_) => "NoSuchSubject",
            ContractError::NoSuchObject(_) => "NoSuchObject",
            ContractError::NoSuchAttribute { .. } => "NoSuchAttribute",
            ContractError::DuplicatePolicy { .. } => "DuplicatePolicy",
            ContractError::IndexOutOfRange { .. } => "IndexOutOfRange",
            ContractError::PolicyNotFound => "PolicyNotFound",
            ContractError::EmptyActionRequest => "EmptyActionRequest",
            ContractError::MissingDependency(_) => "MissingDependency",
            ContractError::InvalidArgs(_) => "InvalidArgs",
        }
    }
}
