//! Typed ABI calls and their JSON argument encoding inside a transaction.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ContractError, ContractKind};
use crate::abac::{AccountId, ActionFlags, AttributeSet, Policy};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordArgs {
    id: AccountId,
    attrs: AttributeSet,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UpdateArgs {
    id: AccountId,
    name: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeleteArgs {
    id: AccountId,
    name: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyArgs {
    policy: Policy,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyUpdateArgs {
    index: usize,
    policy: Policy,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchArgs {
    sa: AttributeSet,
    oa: AttributeSet,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AccessArgs {
    subject: AccountId,
    object: AccountId,
    actions: ActionFlags,
}

/// A decoded contract call. `AclPolicyAdd` names its target because pair
/// contracts are deployed under caller-chosen names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Call {
    SubjectAdd { id: AccountId, attrs: AttributeSet },
    SubjectUpdate { id: AccountId, name: String, value: String },
    SubjectDelete { id: AccountId, name: String },
    ObjectAdd { id: AccountId, attrs: AttributeSet },
    ObjectUpdate { id: AccountId, name: String, value: String },
    ObjectDelete { id: AccountId, name: String },
    PolicyAdd { policy: Policy },
    PolicyUpdate { index: usize, policy: Policy },
    PolicyDelete { policy: Policy },
    FindMatchPolicy { sa: AttributeSet, oa: AttributeSet },
    FindExactMatchPolicy { sa: AttributeSet, oa: AttributeSet },
    AccessControl { subject: AccountId, object: AccountId, actions: ActionFlags },
    AclPolicyAdd { contract: String, subject: AccountId, object: AccountId, actions: ActionFlags },
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("abi args serialize")
}

fn parse<T: DeserializeOwned>(args: &Value) -> Result<T, ContractError> {
    T::deserialize(args).map_err(|e| ContractError::InvalidArgs(e.to_string()))
}

impl Call {
    pub fn target(&self) -> &str {
        match self {
            Call::SubjectAdd { .. } | Call::SubjectUpdate { .. } | Call::SubjectDelete { .. } => {
                ContractKind::Samc.canonical_name()
            }
            Call::ObjectAdd { .. } | Call::ObjectUpdate { .. } | Call::ObjectDelete { .. } => {
                ContractKind::Oamc.canonical_name()
            }
            Call::PolicyAdd { .. }
            | Call::PolicyUpdate { .. }
            | Call::PolicyDelete { .. }
            | Call::FindMatchPolicy { .. }
            | Call::FindExactMatchPolicy { .. } => ContractKind::Pmc.canonical_name(),
            Call::AccessControl { .. } => ContractKind::Acc.canonical_name(),
            Call::AclPolicyAdd { contract, .. } => contract,
        }
    }

    pub fn abi(&self) -> &'static str {
        match self {
            Call::SubjectAdd { .. } => "subjectAdd",
            Call::SubjectUpdate { .. } => "subjectUpdate",
            Call::SubjectDelete { .. } => "subjectDelete",
            Call::ObjectAdd { .. } => "objectAdd",
            Call::ObjectUpdate { .. } => "objectUpdate",
            Call::ObjectDelete { .. } => "objectDelete",
            Call::PolicyAdd { .. } | Call::AclPolicyAdd { .. } => "policyAdd",
            Call::PolicyUpdate { .. } => "policyUpdate",
            Call::PolicyDelete { .. } => "policyDelete",
            Call::FindMatchPolicy { .. } => "findMatchPolicy",
            Call::FindExactMatchPolicy { .. } => "findExactMatchPolicy",
            Call::AccessControl { .. } => "accessControl",
        }
    }

    pub fn args(&self) -> Value {
        match self.clone() {
            Call::SubjectAdd { id, attrs } | Call::ObjectAdd { id, attrs } => to_value(RecordArgs { id, attrs }),
            Call::SubjectUpdate { id, name, value } | Call::ObjectUpdate { id, name, value } => {
                to_value(UpdateArgs { id, name, value })
            }
            Call::SubjectDelete { id, name } | Call::ObjectDelete { id, name } => to_value(DeleteArgs { id, name }),
            Call::PolicyAdd { policy } | Call::PolicyDelete { policy } => to_value(PolicyArgs { policy }),
            Call::PolicyUpdate { index, policy } => to_value(PolicyUpdateArgs { index, policy }),
            Call::FindMatchPolicy { sa, oa } | Call::FindExactMatchPolicy { sa, oa } => {
                to_value(SearchArgs { sa, oa })
            }
            Call::AccessControl { subject, object, actions }
            | Call::AclPolicyAdd { subject, object, actions, .. } => to_value(AccessArgs { subject, object, actions }),
        }
    }

    /// Decodes a call addressed to a contract of `kind` named `contract`.
    /// `Ok(None)` means the contract has no such ABI.
    pub fn decode(kind: ContractKind, contract: &str, abi: &str, args: &Value) -> Result<Option<Call>, ContractError> {
        let call = match (kind, abi) {
            (ContractKind::Samc, "subjectAdd") => {
                let a: RecordArgs = parse(args)?;
                Call::SubjectAdd { id: a.id, attrs: a.attrs }
            }
            (ContractKind::Samc, "subjectUpdate") => {
                let a: UpdateArgs = parse(args)?;
                Call::SubjectUpdate { id: a.id, name: a.name, value: a.value }
            }
            (ContractKind::Samc, "subjectDelete") => {
                let a: DeleteArgs = parse(args)?;
                Call::SubjectDelete { id: a.id, name: a.name }
            }
            (ContractKind::Oamc, "objectAdd") => {
                let a: RecordArgs = parse(args)?;
                Call::ObjectAdd { id: a.id, attrs: a.attrs }
            }
            (ContractKind::Oamc, "objectUpdate") => {
                let a: UpdateArgs = parse(args)?;
                Call::ObjectUpdate { id: a.id, name: a.name, value: a.value }
            }
            (ContractKind::Oamc, "objectDelete") => {
                let a: DeleteArgs = parse(args)?;
                Call::ObjectDelete { id: a.id, name: a.name }
            }
            (ContractKind::Pmc, "policyAdd") => Call::PolicyAdd { policy: parse::<PolicyArgs>(args)?.policy },
            (ContractKind::Pmc, "policyUpdate") => {
                let a: PolicyUpdateArgs = parse(args)?;
                Call::PolicyUpdate { index: a.index, policy: a.policy }
            }
            (ContractKind::Pmc, "policyDelete") => Call::PolicyDelete { policy: parse::<PolicyArgs>(args)?.policy },
            (ContractKind::Pmc, "findMatchPolicy") => {
                let a: SearchArgs = parse(args)?;
                Call::FindMatchPolicy { sa: a.sa, oa: a.oa }
            }
            (ContractKind::Pmc, "findExactMatchPolicy") => {
                let a: SearchArgs = parse(args)?;
                Call::FindExactMatchPolicy { sa: a.sa, oa: a.oa }
            }
            (ContractKind::Acc, "accessControl") => {
                let a: AccessArgs = parse(args)?;
                Call::AccessControl { subject: a.subject, object: a.object, actions: a.actions }
            }
            (ContractKind::AclPair, "policyAdd") => {
                let a: AccessArgs = parse(args)?;
                Call::AclPolicyAdd { contract: contract.to_owned(), subject: a.subject, object: a.object, actions: a.actions }
            }
            _ => return Ok(None),
        };
        Ok(Some(call))
    }
}
