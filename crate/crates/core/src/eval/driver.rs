use sha2::{Digest, Sha256};

use super::EvalError;
use crate::abac::{AccountId, ActionFlags, AttributeSet, Policy, TimeContext};
use crate::chain::Chain;
use crate::contracts::{Call, ContractKind};
use crate::gas::CostParams;
use crate::Gas;

/// Synthetic identities and policies for metered experiments. Records fill
/// every attribute slot; policies are distinct by their first subject value.
#[derive(Clone, Debug)]
pub struct Workload {
    params: CostParams,
}

fn account(tag: &str, i: usize) -> AccountId {
    AccountId::from_digest(&Sha256::digest(format!("{tag}:{i}").as_bytes()))
}

fn base36(mut v: usize) -> String {
    const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[v % 36]);
        v /= 36;
        if v == 0 {
            break;
        }
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

fn record(prefix: char, entries: u32, chars: u32) -> AttributeSet {
    let value: String = std::iter::repeat_n('v', chars as usize).collect();
    let pairs = (0..entries).map(|i| (format!("{prefix}{i}"), value.clone()));
    AttributeSet::from_pairs(pairs).expect("generated names are distinct")
}

impl Workload {
    pub fn new(params: &CostParams) -> Self {
        Self { params: params.clone() }
    }

    pub fn admin() -> AccountId {
        account("admin", 0)
    }

    pub fn subject_id(&self, i: usize) -> AccountId {
        account("subject", i)
    }

    pub fn object_id(&self, i: usize) -> AccountId {
        account("object", i)
    }

    pub fn subject_attrs(&self) -> AttributeSet {
        record('s', self.params.a_s, self.params.c_s)
    }

    pub fn object_attrs(&self) -> AttributeSet {
        record('o', self.params.a_o, self.params.c_o)
    }

    /// The `k`-th distinct policy.
    pub fn policy(&self, k: usize) -> Result<Policy, EvalError> {
        let tag = base36(k);
        if tag.chars().count() > self.params.c_s as usize {
            return Err(EvalError::InvalidConfig(format!(
                "c_s = {} is too small to tell {} policies apart",
                self.params.c_s,
                k + 1
            )));
        }
        let mut sa = AttributeSet::new();
        sa.insert("s0", tag);
        let mut oa = AttributeSet::new();
        oa.insert("o0", "v");
        Ok(Policy { sa, oa, actions: ActionFlags::new(true, false, false), context: TimeContext::always() })
    }

    /// Deploys the four contracts and returns their total gas.
    pub fn deploy_abac(&self, chain: &mut Chain) -> Result<Gas, EvalError> {
        Ok(chain.deploy_abac(Self::admin())?.iter().map(|(_, r)| r.total()).sum())
    }

    pub fn add_subject(&self, chain: &mut Chain, i: usize) -> Result<Gas, EvalError> {
        let call = Call::SubjectAdd { id: self.subject_id(i), attrs: self.subject_attrs() };
        Ok(chain.call(Self::admin(), call)?.receipt.total())
    }

    pub fn add_object(&self, chain: &mut Chain, i: usize) -> Result<Gas, EvalError> {
        let call = Call::ObjectAdd { id: self.object_id(i), attrs: self.object_attrs() };
        Ok(chain.call(Self::admin(), call)?.receipt.total())
    }

    /// Adds policy `k` and runs the duplicate-check search over the grown list.
    pub fn add_policy(&self, chain: &mut Chain, k: usize) -> Result<Gas, EvalError> {
        let policy = self.policy(k)?;
        let search = Call::FindMatchPolicy { sa: policy.sa.clone(), oa: policy.oa.clone() };
        let added = chain.call(Self::admin(), Call::PolicyAdd { policy })?.receipt.total();
        Ok(added + chain.call(Self::admin(), search)?.receipt.total())
    }

    pub fn deploy_acl_base(&self, chain: &mut Chain) -> Result<Gas, EvalError> {
        let kind = ContractKind::AclBase;
        Ok(chain.deploy(kind.canonical_name(), kind, Self::admin())?.receipt.total())
    }

    /// Deploys pair contract `j` and writes its policy.
    pub fn add_acl_pair(&self, chain: &mut Chain, j: usize) -> Result<Gas, EvalError> {
        let name = format!("ACL-{j}");
        let deployed = chain.deploy(&name, ContractKind::AclPair, Self::admin())?.receipt.total();
        let call = Call::AclPolicyAdd {
            contract: name,
            subject: self.subject_id(j),
            object: self.object_id(j),
            actions: ActionFlags::new(true, false, false),
        };
        Ok(deployed + chain.call(Self::admin(), call)?.receipt.total())
    }
}
