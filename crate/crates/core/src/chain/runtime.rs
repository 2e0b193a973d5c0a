use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::tx::DeployArgs;
use super::{CallOutput, ChainError, Transaction, TxError, TxOutcome, DEPLOY_ABI, DEPLOY_TARGET};
use crate::abac::{AccountId, AttributeSet, Policy, UnixTime};
use crate::contracts::{
    run_flow, AccessLog, AccessRecord, AclEntry, AttributeRegistry, Call, Contract, ContractError,
    ContractKind, FlowInputs, PolicyList, Storage,
};
use crate::gas::{formulas, CostParams, DeployConstants, GasReceipt};
use crate::Gas;

/// First-time initialization markers, consumed exactly once each.
pub const INIT_POLICY_ADD: &str = "PMC.policyAdd";
pub const INIT_GET_SUBJECT: &str = "ACC.getSubject";
pub const INIT_GET_OBJECT: &str = "ACC.getObject";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainState {
    pub contracts: BTreeMap<String, Contract>,
    pub consumed_markers: BTreeSet<String>,
    pub clock: UnixTime,
}

impl ChainState {
    pub fn is_first_time(&self, marker: &str) -> bool {
        !self.consumed_markers.contains(marker)
    }

    /// SHA-256 over contract storage and consumed markers.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(&(&self.contracts, &self.consumed_markers)).expect("state serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// One applied transaction with its gas and result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub tx: Transaction,
    pub receipt: GasReceipt,
    pub result: Result<CallOutput, TxError>,
}

/// The runtime. Submission is serialized through `&mut self`; views take `&self`.
#[derive(Clone, Debug)]
pub struct Chain {
    params: CostParams,
    deploy: DeployConstants,
    state: ChainState,
    log: Vec<LogEntry>,
}

impl Chain {
    pub fn new(params: CostParams, deploy: DeployConstants) -> Result<Self, ChainError> {
        params.validate()?;
        Ok(Self { params, deploy, state: ChainState::default(), log: Vec::new() })
    }

    pub fn with_defaults() -> Self {
        Self::new(CostParams::default(), DeployConstants::default()).expect("default params are valid")
    }

    /// Rebuilds a chain by applying `txs` in order to genesis.
    pub fn replay<I>(params: CostParams, deploy: DeployConstants, txs: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = Transaction>,
    {
        let mut chain = Self::new(params, deploy)?;
        for tx in txs {
            match chain.submit(tx) {
                Ok(_) | Err(ChainError::Tx(_)) => {}
                Err(e) => return Err(ChainError::CorruptLog(e.to_string())),
            }
        }
        Ok(chain)
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }

    pub fn deploy_constants(&self) -> &DeployConstants {
        &self.deploy
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn transactions(&self) -> impl Iterator<Item = &Transaction> {
        self.log.iter().map(|e| &e.tx)
    }

    pub fn clock(&self) -> UnixTime {
        self.state.clock
    }

    pub fn digest(&self) -> String {
        self.state.digest()
    }

    /// Total gas charged over the whole log.
    pub fn total_gas(&self) -> Gas {
        self.log.iter().map(|e| e.receipt.total()).sum()
    }

    pub fn set_clock(&mut self, now: UnixTime) -> Result<(), ChainError> {
        if now < self.state.clock {
            return Err(ChainError::ClockRegression { clock: self.state.clock, requested: now });
        }
        self.state.clock = now;
        Ok(())
    }

    /// A transaction for `call` that would be accepted next, stamped with the clock.
    pub fn next_tx(&self, sender: AccountId, call: &Call) -> Transaction {
        Transaction {
            seq: self.log.len() as u64,
            sender,
            target: call.target().to_owned(),
            abi: call.abi().to_owned(),
            args: call.args(),
            timestamp: self.state.clock,
        }
    }

    pub fn call(&mut self, sender: AccountId, call: Call) -> Result<TxOutcome, ChainError> {
        let tx = self.next_tx(sender, &call);
        self.submit(tx)
    }

    pub fn call_at(&mut self, sender: AccountId, call: Call, timestamp: UnixTime) -> Result<TxOutcome, ChainError> {
        let mut tx = self.next_tx(sender, &call);
        tx.timestamp = timestamp;
        self.submit(tx)
    }

    pub fn deploy(&mut self, name: &str, kind: ContractKind, admin: AccountId) -> Result<TxOutcome, ChainError> {
        let tx = Transaction {
            seq: self.log.len() as u64,
            sender: admin,
            target: DEPLOY_TARGET.to_owned(),
            abi: DEPLOY_ABI.to_owned(),
            args: serde_json::to_value(DeployArgs { contract: name.to_owned(), kind }).expect("serializes"),
            timestamp: self.state.clock,
        };
        self.submit(tx)
    }

    /// Deploys ACC, SAMC, OAMC and PMC under their canonical names.
    pub fn deploy_abac(&mut self, admin: AccountId) -> Result<Vec<(ContractKind, GasReceipt)>, ChainError> {
        ContractKind::ABAC
            .into_iter()
            .map(|k| Ok((k, self.deploy(k.canonical_name(), k, admin)?.receipt)))
            .collect()
    }

    /// Applies one transaction. Precondition failures are rejected outright;
    /// any later failure leaves storage untouched but is still logged.
    pub fn submit(&mut self, tx: Transaction) -> Result<TxOutcome, ChainError> {
        let expected = self.log.len() as u64;
        if tx.seq != expected {
            return Err(ChainError::SeqMismatch { expected, got: tx.seq });
        }
        if tx.timestamp < self.state.clock {
            return Err(ChainError::ClockRegression { clock: self.state.clock, requested: tx.timestamp });
        }
        self.state.clock = tx.timestamp;
        let result = self.execute(&tx);
        let receipt = result.as_ref().map(|o| o.receipt).unwrap_or_default();
        self.log.push(LogEntry {
            tx,
            receipt,
            result: result.as_ref().map(|o| o.output.clone()).map_err(Clone::clone),
        });
        result.map_err(ChainError::Tx)
    }

    fn execute(&mut self, tx: &Transaction) -> Result<TxOutcome, TxError> {
        if tx.target == DEPLOY_TARGET {
            return self.execute_deploy(tx);
        }
        let contract = self
            .state
            .contracts
            .get(&tx.target)
            .ok_or_else(|| TxError::UnknownContract(tx.target.clone()))?;
        let call = Call::decode(contract.kind, &tx.target, &tx.abi, &tx.args)?.ok_or_else(|| TxError::UnknownAbi {
            contract: tx.target.clone(),
            abi: tx.abi.clone(),
        })?;
        if contract.kind.admin_only() && contract.admin != tx.sender {
            return Err(ContractError::Unauthorized { sender: tx.sender, contract: tx.target.clone() }.into());
        }
        self.dispatch(tx, call)
    }

    fn execute_deploy(&mut self, tx: &Transaction) -> Result<TxOutcome, TxError> {
        if tx.abi != DEPLOY_ABI {
            return Err(TxError::UnknownAbi { contract: DEPLOY_TARGET.to_owned(), abi: tx.abi.clone() });
        }
        let args = DeployArgs::deserialize(&tx.args).map_err(|e| ContractError::InvalidArgs(e.to_string()))?;
        match (args.kind, ContractKind::from_canonical_name(&args.contract)) {
            (ContractKind::AclPair, None) if !args.contract.is_empty() && args.contract != DEPLOY_TARGET => {}
            (kind, Some(named)) if kind == named => {}
            _ => {
                return Err(ContractError::InvalidArgs(format!(
                    "contract name {:?} does not fit kind {}",
                    args.contract, args.kind
                ))
                .into())
            }
        }
        if self.state.contracts.contains_key(&args.contract) {
            return Err(TxError::AlreadyDeployed(args.contract));
        }
        let address = AccountId::from_digest(&Sha256::digest(
            format!("{}:{}:{}", args.contract, tx.sender, tx.seq).as_bytes(),
        ));
        self.state.contracts.insert(
            args.contract.clone(),
            Contract { kind: args.kind, address, admin: tx.sender, storage: Storage::empty(args.kind) },
        );
        Ok(TxOutcome {
            output: CallOutput::Deployed { contract: args.contract, address },
            receipt: GasReceipt::code(args.kind.deploy_gas(&self.deploy)),
        })
    }

    fn dispatch(&mut self, tx: &Transaction, call: Call) -> Result<TxOutcome, TxError> {
        let p = self.params.clone();
        let done = |output, receipt| Ok(TxOutcome { output, receipt });
        match call {
            Call::SubjectAdd { id, attrs } | Call::ObjectAdd { id, attrs } => {
                let subject = matches!(tx.abi.as_str(), "subjectAdd");
                let (bounds, receipt) = if subject {
                    (p.subject_bounds(), formulas::subject_add::<Gas>(&p))
                } else {
                    (p.object_bounds(), formulas::object_add::<Gas>(&p))
                };
                let receipt = receipt.expect("params validated at construction");
                self.registry_mut(&tx.target)?.add(id, &attrs, bounds)?;
                done(CallOutput::Done, receipt)
            }
            Call::SubjectUpdate { id, name, value } => {
                let stored = self.registry_mut(&tx.target)?.update(id, &name, &value, p.subject_bounds())?;
                let receipt = formulas::subject_update::<Gas>(stored.chars().count());
                done(CallOutput::Updated { value: stored }, receipt)
            }
            Call::ObjectUpdate { id, name, value } => {
                let stored = self.registry_mut(&tx.target)?.update(id, &name, &value, p.object_bounds())?;
                let receipt = formulas::object_update::<Gas>(stored.chars().count());
                done(CallOutput::Updated { value: stored }, receipt)
            }
            Call::SubjectDelete { id, name } => {
                self.registry_mut(&tx.target)?.delete(id, &name)?;
                done(CallOutput::Done, formulas::subject_delete())
            }
            Call::ObjectDelete { id, name } => {
                self.registry_mut(&tx.target)?.delete(id, &name)?;
                done(CallOutput::Done, formulas::object_delete())
            }
            Call::PolicyAdd { policy } => {
                let first = self.state.is_first_time(INIT_POLICY_ADD);
                let index = self.policies_mut()?.add(policy, p.subject_bounds(), p.object_bounds())?;
                self.state.consumed_markers.insert(INIT_POLICY_ADD.to_owned());
                done(CallOutput::PolicyAdded { index }, formulas::policy_add(&p, first))
            }
            Call::PolicyUpdate { index, policy } => {
                self.policies_mut()?.update(index, policy, p.subject_bounds(), p.object_bounds())?;
                done(CallOutput::Done, formulas::policy_update(&p, index))
            }
            Call::PolicyDelete { policy } => {
                let index = self.policies_mut()?.delete(&policy.sa, &policy.oa)?;
                done(CallOutput::PolicyRemoved { index }, formulas::policy_delete(index))
            }
            Call::FindMatchPolicy { sa, oa } => {
                let list = self.policy_list()?;
                let receipt = formulas::find_policy(&p, list.len());
                done(CallOutput::Matches { indices: list.find_match(&sa, &oa) }, receipt)
            }
            Call::FindExactMatchPolicy { sa, oa } => {
                let list = self.policy_list()?;
                let receipt = formulas::find_policy(&p, list.len());
                done(CallOutput::ExactMatch { index: list.find_exact(&sa, &oa) }, receipt)
            }
            Call::AccessControl { subject, object, actions } => {
                if actions.is_empty() {
                    return Err(ContractError::EmptyActionRequest.into());
                }
                let inputs = FlowInputs {
                    subjects: self.registry(ContractKind::Samc)?,
                    objects: self.registry(ContractKind::Oamc)?,
                    policies: self.policy_list()?,
                    params: &p,
                    subject_first_time: self.state.is_first_time(INIT_GET_SUBJECT),
                    object_first_time: self.state.is_first_time(INIT_GET_OBJECT),
                };
                let outcome = run_flow(&inputs, subject, object, actions, tx.timestamp);
                if outcome.consumed_subject_init {
                    self.state.consumed_markers.insert(INIT_GET_SUBJECT.to_owned());
                }
                if outcome.consumed_object_init {
                    self.state.consumed_markers.insert(INIT_GET_OBJECT.to_owned());
                }
                let record = AccessRecord {
                    seq: tx.seq,
                    request_hash: tx.hash_hex(),
                    subject,
                    object,
                    actions,
                    now: tx.timestamp,
                    decision: outcome.decision,
                };
                self.access_log_mut(&tx.target)?.push(record);
                let receipt = outcome.receipt();
                done(CallOutput::Access(outcome), receipt)
            }
            Call::AclPolicyAdd { contract, subject, object, actions } => {
                let c = self.state.contracts.get_mut(&contract).expect("target resolved before dispatch");
                c.storage = Storage::AclPair(Some(AclEntry { subject, object, actions }));
                done(CallOutput::Done, GasReceipt::code(self.deploy.acl_pair_policy))
            }
        }
    }

    fn contract_of(&self, kind: ContractKind) -> Result<&Contract, ContractError> {
        self.state
            .contracts
            .get(kind.canonical_name())
            .ok_or(ContractError::MissingDependency(kind.canonical_name()))
    }

    fn registry(&self, kind: ContractKind) -> Result<&AttributeRegistry, ContractError> {
        match &self.contract_of(kind)?.storage {
            Storage::Attributes(r) => Ok(r),
            _ => unreachable!("attribute contract holds a registry"),
        }
    }

    fn registry_mut(&mut self, name: &str) -> Result<&mut AttributeRegistry, ContractError> {
        match self.state.contracts.get_mut(name).map(|c| &mut c.storage) {
            Some(Storage::Attributes(r)) => Ok(r),
            _ => Err(ContractError::MissingDependency("SAMC/OAMC")),
        }
    }

    fn policy_list(&self) -> Result<&PolicyList, ContractError> {
        match &self.contract_of(ContractKind::Pmc)?.storage {
            Storage::Policies(l) => Ok(l),
            _ => unreachable!("PMC holds a policy list"),
        }
    }

    fn policies_mut(&mut self) -> Result<&mut PolicyList, ContractError> {
        match self.state.contracts.get_mut(ContractKind::Pmc.canonical_name()).map(|c| &mut c.storage) {
            Some(Storage::Policies(l)) => Ok(l),
            _ => Err(ContractError::MissingDependency("PMC")),
        }
    }

    fn access_log_mut(&mut self, name: &str) -> Result<&mut AccessLog, ContractError> {
        match self.state.contracts.get_mut(name).map(|c| &mut c.storage) {
            Some(Storage::Access(l)) => Ok(l),
            _ => Err(ContractError::MissingDependency("ACC")),
        }
    }

    // Views. These read state without a transaction and charge nothing.

    pub fn contract(&self, name: &str) -> Option<&Contract> {
        self.state.contracts.get(name)
    }

    pub fn subject(&self, id: &AccountId) -> Result<&AttributeSet, ContractError> {
        self.registry(ContractKind::Samc)?.get(id)
    }

    pub fn object(&self, id: &AccountId) -> Result<&AttributeSet, ContractError> {
        self.registry(ContractKind::Oamc)?.get(id)
    }

    pub fn policies(&self) -> Result<&[Policy], ContractError> {
        Ok(self.policy_list()?.items())
    }

    pub fn policy(&self, index: usize) -> Result<&Policy, ContractError> {
        self.policy_list()?.get(index)
    }

    pub fn find_match(&self, sa: &AttributeSet, oa: &AttributeSet) -> Result<Vec<usize>, ContractError> {
        Ok(self.policy_list()?.find_match(sa, oa))
    }

    pub fn find_exact(&self, sa: &AttributeSet, oa: &AttributeSet) -> Result<Option<usize>, ContractError> {
        Ok(self.policy_list()?.find_exact(sa, oa))
    }

    pub fn access_records(&self) -> Result<&[AccessRecord], ContractError> {
        match &self.contract_of(ContractKind::Acc)?.storage {
            Storage::Access(l) => Ok(l.records()),
            _ => unreachable!("ACC holds an access log"),
        }
    }

    pub fn acl_entry(&self, name: &str) -> Option<&AclEntry> {
        match &self.state.contracts.get(name)?.storage {
            Storage::AclPair(entry) => entry.as_ref(),
            _ => None,
        }
    }
}
