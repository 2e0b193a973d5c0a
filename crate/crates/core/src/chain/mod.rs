//! Deterministic single-writer chain.
//!
//! Transactions are applied in sequence to a set of deployed contracts.
//! Every call is metered by the analytic gas model, and the state is a pure
//! fold of the transaction log, so replaying a log reproduces it exactly.

mod log;
mod runtime;
mod tx;

use thiserror::Error;

pub use self::log::{read_log, restore, snapshot, write_log};
pub use runtime::{Chain, ChainState, LogEntry, INIT_GET_OBJECT, INIT_GET_SUBJECT, INIT_POLICY_ADD};
pub use tx::{CallOutput, Transaction, TxOutcome, DEPLOY_ABI, DEPLOY_TARGET};

use crate::abac::UnixTime;
use crate::contracts::ContractError;
use crate::gas::GasError;

/// Failure of an admitted transaction. It is still appended to the log.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TxError {
    #[error("unknown contract {0:?}")]
    UnknownContract(String),
    #[error("contract {contract:?} has no ABI {abi:?}")]
    UnknownAbi { contract: String, abi: String },
    #[error("contract {0:?} is already deployed")]
    AlreadyDeployed(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

impl TxError {
    pub fn code(&self) -> &'static str {
        match self {
            TxError::UnknownContract(_) => "UnknownContract",
            TxError::UnknownAbi { .. } => "UnknownAbi",
            TxError::AlreadyDeployed(_) => "AlreadyDeployed",
            TxError::Contract(e) => e.code(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ChainError {
    #[error(transparent)]
    Tx(#[from] TxError),
    #[error("transaction seq {got} does not follow log length {expected}")]
    SeqMismatch { expected: u64, got: u64 },
    #[error("timestamp {requested} is before the chain clock {clock}")]
    ClockRegression { clock: UnixTime, requested: UnixTime },
    #[error("corrupt transaction log: {0}")]
    CorruptLog(String),
    #[error(transparent)]
    Gas(#[from] GasError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ChainError {
    pub fn code(&self) -> &'static str {
        match self {
            ChainError::Tx(e) => e.code(),
            ChainError::SeqMismatch { .. } => "SeqMismatch",
            ChainError::ClockRegression { .. } => "ClockRegression",
            ChainError::CorruptLog(_) => "CorruptLog",
            ChainError::Gas(GasError::UnsupportedBound { .. }) => "UnsupportedBound",
            ChainError::Gas(_) => "InvalidCostParams",
            ChainError::Io(_) => "Io",
        }
    }
}

impl From<ContractError> for ChainError {
    fn from(e: ContractError) -> Self {
        ChainError::Tx(TxError::Contract(e))
    }
}
