//! Cost experiments: deployment cost, operating-cost curves against the ACL
//! baseline, and the two campus scenarios.
//!
//! Every experiment runs either analytically (evaluating the gas formulas) or
//! metered (driving real transactions through a [`Chain`](crate::chain::Chain)).

mod curve;
mod driver;
mod report;
mod scenario;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use curve::{deployment_report, operating_curve, DeploymentLine, DeploymentReport};
pub use driver::Workload;
pub use report::{find_crossovers, CostReport, CostRow, Crossover, CrossoverKind};
pub use scenario::{scenario1, scenario2, ScenarioReport, ScenarioRow};

use crate::chain::ChainError;
use crate::gas::{CostParams, DeployConstants, GasError, SearchMode};

/// Largest pair count a metered run will drive through a chain.
pub const METERED_CEILING: usize = 1000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    #[default]
    Analytic,
    Metered,
}

/// How many pairs share one policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sharing {
    PerPolicy(usize),
    /// Every pair is served by a single policy.
    SharedAll,
}

impl Sharing {
    /// Policies needed for `m` pairs.
    pub fn policies_for(self, m: usize) -> usize {
        match self {
            Sharing::PerPolicy(p) => m.div_ceil(p),
            Sharing::SharedAll => usize::from(m > 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m_max: usize,
    pub sharing: Sharing,
    pub mode: EvalMode,
    pub search_mode: SearchMode,
    pub params: CostParams,
    pub deploy: DeployConstants,
    pub include_deployment: bool,
}

impl ExperimentConfig {
    pub fn new(m_max: usize, sharing: Sharing) -> Self {
        Self {
            m_max,
            sharing,
            mode: EvalMode::Analytic,
            search_mode: SearchMode::PerPair,
            params: CostParams::default(),
            deploy: DeployConstants::default(),
            include_deployment: true,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        self.params.validate()?;
        if self.m_max == 0 {
            return Err(EvalError::InvalidConfig("m_max must be at least 1".into()));
        }
        if self.sharing == Sharing::PerPolicy(0) {
            return Err(EvalError::InvalidConfig("pairs per policy must be at least 1".into()));
        }
        if self.mode == EvalMode::Metered {
            if self.m_max > METERED_CEILING {
                return Err(EvalError::InvalidConfig(format!(
                    "metered runs are limited to m_max <= {METERED_CEILING}, got {}",
                    self.m_max
                )));
            }
            if self.search_mode != SearchMode::PerPolicy {
                return Err(EvalError::InvalidConfig("metered runs support per-policy search only".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid experiment: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Gas(#[from] GasError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

impl EvalError {
    pub fn code(&self) -> &'static str {
        match self {
            EvalError::InvalidConfig(_) => "InvalidConfig",
            EvalError::Gas(GasError::UnsupportedBound { .. }) => "UnsupportedBound",
            EvalError::Gas(_) => "InvalidCostParams",
            EvalError::Chain(e) => e.code(),
        }
    }
}
