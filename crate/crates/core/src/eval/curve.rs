use rust_decimal::Decimal;
use serde::Serialize;

use super::report::{find_crossovers, CostReport, CostRow};
use super::{EvalError, EvalMode, ExperimentConfig, Workload};
use crate::chain::Chain;
use crate::contracts::ContractKind;
use crate::gas::{formulas, tx_fee, CostParams, DeployConstants};
use crate::Gas;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeploymentLine {
    pub scheme: &'static str,
    pub contract: String,
    pub gas: Gas,
    pub usd: Decimal,
}

/// Per-contract and total deployment cost of both schemes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeploymentReport {
    pub lines: Vec<DeploymentLine>,
    pub proposed_gas: Gas,
    pub proposed_usd: Decimal,
    pub acl_gas: Gas,
    pub acl_usd: Decimal,
}

impl DeploymentReport {
    /// CSV `scheme,contract,gas,usd`, per contract then one `total` line per scheme.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let totals = [
            ("proposed", self.proposed_gas, self.proposed_usd),
            ("acl", self.acl_gas, self.acl_usd),
        ];
        let rows = self
            .lines
            .iter()
            .map(|l| (l.scheme, l.contract.as_str(), l.gas, l.usd))
            .chain(totals.map(|(s, g, u)| (s, "total", g, u)));
        w.write_record(["scheme", "contract", "gas", "usd"]).expect("in-memory write");
        for (scheme, contract, gas, usd) in rows {
            w.write_record([scheme, contract, &gas.to_string(), &crate::gas::round(usd, 5).to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

pub fn deployment_report(
    params: &CostParams,
    deploy: &DeployConstants,
    mode: EvalMode,
) -> Result<DeploymentReport, EvalError> {
    params.validate()?;
    let mut lines = Vec::new();
    let mut line = |scheme, kind: ContractKind, gas: Gas| {
        lines.push(DeploymentLine {
            scheme,
            contract: kind.canonical_name().to_owned(),
            gas,
            usd: tx_fee(gas, params).usd,
        })
    };
    match mode {
        EvalMode::Analytic => {
            for kind in ContractKind::ABAC {
                line("proposed", kind, kind.deploy_gas(deploy));
            }
            line("acl", ContractKind::AclBase, deploy.acl_total());
        }
        EvalMode::Metered => {
            let workload = Workload::new(params);
            let mut chain = Chain::new(params.clone(), deploy.clone())?;
            for (kind, receipt) in chain.deploy_abac(Workload::admin())? {
                line("proposed", kind, receipt.total());
            }
            let mut acl = Chain::new(params.clone(), deploy.clone())?;
            line("acl", ContractKind::AclBase, workload.deploy_acl_base(&mut acl)?);
        }
    }
    let total = |scheme| lines.iter().filter(|l| l.scheme == scheme).map(|l| l.gas).sum::<Gas>();
    let (proposed_gas, acl_gas) = (total("proposed"), total("acl"));
    Ok(DeploymentReport {
        proposed_usd: tx_fee(proposed_gas, params).usd,
        acl_usd: tx_fee(acl_gas, params).usd,
        proposed_gas,
        acl_gas,
        lines,
    })
}

/// Cumulative cost of onboarding `1..=m_max` pairs under both schemes.
pub fn operating_curve(cfg: &ExperimentConfig) -> Result<CostReport, EvalError> {
    cfg.validate()?;
    let (base_proposed, base_acl) = if cfg.include_deployment {
        (cfg.deploy.proposed_total(), cfg.deploy.acl_total())
    } else {
        (0, 0)
    };
    let rows = match cfg.mode {
        EvalMode::Analytic => analytic_rows(cfg, base_proposed, base_acl)?,
        EvalMode::Metered => metered_rows(cfg)?,
    };
    let baseline = i128::from(base_proposed) - i128::from(base_acl);
    Ok(CostReport { crossovers: find_crossovers(baseline, &rows), rows })
}

fn analytic_rows(cfg: &ExperimentConfig, base_proposed: Gas, base_acl: Gas) -> Result<Vec<CostRow>, EvalError> {
    (1..=cfg.m_max)
        .map(|m| {
            let n = cfg.sharing.policies_for(m);
            let proposed = base_proposed + formulas::pairs_cost::<Gas>(m, n, &cfg.params, cfg.search_mode, true)?;
            let acl = base_acl + formulas::acl_pairs_cost::<Gas>(m, &cfg.deploy);
            Ok(CostRow::new(m, proposed, acl, &cfg.params))
        })
        .collect()
}

fn metered_rows(cfg: &ExperimentConfig) -> Result<Vec<CostRow>, EvalError> {
    let w = Workload::new(&cfg.params);
    let mut proposed_chain = Chain::new(cfg.params.clone(), cfg.deploy.clone())?;
    let mut acl_chain = Chain::new(cfg.params.clone(), cfg.deploy.clone())?;
    let mut proposed = w.deploy_abac(&mut proposed_chain)?;
    let mut acl = w.deploy_acl_base(&mut acl_chain)?;
    if !cfg.include_deployment {
        (proposed, acl) = (0, 0);
    }
    let mut rows = Vec::with_capacity(cfg.m_max);
    for m in 1..=cfg.m_max {
        proposed += w.add_subject(&mut proposed_chain, m)?;
        proposed += w.add_object(&mut proposed_chain, m)?;
        let n = cfg.sharing.policies_for(m);
        if n > cfg.sharing.policies_for(m - 1) {
            proposed += w.add_policy(&mut proposed_chain, n)?;
        }
        acl += w.add_acl_pair(&mut acl_chain, m)?;
        rows.push(CostRow::new(m, proposed, acl, &cfg.params));
    }
    Ok(rows)
}
