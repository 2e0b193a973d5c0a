//! Campus scenarios: a system with 1000 subjects, 150 objects and 100
//! policies gains two lab lights (scenario 1) or 300 new members (scenario 2).

use rust_decimal::Decimal;
use serde::Serialize;

use super::{EvalError, EvalMode, Workload};
use crate::chain::Chain;
use crate::gas::{formulas, round, tx_fee, CostParams, DeployConstants};
use crate::Gas;

const EXISTING_POLICIES: usize = 100;

const S1_MEMBERS: usize = 10;
const S1_LIGHTS: usize = 2;
const S1_PUBLISHED_ACL: Gas = 36_701_340;
const S1_PUBLISHED_BEST: Gas = 310_136;
const S1_PUBLISHED_WORST: Gas = 16_163_226;

const S2_NEW_SUBJECTS: usize = 300;
const S2_OBJECTS: usize = 150;
const S2_OBJECTS_PER_SUBJECT: usize = 15;
const S2_PUBLISHED_ACL: Gas = 8_257_801_500;
const S2_PUBLISHED_BEST: Gas = 46_520_400;
const S2_PUBLISHED_WORST: Gas = 113_438_512_500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioRow {
    pub metric: String,
    pub gas: Gas,
    pub usd: Decimal,
    pub paper_value: Option<Gas>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub rows: Vec<ScenarioRow>,
}

impl ScenarioReport {
    fn push(&mut self, params: &CostParams, metric: impl Into<String>, gas: Gas, paper_value: Option<Gas>) {
        self.rows.push(ScenarioRow { metric: metric.into(), gas, usd: tx_fee(gas, params).usd, paper_value });
    }

    pub fn get(&self, metric: &str) -> Option<&ScenarioRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    /// CSV `metric,gas,usd,paper_value`; the last column is empty when no published value exists.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["metric", "gas", "usd", "paper_value"]).expect("in-memory write");
        for r in &self.rows {
            let published = r.paper_value.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([r.metric.as_str(), &r.gas.to_string(), &round(r.usd, 5).to_string(), &published])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// `n` policy additions, each followed by a search, onto a list of `base` policies.
fn policies_onto(base: usize, n: usize, p: &CostParams) -> Gas {
    (base + 1..=base + n)
        .map(|k| formulas::policy_add::<Gas>(p, false).total() + formulas::find_policy::<Gas>(p, k).total())
        .sum()
}

fn worst_rows(report: &mut ScenarioReport, p: &CostParams, label: &str, attrs: Gas, pairs: usize, published: Gas) {
    for base in [0, EXISTING_POLICIES] {
        let metric = format!("proposed_worst{label}_list_from_{base}");
        report.push(p, metric, attrs + policies_onto(base, pairs, p), Some(published));
    }
}

fn acl_cost(pairs: usize, d: &DeployConstants) -> Gas {
    formulas::acl_pairs_cost(pairs, d)
}

/// Chain with the scenario's pre-existing policy list already in place.
fn seeded_chain(w: &Workload, p: &CostParams, d: &DeployConstants) -> Result<Chain, EvalError> {
    let mut chain = Chain::new(p.clone(), d.clone())?;
    w.deploy_abac(&mut chain)?;
    for k in 0..EXISTING_POLICIES {
        w.add_policy(&mut chain, k)?;
    }
    Ok(chain)
}

pub fn scenario1(p: &CostParams, d: &DeployConstants, mode: EvalMode) -> Result<ScenarioReport, EvalError> {
    p.validate()?;
    let pairs = S1_MEMBERS * S1_LIGHTS;
    let best = formulas::object_add::<Gas>(p)?.total() * S1_LIGHTS as Gas;
    let mut report = ScenarioReport::default();
    report.push(p, "acl", acl_cost(pairs, d), Some(S1_PUBLISHED_ACL));
    report.push(p, "proposed_best", best, Some(S1_PUBLISHED_BEST));
    worst_rows(&mut report, p, "", best, pairs, S1_PUBLISHED_WORST);
    if mode == EvalMode::Metered {
        let w = Workload::new(p);
        let mut chain = seeded_chain(&w, p, d)?;
        let mut gas = 0;
        for i in 0..S1_LIGHTS {
            gas += w.add_object(&mut chain, i)?;
        }
        report.push(p, "proposed_best_metered", gas, Some(S1_PUBLISHED_BEST));
        for k in 0..pairs {
            gas += w.add_policy(&mut chain, EXISTING_POLICIES + k)?;
        }
        let metric = format!("proposed_worst_list_from_{EXISTING_POLICIES}_metered");
        report.push(p, metric, gas, Some(S1_PUBLISHED_WORST));
    }
    Ok(report)
}

/// Worst cases are computed for both pair counts: every new subject against
/// every object, and against the objects each subject actually uses.
pub fn scenario2(p: &CostParams, d: &DeployConstants, mode: EvalMode) -> Result<ScenarioReport, EvalError> {
    p.validate()?;
    let n = S2_NEW_SUBJECTS as Gas;
    let strict = formulas::subject_add::<Gas>(p)?.total() * n;
    // The published best case multiplies by the object-side constant.
    let object_constant = formulas::object_add::<Gas>(p)?.total() * n;
    let mut report = ScenarioReport::default();
    for per_subject in [S2_OBJECTS, S2_OBJECTS_PER_SUBJECT] {
        let pairs = S2_NEW_SUBJECTS * per_subject;
        report.push(p, format!("acl_{S2_NEW_SUBJECTS}x{per_subject}"), acl_cost(pairs, d), Some(S2_PUBLISHED_ACL));
    }
    report.push(p, "proposed_best", object_constant, Some(S2_PUBLISHED_BEST));
    report.push(p, "proposed_best_strict", strict, Some(S2_PUBLISHED_BEST));
    for per_subject in [S2_OBJECTS, S2_OBJECTS_PER_SUBJECT] {
        let label = format!("_{S2_NEW_SUBJECTS}x{per_subject}");
        worst_rows(&mut report, p, &label, strict, S2_NEW_SUBJECTS * per_subject, S2_PUBLISHED_WORST);
    }
    if mode == EvalMode::Metered {
        let w = Workload::new(p);
        let mut chain = Chain::new(p.clone(), d.clone())?;
        w.deploy_abac(&mut chain)?;
        let mut gas = 0;
        for i in 0..S2_NEW_SUBJECTS {
            gas += w.add_subject(&mut chain, i)?;
        }
        report.push(p, "proposed_best_strict_metered", gas, Some(S2_PUBLISHED_BEST));
    }
    Ok(report)
}
