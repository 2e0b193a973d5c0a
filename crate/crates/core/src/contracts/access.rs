//! The access-control contract: fetch attributes, search policies, decide,
//! and record the decision where both parties can read it.

use serde::{Deserialize, Serialize};

use super::{AttributeRegistry, PolicyList};
use crate::abac::{evaluate_request, AccessDecision, AccountId, ActionFlags, Reason, UnixTime};
use crate::gas::{formulas, CostParams, GasReceipt};
use crate::Gas;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowStep {
    GetSubject,
    GetObject,
    FindMatchPolicy,
    GetPolicy,
    AccessControl,
}

impl FlowStep {
    pub fn abi(self) -> &'static str {
        match self {
            FlowStep::GetSubject => "getSubject",
            FlowStep::GetObject => "getObject",
            FlowStep::FindMatchPolicy => "findMatchPolicy",
            FlowStep::GetPolicy => "getPolicy",
            FlowStep::AccessControl => "accessControl",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepGas {
    pub step: FlowStep,
    pub receipt: GasReceipt,
}

/// Result of one access request, with the gas of each step it executed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccessOutcome {
    pub decision: AccessDecision,
    /// Indices returned by the policy search.
    pub matched: Vec<usize>,
    /// Index of the policy that granted access, if any.
    pub granted_by: Option<usize>,
    pub steps: Vec<StepGas>,
    pub consumed_subject_init: bool,
    pub consumed_object_init: bool,
}

impl AccessOutcome {
    pub fn receipt(&self) -> GasReceipt {
        self.steps.iter().map(|s| s.receipt).sum()
    }
}

/// One recorded access decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessRecord {
    pub seq: u64,
    pub request_hash: String,
    pub subject: AccountId,
    pub object: AccountId,
    pub actions: ActionFlags,
    pub now: UnixTime,
    pub decision: AccessDecision,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessLog {
    records: Vec<AccessRecord>,
}

impl AccessLog {
    pub fn push(&mut self, record: AccessRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[AccessRecord] {
        &self.records
    }

    /// Records visible to an account: those naming it as subject or object.
    pub fn for_account(&self, id: AccountId) -> impl Iterator<Item = &AccessRecord> {
        self.records.iter().filter(move |r| r.subject == id || r.object == id)
    }
}

/// Read-only view of the contracts the flow consults.
pub struct FlowInputs<'a> {
    pub subjects: &'a AttributeRegistry,
    pub objects: &'a AttributeRegistry,
    pub policies: &'a PolicyList,
    pub params: &'a CostParams,
    /// Whether the subject/object holding variables are still uninitialized.
    pub subject_first_time: bool,
    pub object_first_time: bool,
}

fn step(step: FlowStep, receipt: GasReceipt) -> StepGas {
    StepGas { step, receipt }
}

/// Runs the request without touching storage; the caller commits the
/// record and consumes the init markers reported in the outcome.
pub fn run_flow(
    inputs: &FlowInputs<'_>,
    subject: AccountId,
    object: AccountId,
    actions: ActionFlags,
    now: UnixTime,
) -> AccessOutcome {
    let p = inputs.params;
    let mut steps = Vec::with_capacity(5);

    let stop = |reason, steps, consumed_subject_init| AccessOutcome {
        decision: AccessDecision::deny(reason),
        matched: Vec::new(),
        granted_by: None,
        steps,
        consumed_subject_init,
        consumed_object_init: false,
    };

    let Ok(subject_attrs) = inputs.subjects.get(&subject) else {
        steps.push(step(FlowStep::GetSubject, formulas::get_subject::<Gas>(p, false)));
        return stop(Reason::UnknownSubject, steps, false);
    };
    steps.push(step(FlowStep::GetSubject, formulas::get_subject::<Gas>(p, inputs.subject_first_time)));

    let Ok(object_attrs) = inputs.objects.get(&object) else {
        steps.push(step(FlowStep::GetObject, formulas::get_object::<Gas>(p, false)));
        return stop(Reason::UnknownObject, steps, inputs.subject_first_time);
    };
    steps.push(step(FlowStep::GetObject, formulas::get_object::<Gas>(p, inputs.object_first_time)));

    let matched = inputs.policies.find_match(subject_attrs, object_attrs);
    steps.push(step(FlowStep::FindMatchPolicy, formulas::find_policy::<Gas>(p, inputs.policies.len())));

    let found = !matched.is_empty();
    let mut decision = AccessDecision::deny(Reason::NoMatchingPolicy);
    let mut granted_by = None;
    if found {
        let mut first_failure = None;
        for &index in &matched {
            steps.push(step(FlowStep::GetPolicy, formulas::get_policy::<Gas>(true)));
            let policy = inputs.policies.get(index).expect("index from search");
            let d = evaluate_request(policy, actions, now);
            if d.permitted {
                granted_by = Some(index);
                first_failure = Some(d);
                break;
            }
            first_failure.get_or_insert(d);
        }
        decision = first_failure.expect("at least one policy fetched");
    } else {
        steps.push(step(FlowStep::GetPolicy, formulas::get_policy::<Gas>(false)));
    }
    steps.push(step(FlowStep::AccessControl, formulas::access_check::<Gas>(found)));

    AccessOutcome {
        decision,
        matched,
        granted_by,
        steps,
        consumed_subject_init: inputs.subject_first_time,
        consumed_object_init: inputs.object_first_time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abac::{decide, fixtures, Action, AttrBounds};
    use crate::contracts::Side;

    struct World {
        subjects: AttributeRegistry,
        objects: AttributeRegistry,
        policies: PolicyList,
        params: CostParams,
    }

    impl World {
        fn fixture() -> Self {
            let b = AttrBounds::default();
            let mut subjects = AttributeRegistry::new(Side::Subject);
            subjects.add(fixtures::SUBJECT_ID, &fixtures::student_subject(), b).unwrap();
            let mut objects = AttributeRegistry::new(Side::Object);
            objects.add(fixtures::OBJECT_ID, &fixtures::camera_object(), b).unwrap();
            let mut policies = PolicyList::new();
            policies.add(fixtures::lab_policy(), b, b).unwrap();
            Self { subjects, objects, policies, params: CostParams::default() }
        }

        fn inputs(&self, first: bool) -> FlowInputs<'_> {
            FlowInputs {
                subjects: &self.subjects,
                objects: &self.objects,
                policies: &self.policies,
                params: &self.params,
                subject_first_time: first,
                object_first_time: first,
            }
        }
    }

    const NOW: UnixTime = 1_570_000_000;

    #[test]
    fn steady_state_permit() {
        let w = World::fixture();
        let out = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(out.decision, AccessDecision::PERMIT);
        assert_eq!(out.matched, vec![0]);
        assert_eq!(out.granted_by, Some(0));
        let gas: Vec<_> = out.steps.iter().map(|s| s.receipt.total()).collect();
        assert_eq!(gas, vec![59_467, 59_201, 123_693, 53_215, 26_932]);
        assert_eq!(out.receipt().total(), 322_508);
    }

    #[test]
    fn first_time_adds_init_costs() {
        let w = World::fixture();
        let out = run_flow(&w.inputs(true), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(out.steps[0].receipt.total(), 149_467);
        assert_eq!(out.steps[1].receipt.total(), 149_201);
        assert!(out.consumed_subject_init && out.consumed_object_init);
    }

    #[test]
    fn execute_is_denied() {
        let w = World::fixture();
        let out = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Execute), NOW);
        assert_eq!(out.decision.reason, Reason::ActionNotAllowed);
        assert_eq!(out.granted_by, None);
    }

    #[test]
    fn empty_list_uses_not_found_costs() {
        let mut w = World::fixture();
        w.policies = PolicyList::new();
        let out = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(out.decision.reason, Reason::NoMatchingPolicy);
        let gas: Vec<_> = out.steps.iter().map(|s| s.receipt.total()).collect();
        assert_eq!(gas, vec![59_467, 59_201, 113_175, 46_780, 26_640]);
    }

    #[test]
    fn unknown_parties_stop_early() {
        let w = World::fixture();
        let out = run_flow(&w.inputs(true), fixtures::OBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(out.decision.reason, Reason::UnknownSubject);
        assert_eq!(out.receipt().total(), 59_467);
        assert!(!out.consumed_subject_init);

        let out = run_flow(&w.inputs(true), fixtures::SUBJECT_ID, fixtures::SUBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(out.decision.reason, Reason::UnknownObject);
        assert_eq!(out.receipt().total(), 149_467 + 59_201);
        assert!(out.consumed_subject_init && !out.consumed_object_init);
    }

    #[test]
    fn matches_offline_decide() {
        let w = World::fixture();
        for now in [0, 1_563_206_775, 1_563_206_776, NOW, 1_575_483_331] {
            for a in Action::ALL {
                let out = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(a), now);
                let offline = decide(
                    w.subjects.get(&fixtures::SUBJECT_ID).unwrap(),
                    w.objects.get(&fixtures::OBJECT_ID).unwrap(),
                    w.policies.items(),
                    ActionFlags::only(a),
                    now,
                );
                assert_eq!(out.decision, offline);
            }
        }
    }

    #[test]
    fn multiple_matches_fetch_until_permit() {
        let mut w = World::fixture();
        let b = AttrBounds::default();
        let mut broad = fixtures::lab_policy();
        broad.sa = crate::abac::AttributeSet::from_pairs([("Org", "NAIST")]).unwrap();
        broad.actions = ActionFlags::new(false, false, true);
        w.policies.add(broad, b, b).unwrap();
        let exec = ActionFlags::only(Action::Execute);
        let out = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, exec, NOW);
        assert!(out.decision.permitted);
        assert_eq!(out.granted_by, Some(1));
        let fetches = out.steps.iter().filter(|s| s.step == FlowStep::GetPolicy).count();
        assert_eq!(fetches, 2);
        let read = run_flow(&w.inputs(false), fixtures::SUBJECT_ID, fixtures::OBJECT_ID, ActionFlags::only(Action::Read), NOW);
        assert_eq!(read.steps.iter().filter(|s| s.step == FlowStep::GetPolicy).count(), 1);
    }

    #[test]
    fn records_are_visible_to_both_parties() {
        let mut log = AccessLog::default();
        log.push(AccessRecord {
            seq: 7,
            request_hash: "00".into(),
            subject: fixtures::SUBJECT_ID,
            object: fixtures::OBJECT_ID,
            actions: ActionFlags::only(Action::Read),
            now: NOW,
            decision: AccessDecision::PERMIT,
        });
        assert_eq!(log.for_account(fixtures::SUBJECT_ID).count(), 1);
        assert_eq!(log.for_account(fixtures::OBJECT_ID).count(), 1);
        assert_eq!(log.for_account(fixtures::ADMIN_ID).count(), 0);
    }
}
