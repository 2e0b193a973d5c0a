//! Strategies over a small attribute alphabet and the decision-engine
//! properties checked against them.

use abac_chain::abac::{
    attrs_match_complete, attrs_match_partial, decide, evaluate_request, policy_applies, AccessDecision, ActionFlags,
    AttributeSet, Policy, Reason, TimeContext, UnixTime,
};
use proptest::collection::{btree_map, vec};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const NAMES: [&str; 5] = ["Name", "Org", "Dep", "Lab", "Role"];
pub const VALUES: [&str; 4] = ["", "a", "b", "c"];

pub fn attrs() -> impl Strategy<Value = AttributeSet> {
    btree_map(prop::sample::select(&NAMES[..]), prop::sample::select(&VALUES[..]), 0..=NAMES.len())
        .prop_map(|m| AttributeSet::from_pairs(m).expect("map keys are distinct"))
}

pub fn actions() -> impl Strategy<Value = ActionFlags> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(r, w, x)| ActionFlags::new(r, w, x))
}

pub fn context() -> impl Strategy<Value = TimeContext> {
    prop_oneof![
        Just(TimeContext::always()),
        (0u64..20, 0u64..20).prop_map(|(a, len)| TimeContext::window(a, a + len)),
    ]
}

pub fn policy() -> impl Strategy<Value = Policy> {
    (attrs(), attrs(), actions(), context()).prop_map(|(sa, oa, actions, context)| Policy { sa, oa, actions, context })
}

/// Inputs for a whole decision: subject, object, policies, request and time.
pub fn decision_case() -> impl Strategy<Value = (AttributeSet, AttributeSet, Vec<Policy>, ActionFlags, UnixTime)> {
    (attrs(), attrs(), vec(policy(), 0..6), actions(), 0u64..45)
}

/// A partial match holds exactly when every non-empty policy entry is present verbatim.
pub fn subset_soundness(p: &AttributeSet, s: &AttributeSet) -> Result<(), TestCaseError> {
    let expected = p.iter().filter(|(_, v)| !v.is_empty()).all(|(n, v)| s.get(n) == Some(v));
    prop_assert_eq!(attrs_match_partial(p, s), expected);
    Ok(())
}

/// Adding or removing wildcard entries never changes a partial match.
pub fn wildcard_neutrality(p: &AttributeSet, s: &AttributeSet, name: &str) -> Result<(), TestCaseError> {
    let base = attrs_match_partial(p, s);
    let mut widened = p.clone();
    if widened.get(name).is_none() {
        widened.insert(name, "");
        prop_assert_eq!(attrs_match_partial(&widened, s), base);
    }
    let stripped = AttributeSet::from_pairs(p.iter().filter(|(_, v)| !v.is_empty())).unwrap();
    prop_assert_eq!(attrs_match_partial(&stripped, s), base);
    Ok(())
}

/// More presented attributes or fewer policy constraints never break a match.
pub fn monotonicity(p: &AttributeSet, s: &AttributeSet, extra: &AttributeSet) -> Result<(), TestCaseError> {
    if !attrs_match_partial(p, s) {
        return Ok(());
    }
    let mut grown = s.clone();
    for (n, v) in extra.iter() {
        if grown.get(n).is_none() {
            grown.insert(n, v);
        }
    }
    prop_assert!(attrs_match_partial(p, &grown));
    for (n, _) in p.iter() {
        let mut fewer = p.clone();
        fewer.remove(n);
        prop_assert!(attrs_match_partial(&fewer, s));
    }
    Ok(())
}

/// Complete match is an equivalence that ignores entry order.
pub fn complete_match_equivalence(a: &AttributeSet, b: &AttributeSet) -> Result<(), TestCaseError> {
    prop_assert!(attrs_match_complete(a, a));
    prop_assert_eq!(attrs_match_complete(a, b), attrs_match_complete(b, a));
    let reversed = AttributeSet::from_pairs(a.iter().collect::<Vec<_>>().into_iter().rev()).unwrap();
    prop_assert!(attrs_match_complete(a, &reversed));
    if attrs_match_complete(a, b) {
        prop_assert!(attrs_match_partial(a, b));
    }
    Ok(())
}

/// `decide` agrees with a brute-force scan written from the rules directly.
pub fn decide_matches_rescan(
    s: &AttributeSet,
    o: &AttributeSet,
    policies: &[Policy],
    actions: ActionFlags,
    now: UnixTime,
) -> Result<(), TestCaseError> {
    let applicable: Vec<&Policy> = policies.iter().filter(|p| policy_applies(p, s, o)).collect();
    let expected = if applicable.is_empty() {
        AccessDecision::deny(Reason::NoMatchingPolicy)
    } else if applicable.iter().any(|p| rescan_permits(p, actions, now)) {
        AccessDecision::PERMIT
    } else {
        evaluate_request(applicable[0], actions, now)
    };
    let got = decide(s, o, policies, actions, now);
    prop_assert_eq!(got, expected);
    prop_assert_eq!(got.permitted, got.reason == Reason::Permit);
    Ok(())
}

fn rescan_permits(p: &Policy, actions: ActionFlags, now: UnixTime) -> bool {
    let wanted = [(actions.read, p.actions.read), (actions.write, p.actions.write), (actions.execute, p.actions.execute)];
    let any = wanted.iter().any(|(w, _)| *w);
    let allowed = wanted.iter().all(|(w, a)| !w || *a);
    let in_window = p.context.mode == 0 || (p.context.start_time <= now && now <= p.context.end_time);
    any && allowed && in_window
}
