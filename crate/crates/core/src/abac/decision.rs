use std::fmt;

use serde::{Deserialize, Serialize};

use super::{attrs_match_partial, Action, ActionFlags, AttributeSet, Policy, UnixTime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    Permit,
    NoMatchingPolicy,
    ActionNotAllowed,
    OutsideTimeWindow,
    UnknownSubject,
    UnknownObject,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of an access evaluation. `permitted` holds iff `reason == Permit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AccessDecision {
    pub permitted: bool,
    pub reason: Reason,
}

impl AccessDecision {
    pub const PERMIT: Self = Self { permitted: true, reason: Reason::Permit };

    pub fn from_reason(reason: Reason) -> Self {
        Self { permitted: reason == Reason::Permit, reason }
    }

    pub fn deny(reason: Reason) -> Self {
        debug_assert_ne!(reason, Reason::Permit);
        Self::from_reason(reason)
    }
}

/// Evaluates one action against a policy whose attributes already matched.
/// The action check comes before the time check.
pub fn evaluate(policy: &Policy, action: Action, now: UnixTime) -> AccessDecision {
    if !policy.actions.allows(action) {
        AccessDecision::deny(Reason::ActionNotAllowed)
    } else if !policy.context.admits(now) {
        AccessDecision::deny(Reason::OutsideTimeWindow)
    } else {
        AccessDecision::PERMIT
    }
}

/// Every requested action must be permitted by this one policy. All actions
/// are checked before the time window, as in [`evaluate`].
pub fn evaluate_request(policy: &Policy, actions: ActionFlags, now: UnixTime) -> AccessDecision {
    if actions.is_empty() || !actions.requested().all(|a| policy.actions.allows(a)) {
        return AccessDecision::deny(Reason::ActionNotAllowed);
    }
    actions
        .requested()
        .map(|a| evaluate(policy, a, now))
        .find(|d| !d.permitted)
        .unwrap_or(AccessDecision::PERMIT)
}

/// Whether a policy applies to this subject/object pair.
pub fn policy_applies(policy: &Policy, subject: &AttributeSet, object: &AttributeSet) -> bool {
    attrs_match_partial(&policy.sa, subject) && attrs_match_partial(&policy.oa, object)
}

/// Scans the policies in order. Any permitting match wins; otherwise the
/// first attribute-matching policy's failure is reported.
pub fn decide<'a, I>(
    subject: &AttributeSet,
    object: &AttributeSet,
    policies: I,
    actions: ActionFlags,
    now: UnixTime,
) -> AccessDecision
where
    I: IntoIterator<Item = &'a Policy>,
{
    let mut first_failure = None;
    for policy in policies {
        if !policy_applies(policy, subject, object) {
            continue;
        }
        let d = evaluate_request(policy, actions, now);
        if d.permitted {
            return d;
        }
        first_failure.get_or_insert(d);
    }
    first_failure.unwrap_or(AccessDecision::deny(Reason::NoMatchingPolicy))
}
