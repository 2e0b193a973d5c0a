//! Attribute-based access control domain model.
//!
//! Attributes, policies, the two matching predicates and the access decision
//! function. Nothing here knows about contracts or gas.

mod account;
mod attrs;
mod decision;
pub mod fixtures;
mod policy;

use thiserror::Error;

pub use account::AccountId;
pub use attrs::{attrs_match_complete, attrs_match_partial, AttrBounds, AttributeSet};
pub(crate) use attrs::check_value;
pub use decision::{decide, evaluate, evaluate_request, policy_applies, AccessDecision, Reason};
pub use policy::{Action, ActionFlags, Policy, TimeContext, UnixTime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbacError {
    #[error("invalid account id {0:?}: expected 0x followed by 40 hex digits")]
    InvalidAccountId(String),
    #[error("attribute name must not be empty")]
    EmptyAttributeName,
    #[error("duplicate attribute name {0:?}")]
    DuplicateAttribute(String),
    #[error("malformed attribute assignment {0:?}, expected name=value")]
    MalformedAssignment(String),
    #[error("{count} attributes exceed the bound of {max}")]
    TooManyAttributes { count: usize, max: usize },
    #[error("attribute {name:?} has {chars} characters, bound is {max}")]
    ValueTooLong { name: String, chars: usize, max: usize },
    #[error("time context mode must be 0 or 1, got {0}")]
    InvalidTimeMode(u8),
    #[error("time window start {start} is after end {end}")]
    InvertedTimeWindow { start: UnixTime, end: UnixTime },
    #[error("unknown action {0:?}")]
    UnknownAction(String),
}

/// The attribute whose value gets its first letter upper-cased on ingestion.
pub const ROLE_ATTRIBUTE: &str = "Role";

/// Upper-cases the first letter of a `Role` value; other attributes pass through.
pub fn normalize_record_value(name: &str, value: &str) -> String {
    if name != ROLE_ATTRIBUTE {
        return value.to_owned();
    }
    let mut chars = value.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Applies [`normalize_record_value`] to every entry of a subject record.
pub fn normalize_record(attrs: &AttributeSet) -> AttributeSet {
    let mut out = AttributeSet::new();
    for (n, v) in attrs.iter() {
        out.insert(n, normalize_record_value(n, v));
    }
    out
}
