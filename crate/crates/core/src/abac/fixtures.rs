//! The worked example used throughout the docs and tests: a student subject,
//! a camera object, and one lab policy with a time window.

use super::{AccountId, ActionFlags, AttributeSet, Policy, TimeContext, UnixTime};

pub const SUBJECT_ID: AccountId = AccountId::from_bytes([
    0x3d, 0x03, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0x01,
]);

pub const OBJECT_ID: AccountId = AccountId::from_bytes([
    0x27, 0x2a, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0x02,
]);

pub const ADMIN_ID: AccountId = AccountId::from_bytes([
    0xad, 0x01, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0x00,
]);

pub const WINDOW_START: UnixTime = 1_563_206_776;
pub const WINDOW_END: UnixTime = 1_575_483_330;

/// Subject record as entered (lower-case role).
pub fn student_subject() -> AttributeSet {
    AttributeSet::from_pairs([
        ("Name", "Alice"),
        ("Org", "NAIST"),
        ("Dep", "IS"),
        ("Lab", "LSM"),
        ("Role", "student"),
        ("Others", ""),
    ])
    .expect("fixture")
}

/// Subject record after role normalization.
pub fn student_subject_normalized() -> AttributeSet {
    AttributeSet::from_pairs([
        ("Name", "Alice"),
        ("Org", "NAIST"),
        ("Dep", "IS"),
        ("Lab", "LSM"),
        ("Role", "Student"),
        ("Others", ""),
    ])
    .expect("fixture")
}

pub fn camera_object() -> AttributeSet {
    AttributeSet::from_pairs([
        ("Name", "Camera"),
        ("Org", "NAIST"),
        ("Dep", "IS"),
        ("Lab", "LSM"),
        ("Place", "Room1"),
        ("Others", ""),
    ])
    .expect("fixture")
}

pub fn lab_policy() -> Policy {
    Policy {
        sa: AttributeSet::from_pairs([
            ("Name", ""),
            ("Org", "NAIST"),
            ("Dep", "IS"),
            ("Lab", "LSM"),
            ("Role", "Student"),
        ])
        .expect("fixture"),
        oa: AttributeSet::from_pairs([
            ("Name", ""),
            ("Org", "NAIST"),
            ("Dep", "IS"),
            ("Lab", "LSM"),
            ("Place", ""),
        ])
        .expect("fixture"),
        actions: ActionFlags::new(true, true, false),
        context: TimeContext::window(WINDOW_START, WINDOW_END),
    }
}
