use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AbacError, AttrBounds, AttributeSet};

/// Seconds since the Unix epoch.
pub type UnixTime = u64;

/// Time window attached to a policy. Mode 0 disables the window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeContext {
    pub mode: u8,
    #[serde(default)]
    pub start_time: UnixTime,
    #[serde(default)]
    pub end_time: UnixTime,
}

impl TimeContext {
    pub const fn always() -> Self {
        Self { mode: 0, start_time: 0, end_time: 0 }
    }

    pub const fn window(start_time: UnixTime, end_time: UnixTime) -> Self {
        Self { mode: 1, start_time, end_time }
    }

    pub fn validate(&self) -> Result<(), AbacError> {
        match self.mode {
            0 => Ok(()),
            1 if self.start_time <= self.end_time => Ok(()),
            1 => Err(AbacError::InvertedTimeWindow {
                start: self.start_time,
                end: self.end_time,
            }),
            m => Err(AbacError::InvalidTimeMode(m)),
        }
    }

    /// Closed interval check; always true in mode 0.
    pub fn admits(&self, now: UnixTime) -> bool {
        self.mode == 0 || (self.start_time <= now && now <= self.end_time)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Read,
    Write,
    Execute,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Read, Action::Write, Action::Execute];

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Read => "read",
            Action::Write => "write",
            Action::Execute => "execute",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Action {
    type Err = AbacError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "read" => Ok(Action::Read),
            "write" => Ok(Action::Write),
            "execute" => Ok(Action::Execute),
            _ => Err(AbacError::UnknownAction(s.to_owned())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFlags {
    #[serde(default)]
    pub read: bool,
    #[serde(default)]
    pub write: bool,
    #[serde(default)]
    pub execute: bool,
}

impl ActionFlags {
    pub const fn new(read: bool, write: bool, execute: bool) -> Self {
        Self { read, write, execute }
    }

    pub fn only(action: Action) -> Self {
        let mut flags = Self::default();
        flags.set(action, true);
        flags
    }

    pub fn allows(&self, action: Action) -> bool {
        match action {
            Action::Read => self.read,
            Action::Write => self.write,
            Action::Execute => self.execute,
        }
    }

    pub fn set(&mut self, action: Action, on: bool) {
        match action {
            Action::Read => self.read = on,
            Action::Write => self.write = on,
            Action::Execute => self.execute = on,
        }
    }

    /// Requested actions in read, write, execute order.
    pub fn requested(&self) -> impl Iterator<Item = Action> + '_ {
        Action::ALL.into_iter().filter(|a| self.allows(*a))
    }

    pub fn is_empty(&self) -> bool {
        !(self.read || self.write || self.execute)
    }
}

impl FromIterator<Action> for ActionFlags {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        let mut flags = Self::default();
        for a in iter {
            flags.set(a, true);
        }
        flags
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Policy {
    pub sa: AttributeSet,
    pub oa: AttributeSet,
    pub actions: ActionFlags,
    pub context: TimeContext,
}

impl Policy {
    pub fn validate(&self, subject: AttrBounds, object: AttrBounds) -> Result<(), AbacError> {
        self.sa.check_bounds(subject)?;
        self.oa.check_bounds(object)?;
        self.context.validate()
    }
}
