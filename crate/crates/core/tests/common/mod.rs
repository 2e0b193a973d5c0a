//! Random sessions and an independent reference model for them.
//!
//! The reference keeps its own copy of the state with plain maps and prices
//! calls from literal constants at the default bounds (6 attributes, 10
//! characters), so it shares no code with the gas module.

#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use abac_chain::abac::{AccountId, Action, ActionFlags, AttributeSet, Policy, Reason, TimeContext, UnixTime};
use abac_chain::chain::{CallOutput, Chain, ChainError};
use abac_chain::contracts::Call;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ADMIN: AccountId = AccountId::from_bytes([0xad; 20]);
pub const STRANGER: AccountId = AccountId::from_bytes([0x55; 20]);

const NAMES: [&str; 7] = ["Name", "Org", "Dep", "Lab", "Role", "Place", "Others"];
const VALUES: [&str; 7] = ["", "NAIST", "IS", "student", "Staff", "Room1", "abcdefghij"];
const TOO_LONG: &str = "abcdefghijk";

pub fn account(tag: u8, i: u8) -> AccountId {
    let mut b = [0u8; 20];
    b[0] = tag;
    b[19] = i;
    AccountId::from_bytes(b)
}

pub struct SessionGen {
    rng: ChaCha8Rng,
    now: UnixTime,
}

impl SessionGen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), now: 1_000 }
    }

    fn subject(&mut self) -> AccountId {
        account(0x5b, self.rng.gen_range(0..4))
    }

    fn object(&mut self) -> AccountId {
        account(0x0b, self.rng.gen_range(0..4))
    }

    fn value(&mut self) -> String {
        if self.rng.gen_ratio(1, 40) {
            TOO_LONG.to_owned()
        } else {
            VALUES.choose(&mut self.rng).unwrap().to_string()
        }
    }

    pub fn attrs(&mut self, max: usize) -> AttributeSet {
        let count = self.rng.gen_range(0..=max);
        let mut names = NAMES.to_vec();
        names.shuffle(&mut self.rng);
        let mut set = AttributeSet::new();
        for name in names.into_iter().take(count) {
            let v = self.value();
            set.insert(name, v);
        }
        set
    }

    fn actions(&mut self) -> ActionFlags {
        ActionFlags::new(self.rng.gen(), self.rng.gen(), self.rng.gen_ratio(1, 3))
    }

    pub fn policy(&mut self) -> Policy {
        let context = if self.rng.gen_ratio(1, 3) {
            let start = self.rng.gen_range(0..3_000);
            TimeContext::window(start, start + self.rng.gen_range(0..2_000))
        } else {
            TimeContext::always()
        };
        Policy { sa: self.attrs(4), oa: self.attrs(4), actions: self.actions(), context }
    }

    /// Next call, its sender and its timestamp.
    pub fn next_call(&mut self, policies: &[Policy]) -> (AccountId, Call, UnixTime) {
        self.now += self.rng.gen_range(0..60);
        let existing = |rng: &mut ChaCha8Rng| policies.choose(rng).cloned();
        let call = match self.rng.gen_range(0..100) {
            0..=11 => Call::SubjectAdd { id: self.subject(), attrs: self.attrs(7) },
            12..=21 => Call::ObjectAdd { id: self.object(), attrs: self.attrs(7) },
            22..=27 => {
                let name = NAMES.choose(&mut self.rng).unwrap().to_string();
                Call::SubjectUpdate { id: self.subject(), name, value: self.value() }
            }
            28..=32 => {
                let name = NAMES.choose(&mut self.rng).unwrap().to_string();
                Call::ObjectUpdate { id: self.object(), name, value: self.value() }
            }
            33..=35 => {
                let name = NAMES.choose(&mut self.rng).unwrap().to_string();
                Call::SubjectDelete { id: self.subject(), name }
            }
            36..=38 => {
                let name = NAMES.choose(&mut self.rng).unwrap().to_string();
                Call::ObjectDelete { id: self.object(), name }
            }
            39..=52 => Call::PolicyAdd { policy: self.policy() },
            53..=57 => {
                let index = self.rng.gen_range(0..=policies.len());
                Call::PolicyUpdate { index, policy: self.policy() }
            }
            58..=62 => {
                let policy = existing(&mut self.rng).unwrap_or_else(|| self.policy());
                Call::PolicyDelete { policy }
            }
            63..=67 => {
                let p = existing(&mut self.rng).unwrap_or_else(|| self.policy());
                Call::FindExactMatchPolicy { sa: p.sa, oa: p.oa }
            }
            68..=72 => Call::FindMatchPolicy { sa: self.attrs(3), oa: self.attrs(3) },
            _ => {
                let actions = if self.rng.gen_ratio(1, 30) { ActionFlags::default() } else { self.actions() };
                Call::AccessControl { subject: self.subject(), object: self.object(), actions }
            }
        };
        let sender = if matches!(call, Call::AccessControl { .. }) || self.rng.gen_ratio(1, 25) {
            if self.rng.gen() { STRANGER } else { ADMIN }
        } else {
            ADMIN
        };
        (sender, call, self.now)
    }
}

/// A deployed chain followed by `calls` random calls. Contract failures are
/// expected and logged; anything else is a bug.
pub fn random_chain(seed: u64, calls: usize) -> Chain {
    let mut chain = Chain::with_defaults();
    chain.deploy_abac(ADMIN).unwrap();
    let mut gen = SessionGen::new(seed);
    for _ in 0..calls {
        let (sender, call, now) = gen.next_call(chain.policies().unwrap());
        match chain.call_at(sender, call, now) {
            Ok(_) | Err(ChainError::Tx(_)) => {}
            Err(e) => panic!("unexpected chain error: {e}"),
        }
    }
    chain
}

fn normalize(name: &str, value: &str) -> String {
    if name == "Role" {
        let mut c = value.chars();
        match c.next() {
            Some(f) => f.to_uppercase().chain(c).collect(),
            None => String::new(),
        }
    } else {
        value.to_owned()
    }
}

type Record = BTreeMap<String, String>;

fn record(attrs: &AttributeSet) -> Record {
    attrs.iter().map(|(n, v)| (n.to_owned(), v.to_owned())).collect()
}

fn partial(policy: &AttributeSet, presented: &Record) -> bool {
    policy
        .iter()
        .all(|(n, v)| v.is_empty() || presented.get(n).is_some_and(|p| p == v))
}

fn complete(a: &AttributeSet, b: &AttributeSet) -> bool {
    record(a) == record(b) && a.len() == b.len()
}

/// Reference state and price list.
#[derive(Default)]
pub struct Reference {
    subjects: BTreeMap<AccountId, Record>,
    objects: BTreeMap<AccountId, Record>,
    policies: Vec<Policy>,
    policy_add_done: bool,
    get_subject_done: bool,
    get_object_done: bool,
}

/// Expected result of a call, assuming it succeeds.
pub struct Expected {
    pub gas: u64,
    pub reason: Option<Reason>,
}

impl Reference {
    fn find_gas(&self) -> u64 {
        57_495 + 48_000 + 7_680 + 10_518 * self.policies.len() as u64
    }

    /// Price of `call` against the current reference state.
    pub fn expect(&self, call: &Call, now: UnixTime) -> Expected {
        let gas = |gas| Expected { gas, reason: None };
        match call {
            Call::SubjectAdd { .. } => gas(151_250 + 3_840),
            Call::ObjectAdd { .. } => gas(151_228 + 3_840),
            Call::SubjectUpdate { name, value, .. } => gas(61_250 + 64 * normalize(name, value).chars().count() as u64),
            Call::ObjectUpdate { value, .. } => gas(61_228 + 64 * value.chars().count() as u64),
            Call::SubjectDelete { .. } => gas(26_786),
            Call::ObjectDelete { .. } => gas(26_808),
            Call::PolicyAdd { .. } => gas(401_483 + if self.policy_add_done { 0 } else { 195_000 }),
            Call::PolicyUpdate { index, .. } => gas(7_680 + if *index == 0 { 194_337 } else { 194_401 }),
            Call::PolicyDelete { policy } => {
                let index = self.policies.iter().position(|p| complete(&p.sa, &policy.sa) && complete(&p.oa, &policy.oa));
                gas(if index == Some(0) { 51_529 } else { 51_561 })
            }
            Call::FindMatchPolicy { .. } | Call::FindExactMatchPolicy { .. } => gas(self.find_gas()),
            Call::AccessControl { subject, object, actions } => self.expect_access(*subject, *object, *actions, now),
            Call::AclPolicyAdd { .. } => gas(238_777),
        }
    }

    fn expect_access(&self, subject: AccountId, object: AccountId, actions: ActionFlags, now: UnixTime) -> Expected {
        let Some(s) = self.subjects.get(&subject) else {
            return Expected { gas: 59_467, reason: Some(Reason::UnknownSubject) };
        };
        let mut gas = 59_467 + if self.get_subject_done { 0 } else { 90_000 };
        let Some(o) = self.objects.get(&object) else {
            return Expected { gas: gas + 59_201, reason: Some(Reason::UnknownObject) };
        };
        gas += 59_201 + if self.get_object_done { 0 } else { 90_000 };
        gas += self.find_gas();
        let matched: Vec<&Policy> = self.policies.iter().filter(|p| partial(&p.sa, s) && partial(&p.oa, o)).collect();
        if matched.is_empty() {
            return Expected { gas: gas + 46_780 + 26_640, reason: Some(Reason::NoMatchingPolicy) };
        }
        let mut first_failure = None;
        for p in matched {
            gas += 53_215;
            let reason = if !Action::ALL.iter().filter(|a| actions.allows(**a)).all(|a| p.actions.allows(*a)) {
                Reason::ActionNotAllowed
            } else if p.context.mode == 1 && !(p.context.start_time <= now && now <= p.context.end_time) {
                Reason::OutsideTimeWindow
            } else {
                Reason::Permit
            };
            if reason == Reason::Permit {
                return Expected { gas: gas + 26_932, reason: Some(reason) };
            }
            first_failure.get_or_insert(reason);
        }
        Expected { gas: gas + 26_932, reason: first_failure }
    }

    /// Applies a call the chain accepted.
    pub fn apply(&mut self, call: &Call, output: &CallOutput) {
        match call {
            Call::SubjectAdd { id, attrs } => {
                let r = self.subjects.entry(*id).or_default();
                for (n, v) in attrs.iter() {
                    r.insert(n.to_owned(), normalize(n, v));
                }
            }
            Call::ObjectAdd { id, attrs } => self.objects.entry(*id).or_default().extend(record(attrs)),
            Call::SubjectUpdate { id, name, value } => {
                self.subjects.get_mut(id).unwrap().insert(name.clone(), normalize(name, value));
            }
            Call::ObjectUpdate { id, name, value } => {
                self.objects.get_mut(id).unwrap().insert(name.clone(), value.clone());
            }
            Call::SubjectDelete { id, name } => {
                self.subjects.get_mut(id).unwrap().remove(name);
            }
            Call::ObjectDelete { id, name } => {
                self.objects.get_mut(id).unwrap().remove(name);
            }
            Call::PolicyAdd { policy } => {
                self.policies.push(policy.clone());
                self.policy_add_done = true;
            }
            Call::PolicyUpdate { index, policy } => self.policies[*index] = policy.clone(),
            Call::PolicyDelete { policy } => {
                let i = self
                    .policies
                    .iter()
                    .position(|p| complete(&p.sa, &policy.sa) && complete(&p.oa, &policy.oa))
                    .unwrap();
                self.policies.swap_remove(i);
            }
            Call::AccessControl { .. } => {
                if let CallOutput::Access(a) = output {
                    if a.decision.reason != Reason::UnknownSubject {
                        self.get_subject_done = true;
                    }
                    if !matches!(a.decision.reason, Reason::UnknownSubject | Reason::UnknownObject) {
                        self.get_object_done = true;
                    }
                }
            }
            Call::FindMatchPolicy { .. } | Call::FindExactMatchPolicy { .. } | Call::AclPolicyAdd { .. } => {}
        }
    }

    pub fn policy_count(&self) -> usize {
        self.policies.len()
    }
}
