//! Per-ABI gas formulas and the aggregate cost of onboarding pairs.
//!
//! Every function is exact integer arithmetic over a [`GasScalar`]. The add
//! and search formulas are upper bounds at the configured attribute bounds;
//! the update formulas take the character count of the value written.

use serde::{Deserialize, Serialize};

use super::{CostParams, DeployConstants, GasError, GasReceipt};
use crate::scalar::GasScalar;

/// Storage cost of one character.
pub const GAS_PER_CHAR: u64 = 64;
/// Storage slot initialization.
pub const GAS_PER_SLOT: u64 = 15_000;

pub const SUBJECT_UPDATE_CODE: u64 = 61_250;
pub const OBJECT_UPDATE_CODE: u64 = 61_228;
pub const SUBJECT_DELETE: u64 = 26_786;
pub const OBJECT_DELETE: u64 = 26_808;

pub const POLICY_ADD_CODE: u64 = 213_803;
pub const POLICY_UPDATE_CODE_HEAD: u64 = 194_337;
pub const POLICY_UPDATE_CODE_TAIL: u64 = 194_401;
pub const POLICY_DELETE_HEAD: u64 = 51_529;
pub const POLICY_DELETE_TAIL: u64 = 51_561;

pub const FIND_CODE: u64 = 57_495;
pub const FIND_PER_ATTRIBUTE: u64 = 4_000;
pub const FIND_PER_POLICY: u64 = 10_518;

pub const GET_SUBJECT_CODE: u64 = 59_467;
pub const GET_OBJECT_CODE: u64 = 59_201;
pub const GET_POLICY_FOUND: u64 = 53_215;
pub const GET_POLICY_MISSING: u64 = 46_780;
pub const ACCESS_CHECK_FOUND: u64 = 26_932;
pub const ACCESS_CHECK_MISSING: u64 = 26_640;

/// Half of [`FIND_PER_POLICY`]: the quadratic coefficient of the policy-add sum.
pub const ADD_N_QUADRATIC: u64 = 5_259;
/// `POLICY_ADD_CODE + FIND_CODE + ADD_N_QUADRATIC`.
pub const ADD_N_LINEAR_CODE: u64 = 276_557;

fn g<G: GasScalar>(v: u64) -> G {
    G::lit(v)
}

fn usize_to<G: GasScalar>(v: usize) -> G {
    G::from_usize(v).expect("count exceeds gas scalar range")
}

pub fn subject_add<G: GasScalar>(p: &CostParams) -> Result<GasReceipt<G>, GasError> {
    let storage = u64::from(p.a_s) * u64::from(p.c_s) * GAS_PER_CHAR;
    Ok(GasReceipt::new(g(p.subject_add_code()?), g(storage), G::zero()))
}

pub fn object_add<G: GasScalar>(p: &CostParams) -> Result<GasReceipt<G>, GasError> {
    let storage = u64::from(p.a_o) * u64::from(p.c_o) * GAS_PER_CHAR;
    Ok(GasReceipt::new(g(p.object_add_code()?), g(storage), G::zero()))
}

/// Rewriting one subject attribute with a value of `chars` characters.
pub fn subject_update<G: GasScalar>(chars: usize) -> GasReceipt<G> {
    GasReceipt::new(g(SUBJECT_UPDATE_CODE), usize_to::<G>(chars) * g(GAS_PER_CHAR), G::zero())
}

pub fn object_update<G: GasScalar>(chars: usize) -> GasReceipt<G> {
    GasReceipt::new(g(OBJECT_UPDATE_CODE), usize_to::<G>(chars) * g(GAS_PER_CHAR), G::zero())
}

/// Upper bound of a subject update: a value of `c_s` characters.
pub fn subject_update_bound<G: GasScalar>(p: &CostParams) -> GasReceipt<G> {
    subject_update(p.c_s as usize)
}

pub fn object_update_bound<G: GasScalar>(p: &CostParams) -> GasReceipt<G> {
    object_update(p.c_o as usize)
}

pub fn subject_delete<G: GasScalar>() -> GasReceipt<G> {
    GasReceipt::code(g(SUBJECT_DELETE))
}

pub fn object_delete<G: GasScalar>() -> GasReceipt<G> {
    GasReceipt::code(g(OBJECT_DELETE))
}

pub fn policy_add<G: GasScalar>(p: &CostParams, first_time: bool) -> GasReceipt<G> {
    let storage = GAS_PER_SLOT * p.attr_slots() + GAS_PER_CHAR * p.policy_chars();
    let init = if first_time { GAS_PER_SLOT * (p.attr_slots() + 1) } else { 0 };
    GasReceipt::new(g(POLICY_ADD_CODE), g(storage), g(init))
}

pub fn policy_update<G: GasScalar>(p: &CostParams, index: usize) -> GasReceipt<G> {
    let code = if index == 0 { POLICY_UPDATE_CODE_HEAD } else { POLICY_UPDATE_CODE_TAIL };
    GasReceipt::new(g(code), g(GAS_PER_CHAR * p.policy_chars()), G::zero())
}

pub fn policy_delete<G: GasScalar>(index: usize) -> GasReceipt<G> {
    GasReceipt::code(g(if index == 0 { POLICY_DELETE_HEAD } else { POLICY_DELETE_TAIL }))
}

/// Searching a policy list of length `list_len`.
pub fn find_policy<G: GasScalar>(p: &CostParams, list_len: usize) -> GasReceipt<G> {
    let fixed = FIND_CODE + FIND_PER_ATTRIBUTE * p.attr_slots() + GAS_PER_CHAR * p.policy_chars();
    GasReceipt::code(g::<G>(fixed) + usize_to::<G>(list_len) * g(FIND_PER_POLICY))
}

pub fn get_subject<G: GasScalar>(p: &CostParams, first_time: bool) -> GasReceipt<G> {
    let init = if first_time { GAS_PER_SLOT * u64::from(p.a_s) } else { 0 };
    GasReceipt::new(g(GET_SUBJECT_CODE), G::zero(), g(init))
}

pub fn get_object<G: GasScalar>(p: &CostParams, first_time: bool) -> GasReceipt<G> {
    let init = if first_time { GAS_PER_SLOT * u64::from(p.a_o) } else { 0 };
    GasReceipt::new(g(GET_OBJECT_CODE), G::zero(), g(init))
}

pub fn get_policy<G: GasScalar>(found: bool) -> GasReceipt<G> {
    GasReceipt::code(g(if found { GET_POLICY_FOUND } else { GET_POLICY_MISSING }))
}

pub fn access_check<G: GasScalar>(found: bool) -> GasReceipt<G> {
    GasReceipt::code(g(if found { ACCESS_CHECK_FOUND } else { ACCESS_CHECK_MISSING }))
}

/// Steady-state gas of one access request against a list of `list_len`
/// policies with a single fetched policy.
pub fn access_flow<G: GasScalar>(
    p: &CostParams,
    list_len: usize,
    found: bool,
    first_time: bool,
) -> GasReceipt<G> {
    get_subject(p, first_time)
        + get_object(p, first_time)
        + find_policy(p, list_len)
        + get_policy(found)
        + access_check(found)
}

/// Cost of adding `n` distinct policies to an empty list, each preceded by a
/// duplicate search, computed two ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddPoliciesCost<G> {
    pub literal: G,
    pub closed_form: G,
}

pub fn add_n_policies<G: GasScalar>(n: usize, p: &CostParams, first_time: bool) -> AddPoliciesCost<G> {
    let literal = (1..=n)
        .map(|k| policy_add::<G>(p, first_time && k == 1).total() + find_policy::<G>(p, k).total())
        .sum();
    AddPoliciesCost { literal, closed_form: add_n_policies_closed_form(n, p, first_time) }
}

/// `5,259·n² + (276,557 + 19,000·(A_s+A_o) + 128·chars)·n` plus the one-off
/// initialization when the list has never been written.
pub fn add_n_policies_closed_form<G: GasScalar>(n: usize, p: &CostParams, first_time: bool) -> G {
    if n == 0 {
        return G::zero();
    }
    let n: G = usize_to(n);
    let per_policy = ADD_N_LINEAR_CODE
        + (GAS_PER_SLOT + FIND_PER_ATTRIBUTE) * p.attr_slots()
        + 2 * GAS_PER_CHAR * p.policy_chars();
    let init = if first_time { GAS_PER_SLOT * (p.attr_slots() + 1) } else { 0 };
    g::<G>(ADD_N_QUADRATIC) * n * n + g::<G>(per_policy) * n + g(init)
}

/// How many policy searches accompany the onboarding of `m` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// One search per added policy over lists of length 1..=n.
    PerPolicy,
    /// One search per pair; pair `j` searches a list of length `⌈j·n/m⌉`.
    PerPair,
}

pub fn search_cost<G: GasScalar>(m: usize, n: usize, p: &CostParams, mode: SearchMode) -> G {
    match mode {
        SearchMode::PerPolicy => (1..=n).map(|k| find_policy::<G>(p, k).total()).sum(),
        SearchMode::PerPair if m == 0 => G::zero(),
        SearchMode::PerPair => (1..=m)
            .map(|j| find_policy::<G>(p, (j * n).div_ceil(m)).total())
            .sum(),
    }
}

/// Onboarding `m` subject-object pairs that need `n` new policies.
pub fn pairs_cost<G: GasScalar>(
    m: usize,
    n: usize,
    p: &CostParams,
    mode: SearchMode,
    first_time: bool,
) -> Result<G, GasError> {
    if n > m {
        return Err(GasError::MorePoliciesThanPairs { m, n });
    }
    let attrs = (subject_add::<G>(p)? + object_add::<G>(p)?).total() * usize_to(m);
    let adds = policy_add::<G>(p, false).total() * usize_to(n)
        + if first_time && n > 0 { policy_add::<G>(p, true).init_cost } else { G::zero() };
    Ok(attrs + adds + search_cost(m, n, p, mode))
}

/// ACL baseline: one contract and one policy per pair.
pub fn acl_pairs_cost<G: GasScalar>(m: usize, d: &DeployConstants) -> G {
    g::<G>(d.acl_per_pair()) * usize_to(m)
}
