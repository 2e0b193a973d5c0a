use serde::{Deserialize, Serialize};

use super::ContractError;
use crate::abac::{attrs_match_complete, attrs_match_partial, AttrBounds, AttributeSet, Policy};

/// Storage of the policy contract. Indices are positions and are not
/// stable across deletes, which swap the last policy into the hole.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyList {
    items: Vec<Policy>,
}

impl PolicyList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Policy] {
        &self.items
    }

    pub fn get(&self, index: usize) -> Result<&Policy, ContractError> {
        self.items
            .get(index)
            .ok_or(ContractError::IndexOutOfRange { index, len: self.items.len() })
    }

    /// Lowest index whose subject and object sets both match exactly.
    pub fn find_exact(&self, sa: &AttributeSet, oa: &AttributeSet) -> Option<usize> {
        self.items
            .iter()
            .position(|p| attrs_match_complete(&p.sa, sa) && attrs_match_complete(&p.oa, oa))
    }

    /// Ascending indices of every policy whose constraints the presented sets satisfy.
    pub fn find_match(&self, sa: &AttributeSet, oa: &AttributeSet) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, p)| attrs_match_partial(&p.sa, sa) && attrs_match_partial(&p.oa, oa))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&mut self, policy: Policy, subject: AttrBounds, object: AttrBounds) -> Result<usize, ContractError> {
        policy.validate(subject, object)?;
        if let Some(index) = self.find_exact(&policy.sa, &policy.oa) {
            return Err(ContractError::DuplicatePolicy { index });
        }
        self.items.push(policy);
        Ok(self.items.len() - 1)
    }

    pub fn update(
        &mut self,
        index: usize,
        policy: Policy,
        subject: AttrBounds,
        object: AttrBounds,
    ) -> Result<(), ContractError> {
        self.get(index)?;
        policy.validate(subject, object)?;
        let clash = self.items.iter().enumerate().find(|(i, p)| {
            *i != index && attrs_match_complete(&p.sa, &policy.sa) && attrs_match_complete(&p.oa, &policy.oa)
        });
        if let Some((other, _)) = clash {
            return Err(ContractError::DuplicatePolicy { index: other });
        }
        self.items[index] = policy;
        Ok(())
    }

    /// Removes the exact match of `sa`/`oa`; returns the index it occupied.
    pub fn delete(&mut self, sa: &AttributeSet, oa: &AttributeSet) -> Result<usize, ContractError> {
        let index = self.find_exact(sa, oa).ok_or(ContractError::PolicyNotFound)?;
        self.items.swap_remove(index);
        Ok(index)
    }
}
