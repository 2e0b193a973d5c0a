use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ContractError;
use crate::abac::{check_value, normalize_record, normalize_record_value, AccountId, AttrBounds, AttributeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Subject,
    Object,
}

/// Storage of the subject and object attribute contracts: one attribute
/// record per account.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeRegistry {
    side: Side,
    records: BTreeMap<AccountId, AttributeSet>,
}

impl AttributeRegistry {
    pub fn new(side: Side) -> Self {
        Self { side, records: BTreeMap::new() }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn get(&self, id: &AccountId) -> Result<&AttributeSet, ContractError> {
        self.records.get(id).ok_or_else(|| self.missing(*id))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AccountId, &AttributeSet)> {
        self.records.iter()
    }

    fn missing(&self, id: AccountId) -> ContractError {
        match self.side {
            Side::Subject => ContractError::NoSuchSubject(id),
            Side::Object => ContractError::NoSuchObject(id),
        }
    }

    fn ingest(&self, attrs: &AttributeSet) -> AttributeSet {
        match self.side {
            Side::Subject => normalize_record(attrs),
            Side::Object => attrs.clone(),
        }
    }

    /// Creates the record or overwrites its attributes name by name.
    pub fn add(&mut self, id: AccountId, attrs: &AttributeSet, bounds: AttrBounds) -> Result<(), ContractError> {
        let incoming = self.ingest(attrs);
        let mut merged = self.records.get(&id).cloned().unwrap_or_default();
        merged.merge_from(&incoming);
        merged.check_bounds(bounds)?;
        self.records.insert(id, merged);
        Ok(())
    }

    /// Rewrites one existing attribute; returns the stored value.
    pub fn update(
        &mut self,
        id: AccountId,
        name: &str,
        value: &str,
        bounds: AttrBounds,
    ) -> Result<String, ContractError> {
        let value = match self.side {
            Side::Subject => normalize_record_value(name, value),
            Side::Object => value.to_owned(),
        };
        let record = self.records.get(&id).ok_or_else(|| self.missing(id))?;
        if record.get(name).is_none() {
            return Err(ContractError::NoSuchAttribute { id, name: name.to_owned() });
        }
        check_value(name, &value, bounds)?;
        let record = self.records.get_mut(&id).expect("checked above");
        record.insert(name, value.clone());
        Ok(value)
    }

    /// Removes one attribute. The record itself stays, possibly empty.
    pub fn delete(&mut self, id: AccountId, name: &str) -> Result<(), ContractError> {
        let missing = self.missing(id);
        let record = self.records.get_mut(&id).ok_or(missing)?;
        record
            .remove(name)
            .map(|_| ())
            .ok_or_else(|| ContractError::NoSuchAttribute { id, name: name.to_owned() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abac::{fixtures, AbacError};

    #[test]
    fn subject_roles_are_normalized() {
        let mut r = AttributeRegistry::new(Side::Subject);
        r.add(fixtures::SUBJECT_ID, &fixtures::student_subject(), AttrBounds::default()).unwrap();
        assert_eq!(r.get(&fixtures::SUBJECT_ID).unwrap(), &fixtures::student_subject_normalized());
        assert_eq!(
            r.update(fixtures::SUBJECT_ID, "Role", "staff", AttrBounds::default()).unwrap(),
            "Staff"
        );
    }

    #[test]
    fn object_values_are_kept_verbatim() {
        let mut r = AttributeRegistry::new(Side::Object);
        let attrs = AttributeSet::from_pairs([("Role", "lamp")]).unwrap();
        r.add(fixtures::OBJECT_ID, &attrs, AttrBounds::default()).unwrap();
        assert_eq!(r.get(&fixtures::OBJECT_ID).unwrap(), &attrs);
    }

    #[test]
    fn upsert_merges_and_is_idempotent() {
        let mut r = AttributeRegistry::new(Side::Subject);
        let id = fixtures::SUBJECT_ID;
        r.add(id, &fixtures::student_subject(), AttrBounds::default()).unwrap();
        let before = r.clone();
        r.add(id, &fixtures::student_subject(), AttrBounds::default()).unwrap();
        assert_eq!(r, before);
        r.add(id, &AttributeSet::from_pairs([("Lab", "NET")]).unwrap(), AttrBounds::default())
            .unwrap();
        assert_eq!(r.get(&id).unwrap().get("Lab"), Some("NET"));
        assert_eq!(r.get(&id).unwrap().len(), 6);
    }

    #[test]
    fn merge_that_overflows_is_rejected_without_change() {
        let mut r = AttributeRegistry::new(Side::Subject);
        let id = fixtures::SUBJECT_ID;
        r.add(id, &fixtures::student_subject(), AttrBounds::default()).unwrap();
        let before = r.clone();
        let err = r
            .add(id, &AttributeSet::from_pairs([("Extra", "x")]).unwrap(), AttrBounds::default())
            .unwrap_err();
        assert_eq!(err, ContractError::Attribute(AbacError::TooManyAttributes { count: 7, max: 6 }));
        assert_eq!(r, before);
    }

    #[test]
    fn update_and_delete_errors() {
        let mut r = AttributeRegistry::new(Side::Subject);
        let id = fixtures::SUBJECT_ID;
        let b = AttrBounds::default();
        assert_eq!(r.update(id, "Role", "x", b), Err(ContractError::NoSuchSubject(id)));
        r.add(id, &fixtures::student_subject(), b).unwrap();
        assert!(matches!(r.update(id, "Hobby", "x", b), Err(ContractError::NoSuchAttribute { .. })));
        assert!(r.update(id, "Role", "professor1", b).is_ok());
        assert!(matches!(
            r.update(id, "Role", "professor12", b),
            Err(ContractError::Attribute(AbacError::ValueTooLong { .. }))
        ));
        r.delete(id, "Lab").unwrap();
        assert!(matches!(r.delete(id, "Lab"), Err(ContractError::NoSuchAttribute { .. })));
    }

    #[test]
    fn deleting_last_attribute_keeps_record() {
        let mut r = AttributeRegistry::new(Side::Object);
        let id = fixtures::OBJECT_ID;
        r.add(id, &AttributeSet::from_pairs([("Place", "Room1")]).unwrap(), AttrBounds::default())
            .unwrap();
        r.delete(id, "Place").unwrap();
        assert!(r.get(&id).unwrap().is_empty());
    }
}
