use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AbacError;

/// Size limits for one side (subject or object) of the attribute space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttrBounds {
    pub max_entries: usize,
    pub max_chars: usize,
}

impl AttrBounds {
    pub const fn new(max_entries: usize, max_chars: usize) -> Self {
        Self { max_entries, max_chars }
    }
}

impl Default for AttrBounds {
    fn default() -> Self {
        Self::new(6, 10)
    }
}

/// An ordered list of `(name, value)` pairs with unique names.
///
/// An empty value is a wildcard when the set sits inside a policy and means
/// "absent" when the set describes a subject or object record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AttributeSet {
    entries: Vec<(String, String)>,
}

impl AttributeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from pairs, rejecting repeated names.
    pub fn from_pairs<I, N, V>(pairs: I) -> Result<Self, AbacError>
    where
        I: IntoIterator<Item = (N, V)>,
        N: Into<String>,
        V: Into<String>,
    {
        let mut set = Self::new();
        for (name, value) in pairs {
            let name = name.into();
            if name.is_empty() {
                return Err(AbacError::EmptyAttributeName);
            }
            if set.get(&name).is_some() {
                return Err(AbacError::DuplicateAttribute(name));
            }
            set.entries.push((name, value.into()));
        }
        Ok(set)
    }

    /// Parses `name=value` tokens. A token without `=` is rejected; `name=` is a wildcard.
    pub fn parse_assignments<S: AsRef<str>>(tokens: &[S]) -> Result<Self, AbacError> {
        let pairs = tokens
            .iter()
            .map(|t| {
                let t = t.as_ref();
                t.split_once('=')
                    .map(|(n, v)| (n.trim().to_owned(), v.to_owned()))
                    .ok_or_else(|| AbacError::MalformedAssignment(t.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_pairs(pairs)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    /// Value of `name` in record mode: an empty value counts as absent.
    pub fn present(&self, name: &str) -> Option<&str> {
        self.get(name).filter(|v| !v.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v.as_str()))
    }

    /// Inserts or overwrites; returns the previous value.
    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<String>) -> Option<String> {
        let name = name.into();
        let value = value.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some((_, v)) => Some(std::mem::replace(v, value)),
            None => {
                self.entries.push((name, value));
                None
            }
        }
    }

    pub fn remove(&mut self, name: &str) -> Option<String> {
        let pos = self.entries.iter().position(|(n, _)| n == name)?;
        Some(self.entries.remove(pos).1)
    }

    /// Overwrites per name with the entries of `other`, appending new names.
    pub fn merge_from(&mut self, other: &AttributeSet) {
        for (n, v) in other.iter() {
            self.insert(n, v);
        }
    }

    pub fn check_bounds(&self, bounds: AttrBounds) -> Result<(), AbacError> {
        if self.entries.len() > bounds.max_entries {
            return Err(AbacError::TooManyAttributes {
                count: self.entries.len(),
                max: bounds.max_entries,
            });
        }
        for (name, value) in &self.entries {
            check_value(name, value, bounds)?;
        }
        Ok(())
    }

    /// Total character count of all values.
    pub fn value_chars(&self) -> usize {
        self.entries.iter().map(|(_, v)| v.chars().count()).sum()
    }
}

pub(crate) fn check_value(name: &str, value: &str, bounds: AttrBounds) -> Result<(), AbacError> {
    let chars = value.chars().count();
    if chars > bounds.max_chars {
        return Err(AbacError::ValueTooLong {
            name: name.to_owned(),
            chars,
            max: bounds.max_chars,
        });
    }
    Ok(())
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}: {v:?}")?;
        }
        f.write_str("}")
    }
}

// Serialized as an array of `[name, value]` pairs so insertion order survives.
impl Serialize for AttributeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AttributeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(String, String)>::deserialize(deserializer)?;
        Self::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

/// Partial match: every non-wildcard entry of `policy_attrs` appears verbatim in `presented`.
pub fn attrs_match_partial(policy_attrs: &AttributeSet, presented: &AttributeSet) -> bool {
    policy_attrs
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .all(|(n, v)| presented.present(n) == Some(v))
}

/// Complete match: identical `(name, value)` entries, empty values included, in any order.
pub fn attrs_match_complete(a: &AttributeSet, b: &AttributeSet) -> bool {
    a.len() == b.len() && a.iter().all(|(n, v)| b.get(n) == Some(v))
}
