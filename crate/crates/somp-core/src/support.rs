//! Atom index sets. A support is kept strictly increasing so that set
//! comparisons, serialization, and witness reporting are all canonical.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SupportError {
    #[error("support contains duplicate index {index}")]
    DuplicateIndex { index: usize },
    #[error("support index {index} out of range for {cols} atoms")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("support must not be empty")]
    Empty,
}

/// A set of atom indices, stored sorted ascending. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    /// Builds a support from indices in any order; duplicates are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, SupportError> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(SupportError::DuplicateIndex { index: w[0] });
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Sorted view of the indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Checks every index fits a dictionary with `cols` atoms.
    pub fn validate_within(&self, cols: usize) -> Result<(), SupportError> {
        match self.indices.last() {
            Some(&last) if last >= cols => Err(SupportError::IndexOutOfRange {
                index: last,
                cols,
            }),
            _ => Ok(()),
        }
    }

    /// Indices in `0..cols` that are not part of this support.
    pub fn complement(&self, cols: usize) -> Vec<usize> {
        (0..cols).filter(|&j| !self.contains(j)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }
}

impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.indices.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SupportSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(de)?;
        SupportSet::new(raw).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_rejects_duplicates() {
        let s = SupportSet::new(vec![5, 1, 3]).unwrap();
        assert_eq!(s.indices(), &[1, 3, 5]);
        assert!(matches!(
            SupportSet::new(vec![2, 2]),
            Err(SupportError::DuplicateIndex { index: 2 })
        ));
    }

    #[test]
    fn membership_subset_and_complement() {
        let s = SupportSet::new(vec![0, 2]).unwrap();
        let t = SupportSet::new(vec![0, 1, 2]).unwrap();
        assert!(s.contains(2) && !s.contains(1));
        assert!(s.is_subset_of(&t) && !t.is_subset_of(&s));
        assert_eq!(s.complement(4), vec![1, 3]);
        assert!(SupportSet::empty().is_subset_of(&s));
    }

    #[test]
    fn range_validation() {
        let s = SupportSet::new(vec![0, 7]).unwrap();
        assert!(s.validate_within(8).is_ok());
        assert!(matches!(
            s.validate_within(7),
            Err(SupportError::IndexOutOfRange { index: 7, cols: 7 })
        ));
    }

    #[test]
    fn serde_round_trip_is_sorted_array() {
        let s = SupportSet::new(vec![4, 0, 2]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[0,2,4]");
        let back: SupportSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<SupportSet>("[1,1]").is_err());
    }
}
