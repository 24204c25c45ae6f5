use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbolic label of a point. Ordering is lexicographic on the label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(String);

impl PointId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Self(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for PointId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// The labelled points of a space, stored in canonical (sorted) order.
///
/// Every index-based API in the crate refers to positions in this order, so
/// index order and canonical label order coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    labels: Vec<PointId>,
    index: HashMap<String, usize>,
}

impl PointSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids = labels
            .into_iter()
            .map(PointId::new)
            .collect::<Result<Vec<_>>>()?;
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].0.clone()));
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, p)| (p.0.clone(), i))
            .collect();
        Ok(Self { labels: ids, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &PointId {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[PointId] {
        &self.labels
    }

    pub fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.labels[i].0.clone()).collect()
    }

    pub fn ids(&self, idx: &[usize]) -> Vec<PointId> {
        idx.iter().map(|&i| self.labels[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_indexes() {
        let ps = PointSet::new(["C", "A", "B"]).unwrap();
        assert_eq!(ps.index_of("A").unwrap(), 0);
        assert_eq!(ps.index_of("C").unwrap(), 2);
        assert_eq!(ps.label(1).as_str(), "B");
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            PointSet::new(["A", "B", "A"]).unwrap_err(),
            Error::DuplicateLabel("A".into())
        );
        assert_eq!(PointSet::new(["A", ""]).unwrap_err(), Error::EmptyLabel);
    }

    #[test]
    fn unknown_label() {
        let ps = PointSet::new(["A"]).unwrap();
        assert_eq!(
            ps.index_of("Z").unwrap_err(),
            Error::UnknownPoint("Z".into())
        );
    }
}
