//! Finite metric spaces stored as dense symmetric distance tables.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::points::{PointId, PointSet};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    points: PointSet,
    d: Vec<f64>,
}

/// A triple `(a, b, c)` whose distances break `d(a,c) <= d(a,b) + d(b,c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleViolation {
    pub triple: [PointId; 3],
    /// `(d(a,c) - d(a,b) - d(b,c)) / d(a,c)`
    pub excess: f64,
}

impl DistanceMatrix {
    /// Builds a matrix from an explicit pair list. Every unordered pair must appear.
    pub fn from_pairs<P, S>(points: P, pairs: &[(S, S, f64)]) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        S: AsRef<str>,
    {
        let points = PointSet::new(points)?;
        let n = points.len();
        let mut d: Vec<Option<f64>> = vec![None; n * n];
        for (p, q, value) in pairs {
            let (i, j) = (points.index_of(p.as_ref())?, points.index_of(q.as_ref())?);
            if i == j || !(value.is_finite() && *value > 0.0) {
                return Err(Error::InvalidDistance {
                    p: p.as_ref().into(),
                    q: q.as_ref().into(),
                    d: *value,
                });
            }
            match d[i * n + j] {
                Some(prev) if prev != *value => {
                    return Err(Error::ConflictingDistance {
                        p: p.as_ref().into(),
                        q: q.as_ref().into(),
                        first: prev,
                        second: *value,
                    })
                }
                _ => {
                    d[i * n + j] = Some(*value);
                    d[j * n + i] = Some(*value);
                }
            }
        }
        let mut dense = vec![0.0; n * n];
        for (i, j) in (0..n).tuple_combinations() {
            let v = d[i * n + j].ok_or_else(|| Error::MissingDistance {
                p: points.label(i).to_string(),
                q: points.label(j).to_string(),
            })?;
            dense[i * n + j] = v;
            dense[j * n + i] = v;
        }
        Ok(Self { points, d: dense })
    }

    /// Builds a matrix from a function of canonical indices; `f(i, j)` is only called for `i < j`.
    pub fn from_fn(points: PointSet, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for (i, j) in (0..n).tuple_combinations() {
            let v = f(i, j);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidDistance {
                    p: points.label(i).to_string(),
                    q: points.label(j).to_string(),
                    d: v,
                });
            }
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
        Ok(Self { points, d })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.len() + j]
    }

    pub fn distance(&self, p: &str, q: &str) -> Result<f64> {
        Ok(self.get(self.points.index_of(p)?, self.points.index_of(q)?))
    }

    pub fn max_distance(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_fn(self.points.clone(), |i, j| c * self.get(i, j))
    }

    /// Metric betweenness: `(a, b, c)` whenever `d(a,b) + d(b,c) = d(a,c)` within `eps_rel` relative.
    pub fn betweenness_triples(&self, eps_rel: f64) -> Vec<[usize; 3]> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let ac = self.get(a, c);
                    if (self.get(a, b) + self.get(b, c) - ac).abs() <= eps_rel * ac {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    pub fn triangle_violations(&self, eps_rel: f64) -> Vec<TriangleViolation> {
        let n = self.len();
        let mut out = Vec::new();
        for (a, c) in (0..n).tuple_combinations() {
            for b in (0..n).filter(|&b| b != a && b != c) {
                let ac = self.get(a, c);
                let excess = (ac - self.get(a, b) - self.get(b, c)) / ac;
                if excess > eps_rel {
                    out.push(TriangleViolation {
                        triple: [
                            self.points.label(a).clone(),
                            self.points.label(b).clone(),
                            self.points.label(c).clone(),
                        ],
                        excess,
                    });
                }
            }
        }
        out
    }

    /// Largest entrywise `|d - other| / max(d, other)` over distinct pairs.
    pub fn max_relative_deviation(&self, other: &Self) -> Result<f64> {
        if self.points != other.points {
            return Err(Error::PointSetMismatch);
        }
        Ok((0..self.len())
            .tuple_combinations()
            .map(|(i, j)| {
                let (x, y) = (self.get(i, j), other.get(i, j));
                (x - y).abs() / x.max(y)
            })
            .fold(0.0, f64::max))
    }

    /// All unordered pairs `(p, q, d)` with `p < q`, in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len())
            .tuple_combinations()
            .map(move |(i, j)| (i, j, self.get(i, j)))
    }
}
