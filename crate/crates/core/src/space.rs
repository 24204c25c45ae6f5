//! Angle spaces: points, a betweenness relation and an angle function.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::points::{PointId, PointSet};
use crate::tolerance::ToleranceConfig;

#[inline]
pub(crate) fn cube(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

/// Ternary relation "b lies between a and c", closed under reversal.
#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessRelation {
    n: usize,
    flags: Vec<bool>,
    triples: BTreeSet<[usize; 3]>,
}

impl BetweennessRelation {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            flags: vec![false; n * n * n],
            triples: BTreeSet::new(),
        }
    }

    /// Builds the relation from index triples, adding every reversed triple.
    ///
    /// Rejects triples with repeated points and pairs `(a,b,c)`, `(b,a,c)`.
    pub fn from_triples<I>(points: &PointSet, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = [usize; 3]>,
    {
        let mut rel = Self::empty(points.len());
        for [a, b, c] in triples {
            if a == b || b == c || a == c {
                let [a, b, c] = names3(points, a, b, c);
                return Err(Error::TripleNotDistinct { a, b, c });
            }
            rel.insert(a, b, c);
            rel.insert(c, b, a);
        }
        for &[a, b, c] in &rel.triples {
            if rel.contains(b, a, c) {
                let [a, b, c] = names3(points, a, b, c);
                return Err(Error::ExclusionViolated { a, b, c });
            }
        }
        Ok(rel)
    }

    fn insert(&mut self, a: usize, b: usize, c: usize) {
        self.flags[cube(self.n, a, b, c)] = true;
        self.triples.insert([a, b, c]);
    }

    /// True when `b` lies between `a` and `c`.
    #[inline]
    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        self.flags[cube(self.n, a, b, c)]
    }

    #[inline]
    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        self.contains(a, b, c) || self.contains(b, a, c) || self.contains(a, c, b)
    }

    /// Every stored triple, both orientations included, in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.triples.iter().copied()
    }

    /// One orientation per stored triple: the one with `a < c`.
    pub fn canonical_triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.triples.iter().copied().filter(|t| t[0] < t[2])
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

fn names3(points: &PointSet, a: usize, b: usize, c: usize) -> [String; 3] {
    [
        points.label(a).to_string(),
        points.label(b).to_string(),
        points.label(c).to_string(),
    ]
}

/// Angle at the middle point for every triple with the vertex distinct from both arms.
///
/// Stored densely; `get(a,b,c) == get(c,b,a)` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTable {
    n: usize,
    values: Vec<f64>,
}

impl AngleTable {
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[cube(self.n, a, b, c)]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, theta: f64) {
        self.values[cube(self.n, a, b, c)] = theta;
        self.values[cube(self.n, c, b, a)] = theta;
    }
}

/// One input angle: the angle at `b` between the rays toward `a` and `c`, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub theta: f64,
}

impl AngleEntry {
    pub fn new(
        a: impl Into<String>,
        b: impl Into<String>,
        c: impl Into<String>,
        theta: f64,
    ) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            theta,
        }
    }
}

/// A finite angle space.
///
/// Construction enforces distinctness, reversal closure and exclusion for the
/// betweenness relation and symmetry for the angle table. The remaining axioms
/// are reported by [`crate::axioms`], so broken spaces can still be built.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpace {
    points: PointSet,
    betweenness: BetweennessRelation,
    angles: AngleTable,
    tol: ToleranceConfig,
}

pub fn build_angle_space<P, S>(
    points: P,
    betweenness: &[[S; 3]],
    angles: &[AngleEntry],
    tol: ToleranceConfig,
) -> Result<AngleSpace>
where
    P: IntoIterator,
    P::Item: Into<String>,
    S: AsRef<str>,
{
    tol.validate()?;
    let points = PointSet::new(points)?;
    let triples = betweenness
        .iter()
        .map(|[a, b, c]| {
            Ok([
                points.index_of(a.as_ref())?,
                points.index_of(b.as_ref())?,
                points.index_of(c.as_ref())?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let betweenness = BetweennessRelation::from_triples(&points, triples)?;
    let angles = assemble_angles(&points, angles, &tol)?;
    Ok(AngleSpace {
        points,
        betweenness,
        angles,
        tol,
    })
}

fn assemble_angles(
    points: &PointSet,
    entries: &[AngleEntry],
    tol: &ToleranceConfig,
) -> Result<AngleTable> {
    let n = points.len();
    let mut seen: Vec<Option<f64>> = vec![None; n * n * n];
    for e in entries {
        let (a, b, c) = (
            points.index_of(&e.a)?,
            points.index_of(&e.b)?,
            points.index_of(&e.c)?,
        );
        if a == b || b == c {
            return Err(Error::AngleVertexRepeated {
                a: e.a.clone(),
                b: e.b.clone(),
                c: e.c.clone(),
            });
        }
        if !(0.0..=PI).contains(&e.theta) {
            return Err(Error::AngleOutOfRange {
                a: e.a.clone(),
                b: e.b.clone(),
                c: e.c.clone(),
                theta: e.theta,
            });
        }
        // Both orientations share one slot.
        let (lo, hi) = if a <= c { (a, c) } else { (c, a) };
        let slot = &mut seen[cube(n, lo, b, hi)];
        match *slot {
            Some(prev) if (prev - e.theta).abs() > tol.eps_angle => {
                return Err(Error::ConflictingAngle {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    c: e.c.clone(),
                    first: prev,
                    second: e.theta,
                });
            }
            Some(prev) => *slot = Some(0.5 * (prev + e.theta)),
            None => *slot = Some(e.theta),
        }
    }
    let mut table = AngleTable {
        n,
        values: vec![0.0; n * n * n],
    };
    for b in 0..n {
        for a in 0..n {
            for c in a..n {
                if a == b || c == b {
                    continue;
                }
                match seen[cube(n, a, b, c)] {
                    Some(theta) => table.set(a, b, c, theta),
                    None if a == c => table.set(a, b, c, 0.0),
                    None => {
                        return Err(Error::MissingAngle {
                            a: points.label(a).to_string(),
                            b: points.label(b).to_string(),
                            c: points.label(c).to_string(),
                        })
                    }
                }
            }
        }
    }
    Ok(table)
}

impl AngleSpace {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn betweenness(&self) -> &BetweennessRelation {
        &self.betweenness
    }

    pub fn angles(&self) -> &AngleTable {
        &self.angles
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// Same space under different tolerances.
    pub fn with_tolerance(&self, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        Ok(Self {
            tol,
            ..self.clone()
        })
    }

    /// Copy of the space with the angle `(a,b,c)` (and its mirror) replaced.
    pub fn with_angle(&self, a: &str, b: &str, c: &str, theta: f64) -> Result<Self> {
        let (ia, ib, ic) = (self.index_of(a)?, self.index_of(b)?, self.index_of(c)?);
        if ia == ib || ib == ic {
            return Err(Error::AngleVertexRepeated {
                a: a.into(),
                b: b.into(),
                c: c.into(),
            });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::AngleOutOfRange {
                a: a.into(),
                b: b.into(),
                c: c.into(),
                theta,
            });
        }
        let mut out = self.clone();
        out.angles.set(ia, ib, ic, theta);
        Ok(out)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points.index_of(label)
    }

    pub fn label(&self, i: usize) -> &PointId {
        self.points.label(i)
    }

    /// Angle at `b` toward `a` and `c`.
    pub fn angle(&self, a: &str, b: &str, c: &str) -> Result<f64> {
        let (ia, ib, ic) = (self.index_of(a)?, self.index_of(b)?, self.index_of(c)?);
        if ia == ib || ib == ic {
            return Err(Error::AngleVertexRepeated {
                a: a.into(),
                b: b.into(),
                c: c.into(),
            });
        }
        Ok(self.angles.get(ia, ib, ic))
    }

    #[inline]
    pub fn angle_at(&self, a: usize, b: usize, c: usize) -> f64 {
        self.angles.get(a, b, c)
    }

    #[inline]
    pub fn collinear_at(&self, a: usize, b: usize, c: usize) -> bool {
        self.betweenness.collinear(a, b, c)
    }

    /// A set of three or more points is collinear when each of its 3-subsets is.
    pub(crate) fn collinear_set(&self, idx: &[usize]) -> bool {
        idx.iter()
            .copied()
            .tuple_combinations()
            .all(|(a, b, c)| self.collinear_at(a, b, c))
    }

    /// Collinearity of three or more distinct labelled points.
    pub fn collinear(&self, labels: &[&str]) -> Result<bool> {
        let idx = labels
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        if idx.len() < 3 || !idx.iter().all_unique() {
            return Err(Error::OutOfRange {
                what: "collinearity query",
                expected: "at least three distinct points".into(),
                got: idx.iter().unique().count(),
            });
        }
        Ok(self.collinear_set(&idx))
    }

    /// All `n`-subsets as index vectors in canonical lexicographic order.
    pub fn ngon_indices(&self, n: usize, nondegenerate: bool) -> Result<Vec<Vec<usize>>> {
        if n < 3 || n > self.len() {
            return Err(Error::OutOfRange {
                what: "n-gon size",
                expected: format!("3..={}", self.len()),
                got: n,
            });
        }
        Ok((0..self.len())
            .combinations(n)
            .filter(|s| !nondegenerate || self.is_nondegenerate(s))
            .collect())
    }

    /// No three of the given points are collinear.
    pub(crate) fn is_nondegenerate(&self, idx: &[usize]) -> bool {
        idx.iter()
            .copied()
            .tuple_combinations()
            .all(|(a, b, c)| !self.collinear_at(a, b, c))
    }

    pub fn enumerate_ngons(&self, n: usize, nondegenerate: bool) -> Result<Vec<Vec<PointId>>> {
        Ok(self
            .ngon_indices(n, nondegenerate)?
            .into_iter()
            .map(|s| self.points.ids(&s))
            .collect())
    }

    pub(crate) fn names_all(&self) -> Vec<String> {
        self.points.labels().iter().map(|p| p.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn equilateral_trigon_builds() {
        let s = fixtures::equilateral_trigon();
        assert_eq!(s.len(), 3);
        assert_eq!(s.angle("A", "B", "C").unwrap(), FRAC_PI_3);
        assert_eq!(s.angle("C", "B", "A").unwrap(), FRAC_PI_3);
        assert_eq!(s.angle("A", "B", "A").unwrap(), 0.0);
    }

    #[test]
    fn exclusion_violation_is_rejected() {
        let err = build_angle_space(
            ["A", "B", "C"],
            &[["A", "B", "C"], ["B", "A", "C"]],
            &fixtures::constant_angles(&["A", "B", "C"], FRAC_PI_3),
            ToleranceConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ExclusionViolated { .. }), "{err:?}");
    }

    #[test]
    fn conflicting_symmetric_entries_are_rejected() {
        let mut entries = fixtures::constant_angles(&["A", "B", "C"], FRAC_PI_3);
        entries.push(AngleEntry::new("C", "B", "A", std::f64::consts::FRAC_PI_4));
        let err = build_angle_space(
            ["A", "B", "C"],
            &[] as &[[&str; 3]],
            &entries,
            ToleranceConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConflictingAngle { .. }), "{err:?}");
    }

    #[test]
    fn construction_errors() {
        let angles = fixtures::constant_angles(&["A", "B", "C"], FRAC_PI_3);
        let none: &[[&str; 3]] = &[];
        assert!(matches!(
            build_angle_space(["A", "B", "A"], none, &angles, ToleranceConfig::default()),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            build_angle_space(
                ["A", "B", "C"],
                &[["A", "B", "Z"]],
                &angles,
                ToleranceConfig::default()
            ),
            Err(Error::UnknownPoint(_))
        ));
        assert!(matches!(
            build_angle_space(
                ["A", "B", "C"],
                &[["A", "B", "A"]],
                &angles,
                ToleranceConfig::default()
            ),
            Err(Error::TripleNotDistinct { .. })
        ));
        let mut bad = angles.clone();
        bad.push(AngleEntry::new("A", "C", "B", 3.5));
        assert!(matches!(
            build_angle_space(["A", "B", "C"], none, &bad, ToleranceConfig::default()),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(matches!(
            build_angle_space(
                ["A", "B", "C"],
                none,
                &angles[1..],
                ToleranceConfig::default()
            ),
            Err(Error::MissingAngle { .. })
        ));
    }

    #[test]
    fn betweenness_is_closed_under_reversal() {
        let s = fixtures::stewart_space();
        let b = s.index_of("B").unwrap();
        let c = s.index_of("C").unwrap();
        let d = s.index_of("D").unwrap();
        assert!(s.betweenness().contains(b, d, c));
        assert!(s.betweenness().contains(c, d, b));
        assert_eq!(s.betweenness().len(), 2);
    }

    #[test]
    fn collinear_queries() {
        let tri = fixtures::equilateral_trigon();
        assert!(!tri.collinear(&["A", "B", "C"]).unwrap());

        let line = fixtures::collinear_points(3);
        assert!(line.collinear(&["C", "A", "B"]).unwrap());

        let st = fixtures::stewart_space();
        assert!(st.collinear(&["B", "C", "D"]).unwrap());
        assert!(!st.collinear(&["A", "B", "C"]).unwrap());
        assert!(matches!(
            st.collinear(&["A", "B", "Q"]),
            Err(Error::UnknownPoint(_))
        ));
        assert!(st.collinear(&["A", "B"]).is_err());
        assert!(st.collinear(&["A", "B", "B"]).is_err());
    }

    #[test]
    fn ngon_enumeration() {
        let sq = fixtures::unit_square_space();
        let tris = sq.enumerate_ngons(3, true).unwrap();
        assert_eq!(tris.len(), 4);

        let st = fixtures::stewart_space();
        assert!(st.enumerate_ngons(4, true).unwrap().is_empty());
        assert_eq!(st.enumerate_ngons(4, false).unwrap().len(), 1);

        let pent = fixtures::regular_pentagon_space();
        assert_eq!(pent.enumerate_ngons(5, true).unwrap().len(), 1);

        assert!(sq.enumerate_ngons(2, false).is_err());
        assert!(sq.enumerate_ngons(5, false).is_err());
    }

    #[test]
    fn ngons_are_in_canonical_order() {
        let sq = fixtures::unit_square_space();
        let names: Vec<Vec<String>> = sq
            .enumerate_ngons(3, false)
            .unwrap()
            .into_iter()
            .map(|s| s.into_iter().map(|p| p.to_string()).collect())
            .collect();
        assert_eq!(
            names,
            vec![
                vec!["A", "B", "C"],
                vec!["A", "B", "D"],
                vec!["A", "C", "D"],
                vec!["B", "C", "D"]
            ]
        );
    }
}
