//! Betweenness axioms (B1)-(B4) and the angle-function axioms.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::PointId;
use crate::space::AngleSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AxiomId {
    /// Betweenness triples consist of distinct points.
    B1,
    /// Reversal closure.
    B2,
    /// `(a,b,c)` excludes `(b,a,c)`.
    B3,
    /// Strong transitivity.
    B4,
    /// Angle symmetry in the two arms.
    #[serde(rename = "angle-symmetry")]
    AngleSymmetry,
    /// Angles forced to 0 or pi by betweenness, positive otherwise.
    #[serde(rename = "angle-forced-values")]
    AngleForcedValues,
    /// Angles seen along a collinear triple agree.
    #[serde(rename = "first-axiom-of-collinearity")]
    FirstCollinearity,
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomId::B1 => "B1 (distinct points)",
            AxiomId::B2 => "B2 (symmetry)",
            AxiomId::B3 => "B3 (exclusion)",
            AxiomId::B4 => "B4 (strong transitivity)",
            AxiomId::AngleSymmetry => "angle symmetry",
            AxiomId::AngleForcedValues => "angle forced values",
            AxiomId::FirstCollinearity => "first axiom of collinearity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomViolation {
    pub axiom: AxiomId,
    pub tuple: Vec<PointId>,
    pub detail: String,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    fn from_violations(mut violations: Vec<AxiomViolation>) -> Self {
        violations.sort_by(|x, y| (x.axiom, &x.tuple).cmp(&(y.axiom, &y.tuple)));
        Self {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn merge(self, other: AxiomReport) -> AxiomReport {
        let mut v = self.violations;
        v.extend(other.violations);
        Self::from_violations(v)
    }
}

fn violation(
    space: &AngleSpace,
    axiom: AxiomId,
    idx: &[usize],
    detail: String,
    residual: Option<f64>,
) -> AxiomViolation {
    AxiomViolation {
        axiom,
        tuple: space.points().ids(idx),
        detail,
        residual,
    }
}

pub fn check_betweenness_axioms(space: &AngleSpace) -> AxiomReport {
    let rel = space.betweenness();
    let mut out = Vec::new();

    for [a, b, c] in rel.triples() {
        if a == b || b == c || a == c {
            out.push(violation(
                space,
                AxiomId::B1,
                &[a, b, c],
                "repeated point".into(),
                None,
            ));
        }
        if !rel.contains(c, b, a) {
            out.push(violation(
                space,
                AxiomId::B2,
                &[a, b, c],
                "reversed triple missing".into(),
                None,
            ));
        }
        if rel.contains(b, a, c) {
            out.push(violation(
                space,
                AxiomId::B3,
                &[a, b, c],
                "both (a,b,c) and (b,a,c) stored".into(),
                None,
            ));
        }
    }

    // Two stored triples sharing two points: every 3-subset of the union must be collinear.
    let sets: BTreeSet<[usize; 3]> = rel
        .triples()
        .map(|t| {
            let mut s = t;
            s.sort_unstable();
            s
        })
        .collect();
    let mut failing: BTreeSet<[usize; 3]> = BTreeSet::new();
    for (s, t) in sets.iter().tuple_combinations() {
        let shared = s.iter().filter(|p| t.contains(p)).count();
        if shared < 2 {
            continue;
        }
        let union: Vec<usize> = s.iter().chain(t.iter()).copied().sorted().dedup().collect();
        for (a, b, c) in union.into_iter().tuple_combinations() {
            if !space.collinear_at(a, b, c) {
                failing.insert([a, b, c]);
            }
        }
    }
    for f in failing {
        out.push(violation(
            space,
            AxiomId::B4,
            &f,
            "not collinear although it lies in the union of two collinear triples sharing two points".into(),
            None,
        ));
    }
    AxiomReport::from_violations(out)
}

pub fn check_angle_axioms(space: &AngleSpace) -> AxiomReport {
    let n = space.len();
    let rel = space.betweenness();
    let eps = space.tolerance().eps_angle;
    let mut out = Vec::new();

    for b in 0..n {
        for a in (0..n).filter(|&a| a != b) {
            for c in (a..n).filter(|&c| c != b) {
                let theta = space.angle_at(a, b, c);
                if theta != space.angle_at(c, b, a) {
                    out.push(violation(
                        space,
                        AxiomId::AngleSymmetry,
                        &[a, b, c],
                        "asymmetric entry".into(),
                        Some((theta - space.angle_at(c, b, a)).abs()),
                    ));
                }
                if a == c || rel.contains(b, a, c) || rel.contains(b, c, a) {
                    if theta > eps {
                        out.push(violation(
                            space,
                            AxiomId::AngleForcedValues,
                            &[a, b, c],
                            format!("expected 0, found {theta}"),
                            Some(theta),
                        ));
                    }
                } else if rel.contains(a, b, c) {
                    if (PI - theta).abs() > eps {
                        out.push(violation(
                            space,
                            AxiomId::AngleForcedValues,
                            &[a, b, c],
                            format!("expected pi, found {theta}"),
                            Some((PI - theta).abs()),
                        ));
                    }
                } else if theta <= 0.0 {
                    out.push(violation(
                        space,
                        AxiomId::AngleForcedValues,
                        &[a, b, c],
                        "expected a positive angle for a non-collinear triple".into(),
                        Some(theta),
                    ));
                }
            }
        }
    }

    // (b, c, d) in the relation: the rays from b toward c and d coincide.
    for [b, c, d] in rel.triples() {
        for a in (0..n).filter(|&a| a != b) {
            let diff = (space.angle_at(a, b, c) - space.angle_at(a, b, d)).abs();
            if diff > eps {
                out.push(violation(
                    space,
                    AxiomId::FirstCollinearity,
                    &[a, b, c, d],
                    format!(
                        "angle({},{},{}) = {} differs from angle({},{},{}) = {}",
                        space.label(a),
                        space.label(b),
                        space.label(c),
                        space.angle_at(a, b, c),
                        space.label(a),
                        space.label(b),
                        space.label(d),
                        space.angle_at(a, b, d)
                    ),
                    Some(diff),
                ));
            }
        }
    }
    AxiomReport::from_violations(out)
}

/// Both axiom families in one report.
pub fn check_all_axioms(space: &AngleSpace) -> AxiomReport {
    check_betweenness_axioms(space).merge(check_angle_axioms(space))
}

pub fn is_trivial(space: &AngleSpace) -> Result<bool> {
    if space.len() < 3 {
        return Err(Error::OutOfRange {
            what: "trivial-space test",
            expected: "at least 3 points".into(),
            got: space.len(),
        });
    }
    Ok((0..space.len())
        .tuple_combinations()
        .all(|(a, b, c)| space.collinear_at(a, b, c)))
}
