//! JSON documents for spaces, metrics and coordinates.
//!
//! Emitted documents are canonical: points in canonical order, betweenness as
//! `[a, b, c]` with `a < c`, one angle record per unordered arm pair, and
//! tuples sorted. Parsing a canonical document and emitting it again yields the
//! same text.

use std::f64::consts::PI;

use itertools::Itertools;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::embed::Coordinates;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::points::PointSet;
use crate::space::{build_angle_space, AngleEntry, AngleSpace};
use crate::tolerance::ToleranceConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_det: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: ToleranceConfig) -> Result<ToleranceConfig> {
        let tol = ToleranceConfig {
            eps_angle: self.eps_angle.unwrap_or(base.eps_angle),
            eps_rel: self.eps_rel.unwrap_or(base.eps_rel),
            eps_det: self.eps_det.unwrap_or(base.eps_det),
        };
        tol.validate().map_err(|e| e.at("tolerances"))?;
        Ok(tol)
    }

    fn full(tol: &ToleranceConfig) -> Self {
        Self {
            eps_angle: Some(tol.eps_angle),
            eps_rel: Some(tol.eps_rel),
            eps_det: Some(tol.eps_det),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub theta_radians: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub schema_version: u32,
    pub points: Vec<String>,
    pub betweenness: Vec<[String; 3]>,
    pub angles: Vec<AngleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceRecord {
    pub p: String,
    pub q: String,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDocument {
    pub schema_version: u32,
    pub points: Vec<String>,
    pub distances: Vec<DistanceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateRecord {
    pub point: String,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinatesDocument {
    pub schema_version: u32,
    pub dim: usize,
    pub coordinates: Vec<CoordinateRecord>,
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::SchemaVersion(v).at("schema_version"))
    }
}

fn point_set(labels: &[String]) -> Result<PointSet> {
    PointSet::new(labels.iter().cloned()).map_err(|e| e.at("points"))
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// Canonical document for a space; tolerances are written only when they differ from the defaults.
    pub fn from_space(space: &AngleSpace) -> Self {
        let n = space.len();
        let names = |i: usize| space.label(i).to_string();
        let betweenness = space
            .betweenness()
            .canonical_triples()
            .sorted()
            .map(|[a, b, c]| [names(a), names(b), names(c)])
            .collect();
        let mut angles = Vec::new();
        for (a, c) in (0..n).tuple_combinations() {
            for b in (0..n).filter(|&b| b != a && b != c) {
                angles.push(AngleRecord {
                    a: names(a),
                    b: names(b),
                    c: names(c),
                    theta_radians: space.angle_at(a, b, c),
                });
            }
        }
        let tol = space.tolerance();
        Self {
            schema_version: SCHEMA_VERSION,
            points: space
                .points()
                .labels()
                .iter()
                .map(|p| p.to_string())
                .collect(),
            betweenness,
            angles,
            tolerances: (*tol != ToleranceConfig::default()).then(|| ToleranceOverrides::full(tol)),
        }
    }

    /// Builds the space, resolving missing tolerance fields from `defaults`.
    pub fn to_space(&self, defaults: ToleranceConfig) -> Result<AngleSpace> {
        check_version(self.schema_version)?;
        let tol = match &self.tolerances {
            Some(o) => o.apply(defaults)?,
            None => defaults,
        };
        let points = point_set(&self.points)?;
        for (i, t) in self.betweenness.iter().enumerate() {
            for label in t {
                points
                    .index_of(label)
                    .map_err(|e| e.at(format!("betweenness[{i}]")))?;
            }
        }
        let mut entries = Vec::with_capacity(self.angles.len());
        for (i, r) in self.angles.iter().enumerate() {
            validate_angle(&points, r).map_err(|e| e.at(format!("angles[{i}]")))?;
            entries.push(AngleEntry::new(&r.a, &r.b, &r.c, r.theta_radians));
        }
        build_angle_space(
            self.points.iter().cloned(),
            &self.betweenness,
            &entries,
            tol,
        )
    }
}

fn validate_angle(points: &PointSet, r: &AngleRecord) -> Result<()> {
    let (a, b, c) = (
        points.index_of(&r.a)?,
        points.index_of(&r.b)?,
        points.index_of(&r.c)?,
    );
    if a == b || b == c {
        return Err(Error::AngleVertexRepeated {
            a: r.a.clone(),
            b: r.b.clone(),
            c: r.c.clone(),
        });
    }
    if !(0.0..=PI).contains(&r.theta_radians) {
        return Err(Error::AngleOutOfRange {
            a: r.a.clone(),
            b: r.b.clone(),
            c: r.c.clone(),
            theta: r.theta_radians,
        });
    }
    Ok(())
}

impl MetricDocument {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_metric(metric: &DistanceMatrix) -> Self {
        let names = |i: usize| metric.points().label(i).to_string();
        Self {
            schema_version: SCHEMA_VERSION,
            points: metric
                .points()
                .labels()
                .iter()
                .map(|p| p.to_string())
                .collect(),
            distances: metric
                .pairs()
                .map(|(i, j, d)| DistanceRecord {
                    p: names(i),
                    q: names(j),
                    d,
                })
                .collect(),
        }
    }

    pub fn to_metric(&self) -> Result<DistanceMatrix> {
        check_version(self.schema_version)?;
        let points = point_set(&self.points)?;
        for (i, r) in self.distances.iter().enumerate() {
            let at = |e: Error| e.at(format!("distances[{i}]"));
            let (p, q) = (
                points.index_of(&r.p).map_err(at)?,
                points.index_of(&r.q).map_err(at)?,
            );
            if p == q || !(r.d.is_finite() && r.d > 0.0) {
                return Err(at(Error::InvalidDistance {
                    p: r.p.clone(),
                    q: r.q.clone(),
                    d: r.d,
                }));
            }
        }
        let pairs: Vec<(&str, &str, f64)> = self
            .distances
            .iter()
            .map(|r| (r.p.as_str(), r.q.as_str(), r.d))
            .collect();
        DistanceMatrix::from_pairs(self.points.iter().cloned(), &pairs)
            .map_err(|e| e.at("distances"))
    }
}

impl CoordinatesDocument {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_coordinates(coords: &Coordinates) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: coords.dim(),
            coordinates: (0..coords.points().len())
                .map(|i| CoordinateRecord {
                    point: coords.points().label(i).to_string(),
                    x: coords.row(i).to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_coordinates(&self) -> Result<Coordinates> {
        check_version(self.schema_version)?;
        let labels: Vec<String> = self.coordinates.iter().map(|r| r.point.clone()).collect();
        let points = point_set(&labels)?;
        let mut rows = vec![Vec::new(); points.len()];
        for (i, r) in self.coordinates.iter().enumerate() {
            if r.x.len() != self.dim || r.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::OutOfRange {
                    what: "coordinate row",
                    expected: format!("{} finite values", self.dim),
                    got: r.x.len(),
                }
                .at(format!("coordinates[{i}]")));
            }
            rows[points.index_of(&r.point)?] = r.x.clone();
        }
        Coordinates::new(points, self.dim, rows)
    }
}

/// Parses a space document with default tolerances.
pub fn parse_space(text: &str) -> Result<AngleSpace> {
    SpaceDocument::parse(text)?.to_space(ToleranceConfig::default())
}

pub fn parse_metric(text: &str) -> Result<DistanceMatrix> {
    MetricDocument::parse(text)?.to_metric()
}

pub fn serialize_space(space: &AngleSpace) -> String {
    SpaceDocument::from_space(space).to_json()
}

pub fn serialize_metric(metric: &DistanceMatrix) -> String {
    MetricDocument::from_metric(metric).to_json()
}
