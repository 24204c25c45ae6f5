//! Compatibility conditions between angles and distances.
//!
//! On the angle side: the angle-sum condition on trigons, the second axiom of
//! collinearity, the tetragon sine-product identities and the pentagon/hexagon
//! global compatibility identities. Together they decide whether an angle space
//! carries a euclidean-compatible distance. On the metric side: the Stewart
//! relation and the law-of-cosines construction of angles.

use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::axioms::is_trivial;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::points::PointId;
use crate::space::{build_angle_space, cube, AngleEntry, AngleSpace};
use crate::tolerance::ToleranceConfig;

/// Sines below this are treated as degenerate in sine-product identities.
pub const SINE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    Euclidean,
    SecondAxiom,
    Tetragon,
    Pentagon,
    Hexagon,
    /// Pentagon and hexagon identities reported together.
    GlobalCompatibility,
    Stewart,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::Euclidean => "euclidean (angle sum)",
            ConditionId::SecondAxiom => "second axiom of collinearity",
            ConditionId::Tetragon => "tetragon metrizability",
            ConditionId::Pentagon => "pentagon compatibility",
            ConditionId::Hexagon => "hexagon compatibility",
            ConditionId::GlobalCompatibility => "global compatibility",
            ConditionId::Stewart => "stewart relation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckViolation {
    pub points: Vec<PointId>,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, |lhs|, |rhs|)`
    pub residual: f64,
    pub detail: String,
}

impl CheckViolation {
    /// The violated subset as a sorted point set.
    pub fn point_set(&self) -> Vec<PointId> {
        self.points.iter().cloned().sorted().dedup().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub condition: ConditionId,
    pub passed: bool,
    pub violations: Vec<CheckViolation>,
}

impl CheckReport {
    fn new(condition: ConditionId, mut violations: Vec<CheckViolation>) -> Self {
        violations.sort_by(|x, y| {
            (x.point_set(), &x.points, &x.detail).cmp(&(y.point_set(), &y.points, &y.detail))
        });
        Self {
            condition,
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(0.0, f64::max)
    }
}

pub fn residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

fn record(
    space: &AngleSpace,
    idx: &[usize],
    lhs: f64,
    rhs: f64,
    detail: impl Into<String>,
) -> CheckViolation {
    CheckViolation {
        points: space.points().ids(idx),
        lhs,
        rhs,
        residual: residual(lhs, rhs),
        detail: detail.into(),
    }
}

/// Angle sum of every trigon, degenerate ones included, equals pi within `eps_angle`.
pub fn check_euclidean(space: &AngleSpace) -> CheckReport {
    let eps = space.tolerance().eps_angle;
    let mut out = Vec::new();
    for (a, b, c) in (0..space.len()).tuple_combinations() {
        let sum = space.angle_at(b, a, c) + space.angle_at(a, b, c) + space.angle_at(a, c, b);
        if (sum - PI).abs() > eps {
            out.push(record(space, &[a, b, c], sum, PI, "angle sum"));
        }
    }
    CheckReport::new(ConditionId::Euclidean, out)
}

/// For `(a,b,c)` in the relation and `d` off every line through two of them,
/// the angle at `d` splits additively and the two angles at `b` are supplementary.
pub fn check_second_axiom(space: &AngleSpace) -> CheckReport {
    let eps = space.tolerance().eps_angle;
    let mut out = Vec::new();
    for [a, b, c] in space.betweenness().canonical_triples() {
        for d in (0..space.len()).filter(|d| ![a, b, c].contains(d)) {
            if space.collinear_at(a, b, d)
                || space.collinear_at(a, c, d)
                || space.collinear_at(b, c, d)
            {
                continue;
            }
            let whole = space.angle_at(a, d, c);
            let parts = space.angle_at(a, d, b) + space.angle_at(b, d, c);
            if (whole - parts).abs() > eps {
                out.push(record(
                    space,
                    &[a, b, c, d],
                    whole,
                    parts,
                    "angle additivity at the outside point",
                ));
            }
            let supp = space.angle_at(a, b, d) + space.angle_at(c, b, d);
            if (supp - PI).abs() > eps {
                out.push(record(
                    space,
                    &[a, b, c, d],
                    supp,
                    PI,
                    "supplementary angles at the middle point",
                ));
            }
        }
    }
    CheckReport::new(ConditionId::SecondAxiom, out)
}

/// Dense table of `sin` of every stored angle.
pub(crate) struct SineTable {
    n: usize,
    values: Vec<f64>,
}

impl SineTable {
    pub(crate) fn new(space: &AngleSpace) -> Self {
        let n = space.len();
        let mut values = vec![0.0; n * n * n];
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                for c in (0..n).filter(|&c| c != b) {
                    values[cube(n, a, b, c)] = space.angle_at(a, b, c).sin();
                }
            }
        }
        Self { n, values }
    }

    #[inline]
    pub(crate) fn get(&self, t: [usize; 3]) -> f64 {
        self.values[cube(self.n, t[0], t[1], t[2])]
    }

    fn product(&self, ts: &[[usize; 3]]) -> (f64, f64) {
        ts.iter().fold((1.0, f64::INFINITY), |(p, m), &t| {
            let s = self.get(t);
            (p * s, m.min(s))
        })
    }
}

/// Two sides of a sine-product identity, each a list of `(arm, vertex, arm)` angles.
type SineProducts<const K: usize> = ([[usize; 3]; K], [[usize; 3]; K]);

/// Compares two sine products. Returns a violation when they disagree beyond
/// `eps_rel` or when a factor falls below [`SINE_FLOOR`].
fn sine_identity(
    space: &AngleSpace,
    sines: &SineTable,
    idx: &[usize],
    left: &[[usize; 3]],
    right: &[[usize; 3]],
    what: &str,
) -> Option<CheckViolation> {
    let (l, lmin) = sines.product(left);
    let (r, rmin) = sines.product(right);
    if lmin.min(rmin) < SINE_FLOOR {
        return Some(record(
            space,
            idx,
            l,
            r,
            format!("{what}: near-degenerate sine"),
        ));
    }
    (residual(l, r) > space.tolerance().eps_rel).then(|| record(space, idx, l, r, what))
}

/// Four sine-product identities over every non-degenerate tetragon.
pub fn check_tetragon_metrizability(space: &AngleSpace) -> CheckReport {
    let sines = SineTable::new(space);
    let mut out = Vec::new();
    if space.len() >= 4 {
        for q in space.ngon_indices(4, true).expect("size checked") {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            // Angles are written (arm, vertex, arm).
            let rows: [SineProducts<3>; 4] = [
                (
                    [[d, b, a], [b, c, a], [c, d, a]],
                    [[c, b, a], [d, c, a], [b, d, a]],
                ),
                (
                    [[c, a, b], [d, c, b], [a, d, b]],
                    [[d, a, b], [a, c, b], [c, d, b]],
                ),
                (
                    [[b, a, c], [d, b, c], [a, d, c]],
                    [[d, a, c], [a, b, c], [b, d, c]],
                ),
                (
                    [[b, a, d], [c, b, d], [a, c, d]],
                    [[c, a, d], [a, b, d], [b, c, d]],
                ),
            ];
            for (row, (l, r)) in rows.iter().enumerate() {
                if let Some(v) = sine_identity(space, &sines, &q, l, r, &format!("row {}", row + 1))
                {
                    out.push(v);
                }
            }
        }
    }
    CheckReport::new(ConditionId::Tetragon, out)
}

fn pentagon_identity(l: &[usize]) -> SineProducts<5> {
    let (a, b, c, d, e) = (l[0], l[1], l[2], l[3], l[4]);
    (
        [[d, a, e], [a, b, d], [a, c, b], [a, d, c], [c, e, d]],
        [[c, a, d], [a, b, c], [d, c, e], [a, d, b], [a, e, d]],
    )
}

fn hexagon_identity(l: &[usize]) -> SineProducts<6> {
    let (a, b, c, d, e, f) = (l[0], l[1], l[2], l[3], l[4], l[5]);
    (
        [
            [e, a, f],
            [a, b, e],
            [a, c, b],
            [c, d, a],
            [c, e, d],
            [e, f, c],
        ],
        [
            [c, a, d],
            [a, b, c],
            [e, c, f],
            [c, d, e],
            [a, e, b],
            [e, f, a],
        ],
    )
}

fn check_polygon_identity<const K: usize>(
    space: &AngleSpace,
    sines: &SineTable,
    size: usize,
    identity: fn(&[usize]) -> SineProducts<K>,
    what: &str,
) -> Vec<CheckViolation> {
    let mut out = Vec::new();
    if space.len() < size {
        return out;
    }
    for set in space.ngon_indices(size, true).expect("size checked") {
        for labeling in set.iter().copied().permutations(size) {
            let (l, r) = identity(&labeling);
            if let Some(v) = sine_identity(space, sines, &labeling, &l, &r, what) {
                out.push(v);
            }
        }
    }
    out
}

/// Pentagon identity under every labeling of every non-degenerate pentagon.
pub fn check_pentagons(space: &AngleSpace) -> CheckReport {
    let sines = SineTable::new(space);
    CheckReport::new(
        ConditionId::Pentagon,
        check_polygon_identity(space, &sines, 5, pentagon_identity, "pentagon"),
    )
}

/// Hexagon identity under every labeling of every non-degenerate hexagon.
pub fn check_hexagons(space: &AngleSpace) -> CheckReport {
    let sines = SineTable::new(space);
    CheckReport::new(
        ConditionId::Hexagon,
        check_polygon_identity(space, &sines, 6, hexagon_identity, "hexagon"),
    )
}

pub fn check_global_compatibility(space: &AngleSpace) -> CheckReport {
    let sines = SineTable::new(space);
    let mut v = check_polygon_identity(space, &sines, 5, pentagon_identity, "pentagon");
    v.extend(check_polygon_identity(
        space,
        &sines,
        6,
        hexagon_identity,
        "hexagon",
    ));
    CheckReport::new(ConditionId::GlobalCompatibility, v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetrizationDecision {
    pub admits_metric: bool,
    pub unique_up_to_scale: bool,
    pub trivial: bool,
    /// Euclidean, second axiom, tetragon and global compatibility, in that order.
    pub reports: Vec<CheckReport>,
}

impl MetrizationDecision {
    pub fn failed_reports(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

/// Decides whether the space carries a euclidean-compatible distance.
///
/// Spaces of four or more points need all four conditions; trigons need only the
/// angle sum; trivial spaces always admit one, though not uniquely.
pub fn admits_metric(space: &AngleSpace) -> MetrizationDecision {
    let reports = vec![
        check_euclidean(space),
        check_second_axiom(space),
        check_tetragon_metrizability(space),
        check_global_compatibility(space),
    ];
    let trivial = space.len() >= 3 && is_trivial(space).unwrap_or(false);
    let (admits, unique) = if space.len() < 3 {
        (true, true)
    } else if trivial {
        (true, false)
    } else if space.len() == 3 {
        (reports[0].passed, reports[0].passed)
    } else {
        let ok = reports.iter().all(|r| r.passed);
        (ok, ok)
    };
    MetrizationDecision {
        admits_metric: admits,
        unique_up_to_scale: unique,
        trivial,
        reports,
    }
}

fn metric_collinearity(metric: &DistanceMatrix, eps_rel: f64) -> (Vec<[usize; 3]>, Vec<bool>) {
    let n = metric.len();
    let triples = metric.betweenness_triples(eps_rel);
    let mut flags = vec![false; n * n * n];
    for &[a, b, c] in &triples {
        for t in [
            [a, b, c],
            [b, a, c],
            [a, c, b],
            [b, c, a],
            [c, a, b],
            [c, b, a],
        ] {
            flags[cube(n, t[0], t[1], t[2])] = true;
        }
    }
    (triples, flags)
}

/// Stewart relation for every `d` between `b` and `c` seen from a point `a`
/// off every line through two of them.
pub fn check_stewart(metric: &DistanceMatrix, tol: &ToleranceConfig) -> CheckReport {
    let n = metric.len();
    let (triples, collinear) = metric_collinearity(metric, tol.eps_rel);
    let col = |x: usize, y: usize, z: usize| collinear[cube(n, x, y, z)];
    let mut out = Vec::new();
    for [b, d, c] in triples.into_iter().filter(|t| t[0] < t[2]) {
        for a in (0..n).filter(|a| ![b, c, d].contains(a)) {
            if col(a, b, c) || col(a, b, d) || col(a, c, d) {
                continue;
            }
            let g = |x: usize, y: usize| metric.get(x, y);
            let lhs = g(a, c).powi(2) * g(b, d) + g(a, b).powi(2) * g(c, d);
            let rhs = g(b, c) * (g(a, d).powi(2) + g(b, d) * g(c, d));
            if (lhs - rhs).abs() > tol.eps_rel * lhs.abs().max(rhs.abs()) {
                out.push(CheckViolation {
                    points: metric.points().ids(&[a, b, c, d]),
                    lhs,
                    rhs,
                    residual: residual(lhs, rhs),
                    detail: format!(
                        "{} between {} and {}",
                        metric.points().label(d),
                        metric.points().label(b),
                        metric.points().label(c)
                    ),
                });
            }
        }
    }
    CheckReport::new(ConditionId::Stewart, out)
}

/// The unique angle function compatible with a metric, or the failing Stewart report.
pub fn angles_from_metric(metric: &DistanceMatrix, tol: &ToleranceConfig) -> Result<AngleSpace> {
    tol.validate()?;
    let report = check_stewart(metric, tol);
    if !report.passed {
        return Err(Error::Stewart(Box::new(report)));
    }
    let n = metric.len();
    let points = metric.points();
    let triples = metric.betweenness_triples(tol.eps_rel);
    let mut between = vec![false; n * n * n];
    for &[a, b, c] in &triples {
        between[cube(n, a, b, c)] = true;
    }
    let is_between = |a: usize, b: usize, c: usize| between[cube(n, a, b, c)];

    let mut entries = Vec::new();
    for b in 0..n {
        for (a, c) in (0..n).filter(|&p| p != b).tuple_combinations() {
            let theta = if is_between(a, b, c) {
                PI
            } else if is_between(b, a, c) || is_between(b, c, a) {
                0.0
            } else {
                let (ab, cb, ac) = (metric.get(a, b), metric.get(c, b), metric.get(a, c));
                let cos = (ab * ab + cb * cb - ac * ac) / (2.0 * ab * cb);
                if !(-1.0 - tol.eps_rel..=1.0 + tol.eps_rel).contains(&cos) {
                    return Err(Error::TriangleInequality {
                        a: points.label(a).to_string(),
                        b: points.label(b).to_string(),
                        c: points.label(c).to_string(),
                        value: cos,
                    });
                }
                cos.clamp(-1.0, 1.0).acos()
            };
            entries.push(AngleEntry::new(
                points.label(a).as_str(),
                points.label(b).as_str(),
                points.label(c).as_str(),
                theta,
            ));
        }
    }
    let named: Vec<[&str; 3]> = triples
        .iter()
        .map(|&[a, b, c]| {
            [
                points.label(a).as_str(),
                points.label(b).as_str(),
                points.label(c).as_str(),
            ]
        })
        .collect();
    build_angle_space(
        points.labels().iter().map(|p| p.to_string()),
        &named,
        &entries,
        *tol,
    )
}
