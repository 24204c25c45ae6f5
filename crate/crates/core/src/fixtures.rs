//! Small named configurations used by tests, benches and the CLI fixture suite.
//!
//! Angles here come straight from coordinates (or, for the Stewart metric, from
//! the law of cosines on the given lengths), never from the crate's own routines.

use std::f64::consts::{FRAC_PI_3, PI};

use itertools::Itertools;

use crate::metric::DistanceMatrix;
use crate::space::{build_angle_space, AngleEntry, AngleSpace};
use crate::tolerance::ToleranceConfig;

pub fn labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect()
}

/// Every angle entry `(a, b, c)` with `a < c` set to `theta`.
pub fn constant_angles(points: &[&str], theta: f64) -> Vec<AngleEntry> {
    let mut out = Vec::new();
    for b in points {
        for (a, c) in points.iter().filter(|p| *p != b).tuple_combinations() {
            out.push(AngleEntry::new(*a, *b, *c, theta));
        }
    }
    out
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

/// Angle at `b` from coordinates: arccos of the normalized dot product.
pub fn coordinate_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let (u, v) = (sub(a, b), sub(c, b));
    (dot(&u, &v) / (dot(&u, &u).sqrt() * dot(&v, &v).sqrt()))
        .clamp(-1.0, 1.0)
        .acos()
}

/// Angle space of explicit coordinates with the listed betweenness triples.
///
/// Collinear triples get their exact angles (0 or pi); all others are measured.
pub fn space_from_coordinates(
    names: &[&str],
    coords: &[Vec<f64>],
    between: &[[&str; 3]],
) -> AngleSpace {
    let pos = |s: &str| names.iter().position(|n| *n == s).unwrap();
    let is_between = |a: usize, b: usize, c: usize| {
        between.iter().any(|t| {
            let (x, y, z) = (pos(t[0]), pos(t[1]), pos(t[2]));
            y == b && ((x, z) == (a, c) || (x, z) == (c, a))
        })
    };
    let mut entries = Vec::new();
    for b in 0..names.len() {
        for (a, c) in (0..names.len()).filter(|&p| p != b).tuple_combinations() {
            let theta = if is_between(a, b, c) {
                PI
            } else if is_between(b, a, c) || is_between(b, c, a) {
                0.0
            } else {
                coordinate_angle(&coords[a], &coords[b], &coords[c])
            };
            entries.push(AngleEntry::new(names[a], names[b], names[c], theta));
        }
    }
    build_angle_space(
        names.iter().copied(),
        between,
        &entries,
        ToleranceConfig::default(),
    )
    .unwrap()
}

pub fn metric_from_coordinates(names: &[&str], coords: &[Vec<f64>]) -> DistanceMatrix {
    let mut pairs = Vec::new();
    for (i, j) in (0..names.len()).tuple_combinations() {
        let diff = sub(&coords[i], &coords[j]);
        pairs.push((names[i], names[j], dot(&diff, &diff).sqrt()));
    }
    DistanceMatrix::from_pairs(names.iter().copied(), &pairs).unwrap()
}

pub fn equilateral_trigon() -> AngleSpace {
    let pts = ["A", "B", "C"];
    build_angle_space(
        pts,
        &[] as &[[&str; 3]],
        &constant_angles(&pts, FRAC_PI_3),
        ToleranceConfig::default(),
    )
    .unwrap()
}

/// Trigon with a right angle at `A` and the two remaining angles pi/4.
pub fn right_isoceles_trigon() -> AngleSpace {
    space_from_coordinates(
        &["A", "B", "C"],
        &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        &[],
    )
}

pub fn unit_square_coordinates() -> Vec<Vec<f64>> {
    vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
    ]
}

/// A(0,0), B(1,0), C(1,1), D(0,1).
pub fn unit_square_space() -> AngleSpace {
    space_from_coordinates(&["A", "B", "C", "D"], &unit_square_coordinates(), &[])
}

pub fn unit_square_metric() -> DistanceMatrix {
    metric_from_coordinates(&["A", "B", "C", "D"], &unit_square_coordinates())
}

/// `n` points on a line at unit spacing, labelled in order.
pub fn collinear_points(n: usize) -> AngleSpace {
    let names = labels(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let coords: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
    let between: Vec<[&str; 3]> = (0..n)
        .tuple_combinations()
        .map(|(a, b, c)| [refs[a], refs[b], refs[c]])
        .collect();
    space_from_coordinates(&refs, &coords, &between)
}

/// AB = AC = BC = 4, BD = CD = 2, AD = 5.
pub fn stewart_metric() -> DistanceMatrix {
    DistanceMatrix::from_pairs(
        ["A", "B", "C", "D"],
        &[
            ("A", "B", 4.0),
            ("A", "C", 4.0),
            ("B", "C", 4.0),
            ("B", "D", 2.0),
            ("C", "D", 2.0),
            ("A", "D", 5.0),
        ],
    )
    .unwrap()
}

/// Law-of-cosines angles of [`stewart_metric`] with D between B and C.
pub fn stewart_space() -> AngleSpace {
    let m = stewart_metric();
    let names = ["A", "B", "C", "D"];
    let mut entries = Vec::new();
    for b in 0..4 {
        for (a, c) in (0..4).filter(|&p| p != b).tuple_combinations() {
            let (ab, cb, ac) = (m.get(a, b), m.get(c, b), m.get(a, c));
            let cos = (ab * ab + cb * cb - ac * ac) / (2.0 * ab * cb);
            entries.push(AngleEntry::new(
                names[a],
                names[b],
                names[c],
                cos.clamp(-1.0, 1.0).acos(),
            ));
        }
    }
    build_angle_space(
        names,
        &[["B", "D", "C"]],
        &entries,
        ToleranceConfig::default(),
    )
    .unwrap()
}

pub fn regular_pentagon_space() -> AngleSpace {
    let coords: Vec<Vec<f64>> = (0..5)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 5.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    space_from_coordinates(&["A", "B", "C", "D", "E"], &coords, &[])
}

/// All angles pi/3: the angle table of a regular tetrahedron.
pub fn regular_tetrahedron_space() -> AngleSpace {
    let pts = ["A", "B", "C", "D"];
    build_angle_space(
        pts,
        &[] as &[[&str; 3]],
        &constant_angles(&pts, FRAC_PI_3),
        ToleranceConfig::default(),
    )
    .unwrap()
}

pub fn regular_tetrahedron_metric() -> DistanceMatrix {
    equilateral_metric(&["A", "B", "C", "D"], 1.0)
}

pub fn equilateral_metric(names: &[&str], side: f64) -> DistanceMatrix {
    let pairs: Vec<(&str, &str, f64)> = names
        .iter()
        .tuple_combinations()
        .map(|(a, b)| (*a, *b, side))
        .collect();
    DistanceMatrix::from_pairs(names.iter().copied(), &pairs).unwrap()
}

/// Legs of length 1 meeting at `A`.
pub fn right_isoceles_metric() -> DistanceMatrix {
    DistanceMatrix::from_pairs(
        ["A", "B", "C"],
        &[("A", "B", 1.0), ("A", "C", 1.0), ("B", "C", 2f64.sqrt())],
    )
    .unwrap()
}
