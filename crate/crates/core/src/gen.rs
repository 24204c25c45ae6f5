//! Seeded euclidean configurations used as ground truth.
//!
//! Algorithm, for `(m, N, seed, k)`:
//! 1. Seed a ChaCha8 generator with the 64-bit seed.
//! 2. Draw the first `N - k` points uniformly in `[0,1]^m`.
//! 3. Pick `k` distinct pairs of those points and place one new point on each
//!    segment at parameter `t` uniform in `[0.2, 0.8]`.
//! 4. Reject the sample and redraw (same stream) when two points are closer
//!    than [`MIN_SEPARATION`] or, for `m >= 2`, an unplanted triple has an angle
//!    whose sine is below [`MIN_SINE`]. Give up after [`MAX_ATTEMPTS`] draws.
//!
//! Betweenness comes from the construction: for `m = 1` from the exact
//! coordinate order, otherwise from the planted triples only. Collinear triples
//! get exact angles 0 and pi; all others use the arccos of the law of cosines.

use std::f64::consts::PI;

use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embed::Coordinates;
use crate::error::{Error, Result};
use crate::io::{CoordinatesDocument, MetricDocument, SpaceDocument};
use crate::metric::DistanceMatrix;
use crate::points::{PointId, PointSet};
use crate::space::{build_angle_space, AngleEntry, AngleSpace};
use crate::tolerance::ToleranceConfig;

pub const MIN_SEPARATION: f64 = 1e-6;
/// Keeps unplanted triples far enough from collinear for every tolerance test.
pub const MIN_SINE: f64 = 1e-3;
pub const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub coordinates: Coordinates,
    pub metric: DistanceMatrix,
    pub space: AngleSpace,
    /// Planted triples `(p, x, q)` with `x` on the segment `pq`.
    pub planted: Vec<[PointId; 3]>,
}

/// The three documents describing one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratedDocuments {
    pub coordinates: CoordinatesDocument,
    pub metric: MetricDocument,
    pub space: SpaceDocument,
}

impl GeneratedInstance {
    pub fn documents(&self) -> GeneratedDocuments {
        GeneratedDocuments {
            coordinates: CoordinatesDocument::from_coordinates(&self.coordinates),
            metric: MetricDocument::from_metric(&self.metric),
            space: SpaceDocument::from_space(&self.space),
        }
    }
}

/// `A..Z` for up to 26 points, otherwise zero-padded `P0..`.
pub fn point_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (b'A'..)
            .take(n)
            .map(|c| char::from(c).to_string())
            .collect()
    } else {
        let width = (n - 1).to_string().len();
        (0..n).map(|i| format!("P{i:0width$}")).collect()
    }
}

fn distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Angle at the vertex opposite side `c`, from the three side lengths.
fn law_of_cosines(a: f64, b: f64, c: f64) -> f64 {
    ((a * a + b * b - c * c) / (2.0 * a * b))
        .clamp(-1.0, 1.0)
        .acos()
}

struct Sample {
    rows: Vec<Vec<f64>>,
    planted: Vec<[usize; 3]>,
}

fn draw(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> Sample {
    let base = n - k;
    let mut rows: Vec<Vec<f64>> = (0..base)
        .map(|_| (0..m).map(|_| rng.random::<f64>()).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..base).tuple_combinations().collect();
    let chosen: Vec<(usize, usize)> = pairs.choose_multiple(rng, k).copied().collect();
    let mut planted = Vec::with_capacity(k);
    for (slot, (p, q)) in chosen.into_iter().enumerate() {
        let t: f64 = rng.random_range(0.2..=0.8);
        rows.push(
            rows[p]
                .iter()
                .zip(&rows[q])
                .map(|(x, y)| x + t * (y - x))
                .collect(),
        );
        planted.push([p, base + slot, q]);
    }
    Sample { rows, planted }
}

fn collinear_triples(sample: &Sample, m: usize) -> Vec<[usize; 3]> {
    if m == 1 {
        let n = sample.rows.len();
        let x = |i: usize| sample.rows[i][0];
        (0..n)
            .permutations(3)
            .filter(|t| x(t[0]) < x(t[1]) && x(t[1]) < x(t[2]))
            .map(|t| [t[0], t[1], t[2]])
            .collect()
    } else {
        sample.planted.clone()
    }
}

fn acceptable(sample: &Sample, m: usize, collinear: &[[usize; 3]]) -> bool {
    let n = sample.rows.len();
    let d = |i: usize, j: usize| distance(&sample.rows[i], &sample.rows[j]);
    if (0..n)
        .tuple_combinations()
        .any(|(i, j)| d(i, j) < MIN_SEPARATION)
    {
        return false;
    }
    if m == 1 {
        return true;
    }
    let is_planted = |t: [usize; 3]| {
        collinear.iter().any(|p| {
            let mut p = *p;
            p.sort_unstable();
            p == t
        })
    };
    (0..n).tuple_combinations().all(|(a, b, c)| {
        if is_planted([a, b, c]) {
            return true;
        }
        let (ab, bc, ac) = (d(a, b), d(b, c), d(a, c));
        [
            law_of_cosines(ab, bc, ac),
            law_of_cosines(ab, ac, bc),
            law_of_cosines(ac, bc, ab),
        ]
        .iter()
        .all(|theta| theta.sin() >= MIN_SINE)
    })
}

/// Seeded euclidean configuration with `k` planted collinear triples.
pub fn gen_euclidean(m: usize, n: usize, seed: u64, k: usize) -> Result<GeneratedInstance> {
    if m < 1 {
        return Err(Error::InfeasibleGenerator(
            "dimension must be at least 1".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InfeasibleGenerator(
            "at least 3 points are required".into(),
        ));
    }
    let base = n.saturating_sub(k);
    if base < 2 || base * (base - 1) / 2 < k {
        return Err(Error::InfeasibleGenerator(format!(
            "{k} planted triples need {k} distinct pairs among the remaining {} points",
            base
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let sample = draw(&mut rng, m, n, k);
        let collinear = collinear_triples(&sample, m);
        if acceptable(&sample, m, &collinear) {
            return assemble(sample, m, &collinear);
        }
    }
    Err(Error::DegenerateSample(MAX_ATTEMPTS))
}

fn assemble(sample: Sample, m: usize, collinear: &[[usize; 3]]) -> Result<GeneratedInstance> {
    let n = sample.rows.len();
    let labels = point_labels(n);
    let points = PointSet::new(labels.iter().cloned())?;
    // Labels are generated in canonical order, so indices coincide.
    let coordinates = Coordinates::new(points.clone(), m, sample.rows)?;
    let metric = coordinates.to_metric()?;

    let mut exact = vec![None; n * n * n];
    let slot = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for &[a, b, c] in collinear {
        for (x, y, z, theta) in [
            (a, b, c, PI),
            (c, b, a, PI),
            (b, a, c, 0.0),
            (c, a, b, 0.0),
            (a, c, b, 0.0),
            (b, c, a, 0.0),
        ] {
            exact[slot(x, y, z)] = Some(theta);
        }
    }
    let mut angles = Vec::new();
    for (a, c) in (0..n).tuple_combinations() {
        for b in (0..n).filter(|&b| b != a && b != c) {
            let theta = exact[slot(a, b, c)].unwrap_or_else(|| {
                law_of_cosines(metric.get(a, b), metric.get(b, c), metric.get(a, c))
            });
            angles.push(AngleEntry::new(&labels[a], &labels[b], &labels[c], theta));
        }
    }
    let triples: Vec<[&str; 3]> = collinear
        .iter()
        .map(|&[a, b, c]| [labels[a].as_str(), labels[b].as_str(), labels[c].as_str()])
        .collect();
    let space = build_angle_space(
        labels.iter().cloned(),
        &triples,
        &angles,
        ToleranceConfig::default(),
    )?;
    let planted = sample
        .planted
        .iter()
        .map(|t| points.ids(t).try_into().expect("three ids"))
        .collect();
    Ok(GeneratedInstance {
        coordinates,
        metric,
        space,
        planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::{admits_metric, check_second_axiom};
    use crate::embed::embeddable_angles;

    #[test]
    fn labels() {
        assert_eq!(point_labels(3), ["A", "B", "C"]);
        assert_eq!(point_labels(27)[0], "P00");
        assert_eq!(point_labels(27)[26], "P26");
        assert_eq!(point_labels(101)[7], "P007");
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_euclidean(2, 6, 42, 1).unwrap();
        let b = gen_euclidean(2, 6, 42, 1).unwrap();
        let json = |g: &GeneratedInstance| serde_json::to_string(&g.documents()).unwrap();
        assert_eq!(json(&a), json(&b));
        assert_ne!(json(&a), json(&gen_euclidean(2, 6, 43, 1).unwrap()));
    }

    #[test]
    fn planar_sample_is_admissible() {
        let g = gen_euclidean(2, 6, 7, 0).unwrap();
        assert!(admits_metric(&g.space).admits_metric);
        assert!(embeddable_angles(&g.space, 2).unwrap());
    }

    #[test]
    fn planted_triple_makes_second_axiom_nonvacuous() {
        let g = gen_euclidean(2, 5, 11, 1).unwrap();
        assert_eq!(g.planted.len(), 1);
        assert_eq!(g.space.betweenness().canonical_triples().count(), 1);
        let [p, x, q] = &g.planted[0];
        let (p, x, q) = (p.as_str(), x.as_str(), q.as_str());
        assert_eq!(g.space.angle(p, x, q).unwrap(), PI);
        assert!(check_second_axiom(&g.space).passed);
        // The planted point really lies on the segment.
        let d = |u: &str, v: &str| g.metric.distance(u, v).unwrap();
        assert!((d(p, x) + d(x, q) - d(p, q)).abs() < 1e-14);
    }

    #[test]
    fn line_samples_are_totally_ordered() {
        let g = gen_euclidean(1, 5, 3, 1).unwrap();
        assert_eq!(g.space.betweenness().canonical_triples().count(), 10);
        assert!(crate::axioms::is_trivial(&g.space).unwrap());
    }

    #[test]
    fn infeasible_requests() {
        assert!(matches!(
            gen_euclidean(0, 5, 1, 0),
            Err(Error::InfeasibleGenerator(_))
        ));
        assert!(matches!(
            gen_euclidean(2, 2, 1, 0),
            Err(Error::InfeasibleGenerator(_))
        ));
        assert!(matches!(
            gen_euclidean(2, 4, 1, 2),
            Err(Error::InfeasibleGenerator(_))
        ));
        assert!(matches!(
            gen_euclidean(2, 4, 1, 3),
            Err(Error::InfeasibleGenerator(_))
        ));
        assert!(gen_euclidean(2, 5, 1, 2).is_ok());
    }
}
