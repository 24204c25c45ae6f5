//! Simplicial volumes, flatness, embeddability into `E^n` and explicit realization.

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::compat::admits_metric;
use crate::error::{Error, Result};
use crate::linalg::{determinant, max_abs};
use crate::metric::DistanceMatrix;
use crate::metrize::{metrize, BasePair};
use crate::points::{PointId, PointSet};
use crate::space::AngleSpace;
use crate::tolerance::ToleranceConfig;

/// Realized pairwise distances must match the input this closely (relative).
pub const REALIZATION_TOLERANCE: f64 = 1e-8;

/// `<xi, xj, x0> = (d(xi,x0)^2 + d(xj,x0)^2 - d(xi,xj)^2) / 2`, the Gram value at base `x0`.
#[inline]
pub fn gram_at(metric: &DistanceMatrix, x0: usize, xi: usize, xj: usize) -> f64 {
    let (a, b, c) = (metric.get(xi, x0), metric.get(xj, x0), metric.get(xi, xj));
    0.5 * (a * a + b * b - c * c)
}

/// Gram value with the base point `x0`.
pub fn gram(metric: &DistanceMatrix, x0: &str, xi: &str, xj: &str) -> Result<f64> {
    let p = metric.points();
    Ok(gram_at(
        metric,
        p.index_of(x0)?,
        p.index_of(xi)?,
        p.index_of(xj)?,
    ))
}

fn gram_matrix(metric: &DistanceMatrix, simplex: &[usize]) -> Vec<f64> {
    let (x0, rest) = simplex.split_first().expect("non-empty simplex");
    let k = rest.len();
    let mut g = vec![0.0; k * k];
    for (i, &xi) in rest.iter().enumerate() {
        for (j, &xj) in rest.iter().enumerate() {
            g[i * k + j] = gram_at(metric, *x0, xi, xj);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Volume {
    Real(f64),
    /// Volume is `i * value`.
    Imaginary(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexVolume {
    pub order: usize,
    /// Gram determinant `D_n`.
    pub det: f64,
    pub volume: Volume,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn volume_from_det(order: usize, det: f64, threshold: f64) -> Volume {
    if det >= 0.0 {
        Volume::Real(det.sqrt() / factorial(order))
    } else if det >= -threshold {
        Volume::Real(0.0)
    } else {
        Volume::Imaginary((-det).sqrt() / factorial(order))
    }
}

fn simplex_det(metric: &DistanceMatrix, simplex: &[usize], tol: &ToleranceConfig) -> (f64, f64) {
    let g = gram_matrix(metric, simplex);
    let k = simplex.len() - 1;
    (determinant(k, &g), tol.det_threshold(max_abs(&g), k))
}

/// Squared simplicial volume data of an ordered simplex `(x0, x1, ..., xn)`.
pub fn simplex_volume_sq(
    metric: &DistanceMatrix,
    simplex: &[&str],
    tol: &ToleranceConfig,
) -> Result<SimplexVolume> {
    let idx = simplex
        .iter()
        .map(|s| metric.points().index_of(s))
        .collect::<Result<Vec<_>>>()?;
    if idx.len() < 2 || !idx.iter().all_unique() {
        return Err(Error::OutOfRange {
            what: "simplex",
            expected: "at least two distinct points".into(),
            got: idx.iter().unique().count(),
        });
    }
    let (det, threshold) = simplex_det(metric, &idx, tol);
    let order = idx.len() - 1;
    Ok(SimplexVolume {
        order,
        det,
        volume: volume_from_det(order, det, threshold),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub order: usize,
    pub simplex: Vec<PointId>,
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessReport {
    pub k_max: usize,
    /// Largest `k` such that every order `1..=k` has only real volumes.
    pub k_flat_up_to: usize,
    /// Largest `k` with a positive `D_k`, or 0.
    pub dimension: usize,
    /// Simplices with `D_k` below `-threshold` (imaginary volume).
    pub imaginary: Vec<Witness>,
    /// One simplex of largest positive `D_k` per order that has one.
    pub positive: Vec<Witness>,
    /// Orders with positive volumes form a prefix `1..=dimension`.
    pub monotone: bool,
}

impl FlatnessReport {
    pub fn flat_through(&self, k: usize) -> bool {
        self.k_flat_up_to >= k
    }
}

/// Exhaustive `D_k` over every `(k+1)`-subset for `k = 1..=k_max`.
pub fn flatness_and_dimension(
    metric: &DistanceMatrix,
    k_max: usize,
    tol: &ToleranceConfig,
) -> Result<FlatnessReport> {
    let n = metric.len();
    if k_max < 1 || k_max + 1 > n {
        return Err(Error::OutOfRange {
            what: "k_max",
            expected: format!("1..={}", n.saturating_sub(1)),
            got: k_max,
        });
    }
    let mut imaginary = Vec::new();
    let mut positive = Vec::new();
    let mut k_flat_up_to = 0;
    let mut still_flat = true;
    let mut positive_orders = Vec::new();
    for k in 1..=k_max {
        let mut best: Option<Witness> = None;
        let mut flat = true;
        for simplex in (0..n).combinations(k + 1) {
            let (det, threshold) = simplex_det(metric, &simplex, tol);
            if det < -threshold {
                flat = false;
                imaginary.push(Witness {
                    order: k,
                    simplex: metric.points().ids(&simplex),
                    det,
                });
            } else if det > threshold && best.as_ref().is_none_or(|w| det > w.det) {
                best = Some(Witness {
                    order: k,
                    simplex: metric.points().ids(&simplex),
                    det,
                });
            }
        }
        still_flat &= flat;
        if still_flat {
            k_flat_up_to = k;
        }
        if let Some(w) = best {
            positive_orders.push(k);
            positive.push(w);
        }
    }
    let dimension = positive_orders.last().copied().unwrap_or(0);
    let monotone = positive_orders.iter().copied().eq(1..=dimension);
    Ok(FlatnessReport {
        k_max,
        k_flat_up_to,
        dimension,
        imaginary,
        positive,
        monotone,
    })
}

/// Whether the metric embeds isometrically in `E^n`: flat at every order and of dimension at most `n`.
pub fn embeddable_metric(metric: &DistanceMatrix, n: usize, tol: &ToleranceConfig) -> bool {
    if metric.len() <= 1 {
        return true;
    }
    let k_max = metric.len() - 1;
    let report = flatness_and_dimension(metric, k_max, tol).expect("k_max in range");
    report.flat_through(k_max) && report.dimension <= n
}

fn cosine_det(space: &AngleSpace, simplex: &[usize]) -> f64 {
    let (x0, rest) = simplex.split_first().expect("non-empty simplex");
    let k = rest.len();
    let mut m = vec![0.0; k * k];
    for (i, &xi) in rest.iter().enumerate() {
        for (j, &xj) in rest.iter().enumerate() {
            m[i * k + j] = if i == j {
                1.0
            } else {
                space.angle_at(xi, *x0, xj).cos()
            };
        }
    }
    determinant(k, &m)
}

/// Embeddability in `E^n` decided from cosine determinants alone.
///
/// Order `n + 1` determinants must vanish; every other order must be nonnegative.
pub fn embeddable_angles(space: &AngleSpace, n: usize) -> Result<bool> {
    let decision = admits_metric(space);
    if !decision.admits_metric {
        return Err(Error::NotMetrizable(Box::new(decision)));
    }
    let eps = space.tolerance().eps_det;
    let size = space.len();
    for order in 1..size {
        for simplex in (0..size).combinations(order + 1) {
            let det = cosine_det(space, &simplex);
            let ok = if order == n + 1 {
                det.abs() <= eps
            } else {
                det >= -eps
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A realization of a labelled point set in `E^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coordinates {
    points: PointSet,
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl Coordinates {
    pub fn new(points: PointSet, dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != points.len() || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::OutOfRange {
                what: "coordinate rows",
                expected: format!("{} rows of length {dim}", points.len()),
                got: rows.len(),
            });
        }
        Ok(Self { points, dim, rows })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn get(&self, label: &str) -> Result<&[f64]> {
        Ok(&self.rows[self.points.index_of(label)?])
    }

    pub fn distance_at(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .zip(&self.rows[j])
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_metric(&self) -> Result<DistanceMatrix> {
        DistanceMatrix::from_fn(self.points.clone(), |i, j| self.distance_at(i, j))
    }

    /// Angle at `b` toward `a` and `c`, stable near 0 and pi.
    pub fn angle_at(&self, a: usize, b: usize, c: usize) -> f64 {
        let u: Vec<f64> = self.rows[a]
            .iter()
            .zip(&self.rows[b])
            .map(|(x, y)| x - y)
            .collect();
        let v: Vec<f64> = self.rows[c]
            .iter()
            .zip(&self.rows[b])
            .map(|(x, y)| x - y)
            .collect();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (mut diff, mut sum) = (0.0, 0.0);
        for (x, y) in u.iter().zip(&v) {
            let (p, q) = (x * nv, y * nu);
            diff += (p - q) * (p - q);
            sum += (p + q) * (p + q);
        }
        2.0 * diff.sqrt().atan2(sum.sqrt())
    }

    /// Largest `|measured - table|` over every angle of the space.
    fn max_angle_error(&self, space: &AngleSpace) -> (f64, Vec<usize>) {
        let n = space.len();
        let mut worst = (0.0, Vec::new());
        for b in 0..n {
            for (a, c) in (0..n).filter(|&p| p != b).tuple_combinations() {
                let e = (self.angle_at(a, b, c) - space.angle_at(a, b, c)).abs();
                if e > worst.0 || worst.1.is_empty() {
                    worst = (e, vec![a, b, c]);
                }
            }
        }
        worst
    }
}

fn check_distances(coords: &Coordinates, metric: &DistanceMatrix) -> Result<()> {
    for (i, j, d) in metric.pairs() {
        let got = coords.distance_at(i, j);
        let r = (got - d).abs() / d;
        if r > REALIZATION_TOLERANCE {
            return Err(Error::RealizationMismatch {
                tuple: metric.points().names(&[i, j]),
                residual: r,
            });
        }
    }
    Ok(())
}

/// Coordinates in `E^n` realizing the metric, with the base point at the origin.
pub fn realize(metric: &DistanceMatrix, n: usize, tol: &ToleranceConfig) -> Result<Coordinates> {
    let size = metric.len();
    let points = metric.points().clone();
    if size <= 1 {
        return Coordinates::new(points, n, vec![vec![0.0; n]; size]);
    }
    // Base: the point whose nearest neighbour is farthest; first in canonical order on ties.
    let nearest = |i: usize| {
        (0..size)
            .filter(|&j| j != i)
            .map(|j| metric.get(i, j))
            .fold(f64::INFINITY, f64::min)
    };
    let base = (0..size).fold(
        0,
        |best, i| if nearest(i) > nearest(best) { i } else { best },
    );
    let others: Vec<usize> = (0..size).filter(|&i| i != base).collect();
    let k = others.len();
    let g = DMatrix::from_fn(k, k, |i, j| gram_at(metric, base, others[i], others[j]));
    let scale = g.amax();
    let eig = SymmetricEigen::new(g);
    let order: Vec<usize> = (0..k)
        .sorted_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]))
        .collect();
    let floor = tol.eps_det * scale;
    if let Some(&lowest) = order.last() {
        if eig.eigenvalues[lowest] < -floor {
            return Err(Error::NotFlat {
                eigenvalue: eig.eigenvalues[lowest],
            });
        }
    }
    let rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > floor)
        .count();
    if rank > n {
        return Err(Error::RankExceeded { rank, dim: n });
    }
    let mut rows = vec![vec![0.0; n]; size];
    for (slot, &p) in others.iter().enumerate() {
        for (axis, &e) in order.iter().take(n).enumerate() {
            // Eigenvalues at noise level would otherwise contribute sqrt(noise) offsets.
            let lambda = eig.eigenvalues[e];
            if lambda > floor {
                rows[p][axis] = lambda.sqrt() * eig.eigenvectors[(slot, e)];
            }
        }
    }
    let coords = Coordinates::new(points, n, rows)?;
    check_distances(&coords, metric)?;
    Ok(coords)
}

/// Places the points of a trivial space on the first axis in betweenness order, `lambda` apart.
fn realize_on_line(space: &AngleSpace, n: usize, lambda: f64) -> Result<Coordinates> {
    let size = space.len();
    let rel = space.betweenness();
    let end = (0..size)
        .find(|&m| !rel.triples().any(|t| t[1] == m))
        .unwrap_or(0);
    let mut order: Vec<usize> = (0..size).filter(|&p| p != end).collect();
    order.sort_by(|&p, &q| {
        if rel.contains(end, p, q) {
            std::cmp::Ordering::Less
        } else if rel.contains(end, q, p) {
            std::cmp::Ordering::Greater
        } else {
            p.cmp(&q)
        }
    });
    order.insert(0, end);
    let mut rows = vec![vec![0.0; n]; size];
    for (pos, &p) in order.iter().enumerate() {
        rows[p][0] = pos as f64 * lambda;
    }
    Coordinates::new(space.points().clone(), n, rows)
}

/// Coordinates in `E^n` whose angles reproduce the space's angle table.
pub fn conformal_embed(space: &AngleSpace, n: usize, lambda: f64) -> Result<Coordinates> {
    let tol = *space.tolerance();
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidScale(lambda));
    }
    if n == 0 {
        return if space.len() <= 1 {
            Coordinates::new(space.points().clone(), 0, vec![vec![]; space.len()])
        } else {
            Err(Error::NotEmbeddable(0))
        };
    }
    let decision = admits_metric(space);
    if !decision.admits_metric {
        return Err(Error::NotMetrizable(Box::new(decision)));
    }
    let coords = if decision.trivial {
        realize_on_line(space, n, lambda)?
    } else if space.len() <= 1 {
        Coordinates::new(space.points().clone(), n, vec![vec![0.0; n]; space.len()])?
    } else {
        let metric = metrize(space, &BasePair::canonical(space, lambda)?)?;
        if !embeddable_metric(&metric, n, &tol) {
            return Err(Error::NotEmbeddable(n));
        }
        realize(&metric, n, &tol)?
    };
    let (err, worst) = coords.max_angle_error(space);
    if err > tol.eps_angle {
        return Err(Error::RealizationMismatch {
            tuple: space.points().names(&worst),
            residual: err,
        });
    }
    Ok(coords)
}
