//! Reconstruction of the euclidean-compatible distance of an angle space.
//!
//! Distances are propagated from one fixed pair `(A, B)` with `d(A, B) = lambda`
//! through the law of sines. Pairs that lie on the line through `A` and `B`
//! are reached through an auxiliary point off that line.

use itertools::Itertools;
use serde::Serialize;

use crate::axioms::is_trivial;
use crate::compat::{SineTable, SINE_FLOOR};
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::points::PointId;
use crate::space::AngleSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct BasePair {
    pub a: PointId,
    pub b: PointId,
    pub lambda: f64,
}

impl BasePair {
    pub fn new(a: &str, b: &str, lambda: f64) -> Result<Self> {
        if a == b {
            return Err(Error::OutOfRange {
                what: "base pair",
                expected: "two distinct points".into(),
                got: 1,
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidScale(lambda));
        }
        Ok(Self {
            a: PointId::new(a)?,
            b: PointId::new(b)?,
            lambda,
        })
    }

    /// The first two points in canonical order.
    pub fn canonical(space: &AngleSpace, lambda: f64) -> Result<Self> {
        if space.len() < 2 {
            return Err(Error::OutOfRange {
                what: "points for a base pair",
                expected: "at least 2".into(),
                got: space.len(),
            });
        }
        Self::new(space.label(0).as_str(), space.label(1).as_str(), lambda)
    }
}

struct Propagator<'a> {
    space: &'a AngleSpace,
    sines: SineTable,
}

impl<'a> Propagator<'a> {
    fn new(space: &'a AngleSpace) -> Self {
        Self {
            space,
            sines: SineTable::new(space),
        }
    }

    fn sine(&self, t: [usize; 3]) -> Result<f64> {
        let s = self.sines.get(t);
        if s < SINE_FLOOR {
            let [a, b, c] = t;
            return Err(Error::DegenerateSine {
                a: self.space.label(a).to_string(),
                b: self.space.label(b).to_string(),
                c: self.space.label(c).to_string(),
                value: s,
            });
        }
        Ok(s)
    }

    /// `len * sin(num) / sin(den)`: the side opposite `num` from the side opposite `den`.
    fn scale(&self, len: f64, num: [usize; 3], den: [usize; 3]) -> Result<f64> {
        Ok(len * self.sine(num)? / self.sine(den)?)
    }

    fn col(&self, a: usize, b: usize, c: usize) -> bool {
        self.space.collinear_at(a, b, c)
    }

    fn all_collinear(&self, idx: &[usize]) -> Error {
        Error::AllCollinear(
            self.space
                .points()
                .names(&idx.iter().copied().unique().collect::<Vec<_>>()),
        )
    }

    /// Distance between `c` and `d` determined by `d(a, b) = lambda`.
    fn propagate(&self, a: usize, b: usize, lambda: f64, c: usize, d: usize) -> Result<f64> {
        if c == d {
            return Ok(0.0);
        }
        if (c, d) == (a, b) || (c, d) == (b, a) {
            return Ok(lambda);
        }
        let shared = if c == a || c == b {
            Some((c, d))
        } else if d == a || d == b {
            Some((d, c))
        } else {
            None
        };
        if let Some((s, x)) = shared {
            if self.col(a, b, x) {
                return Err(self.all_collinear(&[a, b, x]));
            }
            // Trigon {a, b, x}: the side opposite b (or a) from the side opposite x.
            return if s == a {
                self.scale(lambda, [a, b, x], [a, x, b])
            } else {
                self.scale(lambda, [b, a, x], [a, x, b])
            };
        }

        // Disjoint pairs: law of sines in trigon {a, c, d}, then in {b, c, d}.
        if !self.col(a, c, d) {
            if !self.col(a, b, c) {
                let ac = self.propagate(a, b, lambda, a, c)?;
                return self.scale(ac, [c, a, d], [a, d, c]);
            }
            if !self.col(a, b, d) {
                let ad = self.propagate(a, b, lambda, a, d)?;
                return self.scale(ad, [c, a, d], [a, c, d]);
            }
        }
        if !self.col(b, c, d) {
            if !self.col(a, b, d) {
                let bd = self.propagate(a, b, lambda, b, d)?;
                return self.scale(bd, [c, b, d], [b, c, d]);
            }
            if !self.col(a, b, c) {
                let bc = self.propagate(a, b, lambda, b, c)?;
                return self.scale(bc, [c, b, d], [b, d, c]);
            }
        }
        Err(self.all_collinear(&[a, b, c, d]))
    }

    /// Distance of a pair on the line through the base, via auxiliary point `r`.
    fn via_auxiliary(
        &self,
        a: usize,
        b: usize,
        lambda: f64,
        r: usize,
        p: usize,
        q: usize,
    ) -> Result<f64> {
        let mu = self.propagate(a, b, lambda, a, r)?;
        self.propagate(a, r, mu, p, q)
    }
}

fn resolve_base(space: &AngleSpace, base: &BasePair) -> Result<(usize, usize)> {
    if !(base.lambda.is_finite() && base.lambda > 0.0) || base.a == base.b {
        return Err(Error::InvalidDistance {
            p: base.a.to_string(),
            q: base.b.to_string(),
            d: base.lambda,
        });
    }
    Ok((
        space.index_of(base.a.as_str())?,
        space.index_of(base.b.as_str())?,
    ))
}

/// Distance between `c` and `d` when the base pair is at distance `lambda`.
pub fn distance_from_base(space: &AngleSpace, base: &BasePair, c: &str, d: &str) -> Result<f64> {
    let (a, b) = resolve_base(space, base)?;
    let (c, d) = (space.index_of(c)?, space.index_of(d)?);
    let set: Vec<usize> = [a, b, c, d].into_iter().unique().collect();
    if set.len() >= 3 && space.collinear_set(&set) {
        return Err(Error::AllCollinear(space.points().names(&set)));
    }
    Propagator::new(space).propagate(a, b, base.lambda, c, d)
}

/// The euclidean-compatible distance with `d(base.a, base.b) = base.lambda`.
pub fn metrize(space: &AngleSpace, base: &BasePair) -> Result<DistanceMatrix> {
    let (a, b) = resolve_base(space, base)?;
    let n = space.len();
    if n >= 3 && is_trivial(space)? {
        return Err(Error::TrivialSpace);
    }
    let eps_rel = space.tolerance().eps_rel;
    let prop = Propagator::new(space);
    let mut values = vec![0.0; n * n];
    for (p, q) in (0..n).tuple_combinations() {
        let set: Vec<usize> = [a, b, p, q].into_iter().unique().collect();
        let v = if set.len() == 2 {
            base.lambda
        } else if !space.collinear_set(&set) {
            prop.propagate(a, b, base.lambda, p, q)?
        } else {
            let mut candidates = (0..n)
                .filter(|r| !set.contains(r))
                .filter(|&r| !prop.col(a, b, r) && !prop.col(p, q, r));
            let r1 = candidates
                .next()
                .ok_or_else(|| Error::AllCollinear(space.names_all()))?;
            let v1 = prop.via_auxiliary(a, b, base.lambda, r1, p, q)?;
            if let Some(r2) = candidates.next() {
                let v2 = prop.via_auxiliary(a, b, base.lambda, r2, p, q)?;
                let dev = (v1 - v2).abs() / v1.max(v2);
                if dev > eps_rel {
                    return Err(Error::Inconsistent {
                        tuple: space.points().names(&[a, b, p, q, r1, r2]),
                        residual: dev,
                    });
                }
            }
            v1
        };
        values[p * n + q] = v;
    }
    let metric = DistanceMatrix::from_fn(space.points().clone(), |i, j| values[i * n + j])?;
    let res = residuals(space, &metric)?;
    if res.max_law_of_cosines_residual > eps_rel {
        return Err(Error::Inconsistent {
            tuple: res
                .worst_law_of_cosines
                .unwrap_or_default()
                .iter()
                .map(|p| p.to_string())
                .collect(),
            residual: res.max_law_of_cosines_residual,
        });
    }
    Ok(metric)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityResiduals {
    /// Largest `|a - sqrt(b^2 + c^2 - 2bc cos alpha)| / max(a, sqrt(...))` over trigons and vertices.
    pub max_law_of_cosines_residual: f64,
    /// Worst `(arm, vertex, arm)` for the law of cosines.
    pub worst_law_of_cosines: Option<Vec<PointId>>,
    /// Largest `(max - min) / max` of the three side-over-sine ratios of a non-degenerate trigon.
    pub max_law_of_sines_residual: f64,
    pub worst_law_of_sines: Option<Vec<PointId>>,
}

impl CompatibilityResiduals {
    pub fn is_compatible(&self, eps_rel: f64) -> bool {
        self.max_law_of_cosines_residual <= eps_rel && self.max_law_of_sines_residual <= eps_rel
    }
}

pub fn residuals(space: &AngleSpace, metric: &DistanceMatrix) -> Result<CompatibilityResiduals> {
    if space.points() != metric.points() {
        return Err(Error::PointSetMismatch);
    }
    let n = space.len();
    let mut out = CompatibilityResiduals {
        max_law_of_cosines_residual: 0.0,
        worst_law_of_cosines: None,
        max_law_of_sines_residual: 0.0,
        worst_law_of_sines: None,
    };
    for (x, y, z) in (0..n).tuple_combinations() {
        for (v, p, q) in [(x, y, z), (y, x, z), (z, x, y)] {
            let (b, c, a) = (metric.get(v, p), metric.get(v, q), metric.get(p, q));
            let predicted = (b * b + c * c - 2.0 * b * c * space.angle_at(p, v, q).cos())
                .max(0.0)
                .sqrt();
            let r = (a - predicted).abs() / a.max(predicted);
            if r > out.max_law_of_cosines_residual || out.worst_law_of_cosines.is_none() {
                out.max_law_of_cosines_residual = r;
                out.worst_law_of_cosines = Some(space.points().ids(&[p, v, q]));
            }
        }
        let sines = [
            space.angle_at(y, x, z).sin(),
            space.angle_at(x, y, z).sin(),
            space.angle_at(x, z, y).sin(),
        ];
        if sines.iter().any(|&s| s < SINE_FLOOR) {
            continue;
        }
        let ratios = [
            metric.get(y, z) / sines[0],
            metric.get(x, z) / sines[1],
            metric.get(x, y) / sines[2],
        ];
        let hi = ratios.iter().copied().fold(f64::MIN, f64::max);
        let lo = ratios.iter().copied().fold(f64::MAX, f64::min);
        let r = (hi - lo) / hi;
        if r > out.max_law_of_sines_residual || out.worst_law_of_sines.is_none() {
            out.max_law_of_sines_residual = r;
            out.worst_law_of_sines = Some(space.points().ids(&[x, y, z]));
        }
    }
    Ok(out)
}
