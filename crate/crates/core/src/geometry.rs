//! Vectors, norms, and convex feasible sets with exact Euclidean projections.
//!
//! Every set stores its diameter at construction. Whole-space sets are
//! allowed (projection is the identity) and report an infinite diameter;
//! callers that need a finite `D` must supply one.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, check_finite, Vector};

/// Absolute tolerance for floating-point membership checks.
pub const TOL: f64 = 1e-9;

/// Boxes with more corners than this are probed by sampling instead of
/// enumeration.
pub const MAX_ENUMERATED_CORNERS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    Euclidean,
    /// Dual of the 1-norm.
    Max,
    L1,
}

pub fn norm(x: &Vector, which: Norm) -> Result<f64> {
    check_finite(x)?;
    Ok(norm_unchecked(x, which))
}

pub(crate) fn norm_unchecked(x: &Vector, which: Norm) -> f64 {
    match which {
        Norm::Euclidean => x.norm(),
        Norm::Max => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        Norm::L1 => x.iter().map(|v| v.abs()).sum(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetKind {
    Box {
        lo: Vector,
        hi: Vector,
    },
    Ball {
        center: Vector,
        radius: f64,
    },
    /// Probability simplex `{x >= 0, sum x = 1}`.
    Simplex,
    WholeSpace,
    Translate {
        inner: std::boxed::Box<ConvexSet>,
        offset: Vector,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSet {
    dim: usize,
    kind: SetKind,
    diameter: f64,
}

impl ConvexSet {
    pub fn boxed(lo: Vector, hi: Vector) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::InvalidParameter(
                "box must have positive dimension".into(),
            ));
        }
        check_dim(&hi, lo.len())?;
        check_finite(&lo)?;
        check_finite(&hi)?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::InvalidParameter(
                "box lower bound exceeds upper bound".into(),
            ));
        }
        let diameter = (&hi - &lo).norm();
        Ok(Self {
            dim: lo.len(),
            kind: SetKind::Box { lo, hi },
            diameter,
        })
    }

    /// `[lo, hi]^d`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(Vector::from_element(dim, lo), Vector::from_element(dim, hi))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidParameter(
                "ball must have positive dimension".into(),
            ));
        }
        check_finite(&center)?;
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "invalid ball radius {radius}"
            )));
        }
        Ok(Self {
            dim: center.len(),
            kind: SetKind::Ball { center, radius },
            diameter: 2.0 * radius,
        })
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "simplex must have positive dimension".into(),
            ));
        }
        Ok(Self {
            dim,
            kind: SetKind::Simplex,
            diameter: if dim >= 2 {
                std::f64::consts::SQRT_2
            } else {
                0.0
            },
        })
    }

    pub fn whole_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Self {
            dim,
            kind: SetKind::WholeSpace,
            diameter: f64::INFINITY,
        })
    }

    /// `offset + inner`.
    pub fn translate(inner: ConvexSet, offset: Vector) -> Result<Self> {
        check_dim(&offset, inner.dim)?;
        check_finite(&offset)?;
        Ok(Self {
            dim: inner.dim,
            diameter: inner.diameter,
            kind: SetKind::Translate {
                inner: std::boxed::Box::new(inner),
                offset,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn is_bounded(&self) -> bool {
        self.diameter.is_finite()
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self.kind, SetKind::Simplex)
    }

    /// Diameter, or `Error::Unbounded` for whole-space sets.
    pub fn diameter(&self) -> Result<f64> {
        if self.is_bounded() {
            Ok(self.diameter)
        } else {
            Err(Error::Unbounded)
        }
    }

    /// Diameter with `+inf` for unbounded sets.
    pub fn diameter_or_inf(&self) -> f64 {
        self.diameter
    }

    pub fn project(&self, x: &Vector) -> Result<Vector> {
        check_dim(x, self.dim)?;
        check_finite(x)?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Vector) -> Vector {
        match &self.kind {
            SetKind::Box { lo, hi } => Vector::from_iterator(
                self.dim,
                x.iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .map(|(v, (l, h))| v.clamp(*l, *h)),
            ),
            SetKind::Ball { center, radius } => {
                let diff = x - center;
                let dist = diff.norm();
                if dist <= *radius {
                    x.clone()
                } else {
                    center + diff * (*radius / dist)
                }
            }
            SetKind::Simplex => project_simplex(x),
            SetKind::WholeSpace => x.clone(),
            SetKind::Translate { inner, offset } => offset + inner.project_unchecked(&(x - offset)),
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != self.dim || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.kind {
            SetKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol),
            SetKind::Ball { center, radius } => (x - center).norm() <= radius + tol,
            SetKind::Simplex => x.iter().all(|v| *v >= -tol) && (x.sum() - 1.0).abs() <= tol,
            SetKind::WholeSpace => true,
            SetKind::Translate { inner, offset } => inner.contains(&(x - offset), tol),
        }
    }

    /// Box midpoint, ball center, uniform simplex point, origin.
    pub fn center(&self) -> Vector {
        match &self.kind {
            SetKind::Box { lo, hi } => (lo + hi) * 0.5,
            SetKind::Ball { center, .. } => center.clone(),
            SetKind::Simplex => Vector::from_element(self.dim, 1.0 / self.dim as f64),
            SetKind::WholeSpace => Vector::zeros(self.dim),
            SetKind::Translate { inner, offset } => offset + inner.center(),
        }
    }

    /// Upper bound on `||x||` over members; exact for box, ball and simplex.
    pub fn norm_bound(&self) -> f64 {
        match &self.kind {
            SetKind::Box { lo, hi } => lo
                .iter()
                .zip(hi.iter())
                .map(|(l, h)| l.abs().max(h.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            SetKind::Ball { center, radius } => center.norm() + radius,
            SetKind::Simplex => 1.0,
            SetKind::WholeSpace => f64::INFINITY,
            SetKind::Translate { inner, offset } => offset.norm() + inner.norm_bound(),
        }
    }

    /// Vertices when the set is a polytope with few enough of them.
    pub fn extreme_points(&self) -> Option<Vec<Vector>> {
        match &self.kind {
            SetKind::Box { lo, hi } => {
                if self.dim >= usize::BITS as usize || (1usize << self.dim) > MAX_ENUMERATED_CORNERS
                {
                    return None;
                }
                Some(
                    (0..(1usize << self.dim))
                        .map(|mask| {
                            Vector::from_iterator(
                                self.dim,
                                (0..self.dim)
                                    .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }),
                            )
                        })
                        .collect(),
                )
            }
            SetKind::Simplex => Some(
                (0..self.dim)
                    .map(|i| {
                        let mut e = Vector::zeros(self.dim);
                        e[i] = 1.0;
                        e
                    })
                    .collect(),
            ),
            SetKind::Ball { .. } | SetKind::WholeSpace => None,
            SetKind::Translate { inner, offset } => inner
                .extreme_points()
                .map(|pts| pts.into_iter().map(|p| p + offset).collect()),
        }
    }

    /// Exact `min_{x in set} <dir, x>` and a minimizer.
    pub fn minimize_linear(&self, dir: &Vector) -> Result<(f64, Vector)> {
        check_dim(dir, self.dim)?;
        check_finite(dir)?;
        let argmin = match &self.kind {
            SetKind::Box { lo, hi } => Vector::from_iterator(
                self.dim,
                dir.iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .map(|(d, (l, h))| if *d > 0.0 { *l } else { *h }),
            ),
            SetKind::Ball { center, radius } => {
                let n = dir.norm();
                if n == 0.0 {
                    center.clone()
                } else {
                    center - dir * (*radius / n)
                }
            }
            SetKind::Simplex => {
                let (imin, _) =
                    dir.iter()
                        .enumerate()
                        .fold(
                            (0, f64::INFINITY),
                            |(bi, bv), (i, v)| if *v < bv { (i, *v) } else { (bi, bv) },
                        );
                let mut e = Vector::zeros(self.dim);
                e[imin] = 1.0;
                e
            }
            SetKind::WholeSpace => {
                if dir.iter().all(|v| *v == 0.0) {
                    Vector::zeros(self.dim)
                } else {
                    return Err(Error::Unbounded);
                }
            }
            SetKind::Translate { inner, offset } => {
                let (_, y) = inner.minimize_linear(dir)?;
                y + offset
            }
        };
        Ok((dir.dot(&argmin), argmin))
    }

    /// A random member; whole-space sets draw a standard normal vector.
    pub fn sample_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        match &self.kind {
            SetKind::Box { lo, hi } => Vector::from_iterator(
                self.dim,
                lo.iter().zip(hi.iter()).map(|(l, h)| {
                    if l == h {
                        *l
                    } else {
                        rng.random_range(*l..=*h)
                    }
                }),
            ),
            SetKind::Ball { center, radius } => {
                let dir = random_unit(self.dim, rng);
                let u: f64 = rng.random();
                center + dir * (radius * u.powf(1.0 / self.dim as f64))
            }
            SetKind::Simplex => {
                let e = Vector::from_iterator(self.dim, (0..self.dim).map(|_| Exp1.sample(rng)));
                let s: f64 = e.sum();
                e / s
            }
            SetKind::WholeSpace => {
                Vector::from_iterator(self.dim, (0..self.dim).map(|_| StandardNormal.sample(rng)))
            }
            SetKind::Translate { inner, offset } => inner.sample_member(rng) + offset,
        }
    }
}

/// Uniform direction on the unit sphere.
pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(rng)));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Euclidean projection onto the probability simplex by sorting and
/// thresholding.
pub fn project_simplex(x: &Vector) -> Vector {
    let mut sorted: Vec<f64> = x.iter().copied().collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        cumsum += v;
        let candidate = (cumsum - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            tau = candidate;
        }
    }
    x.map(|v| (v - tau).max(0.0))
}
