//! Regret accounting over a [`Trace`].
//!
//! All regret here is linearized: `Σ_t <g^t, x^t - φ(x^t)>`. For convex
//! losses this dominates the true-loss regret.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bregman::MirrorMap;
use crate::comparators::Comparator;
use crate::error::{Error, Result};
use crate::geometry::{random_unit, TOL};
use crate::linalg::{check_dim, require_symmetric, Matrix, Vector};
pub use crate::trace::{Round, Trace};

#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    pub comparator_id: String,
    pub regret: f64,
    /// `p^t = prox_f(x^t)` for each round.
    pub prox_path: Vec<Vector>,
    /// `f(p^t)` for each round.
    pub f_values: Vec<f64>,
    /// `max_t ||x^t - p^t||`.
    pub d_obs: f64,
    /// `max_{0<=t<T} ||w^t - p^{t+1}||` for traces with OG anchors.
    pub d_anchor: Option<f64>,
    /// `max_t D_φ(p^t|x^t)` for Bregman reports.
    pub d_bregman: Option<f64>,
    /// `max_t f(p^t) - min_t f(p^t)`.
    pub bf_obs: f64,
    /// `Σ_t ||p^t - p^{t+1}||²`.
    pub path_length: f64,
    pub rho: f64,
    pub alpha: f64,
}

impl RegretReport {
    /// `f(p^1) - f(p^T)`, the spread term valid for constant step sizes.
    pub fn bf_endpoints(&self) -> f64 {
        match (self.f_values.first(), self.f_values.last()) {
            (Some(a), Some(b)) => a - b,
            _ => 0.0,
        }
    }
}

fn assemble(trace: &Trace, f: &Comparator, prox_path: Vec<Vector>) -> RegretReport {
    let rounds = trace.rounds();
    let regret = rounds
        .iter()
        .zip(&prox_path)
        .map(|(r, p)| r.g.dot(&(&r.x - p)))
        .sum();
    let f_values: Vec<f64> = prox_path.iter().map(|p| f.evaluate(p)).collect();
    let d_obs = rounds
        .iter()
        .zip(&prox_path)
        .map(|(r, p)| (&r.x - p).norm())
        .fold(0.0, f64::max);
    let bf_obs = if f.is_indicator() || f_values.is_empty() {
        0.0
    } else {
        let hi = f_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = f_values.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    };
    let path_length = prox_path
        .windows(2)
        .map(|w| (&w[0] - &w[1]).norm_squared())
        .sum();
    let d_anchor = trace.anchors().map(|anchors| {
        anchors
            .iter()
            .zip(&prox_path)
            .map(|(w, p)| (*w - p).norm())
            .fold(0.0, f64::max)
    });
    RegretReport {
        comparator_id: f.label().to_string(),
        regret,
        prox_path,
        f_values,
        d_obs,
        d_anchor,
        d_bregman: None,
        bf_obs,
        path_length,
        rho: f.rho(),
        alpha: f.alpha(),
    }
}

/// `Σ_t <g^t, x^t - prox_f(x^t)>` together with the trace quantities the
/// regret bounds consume.
pub fn proximal_regret(trace: &Trace, f: &Comparator) -> Result<RegretReport> {
    let set = trace.set();
    let prox_path = trace
        .rounds()
        .iter()
        .map(|r| f.prox_point(set, &r.x))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(trace, f, prox_path))
}

/// Proximal regret with the Bregman prox of `map` in place of the
/// Euclidean one.
pub fn bregman_proximal_regret(
    trace: &Trace,
    f: &Comparator,
    map: &MirrorMap,
) -> Result<RegretReport> {
    let prox_path = trace
        .rounds()
        .iter()
        .map(|r| map.bregman_prox_point(f, &r.x))
        .collect::<Result<Vec<_>>>()?;
    let d_bregman = trace
        .rounds()
        .iter()
        .zip(&prox_path)
        .map(|(r, p)| map.bregman_div(p, &r.x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut report = assemble(trace, f, prox_path);
    report.d_bregman = Some(d_bregman);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComparatorFamily {
    Explicit(Vec<Comparator>),
    /// `{linear(v) : ||v|| = 1}`. On whole-space sets the maximizer
    /// `v = ḡ/||ḡ||` is exact; elsewhere `samples` random directions plus
    /// that one are evaluated.
    UnitLinear {
        samples: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRegret {
    pub reports: Vec<RegretReport>,
    best: usize,
    /// The family was sampled, so `max()` is a lower bound on the true sup.
    pub lower_bound: bool,
}

impl FamilyRegret {
    pub fn max(&self) -> &RegretReport {
        &self.reports[self.best]
    }
}

fn members(trace: &Trace, family: &ComparatorFamily) -> Result<(Vec<Comparator>, bool)> {
    match family {
        ComparatorFamily::Explicit(list) => Ok((list.clone(), false)),
        ComparatorFamily::UnitLinear { samples, seed } => {
            let d = trace.set().dim();
            let sum = trace.gradient_sum();
            let n = sum.norm();
            let best = if n > 0.0 {
                sum / n
            } else {
                let mut e = Vector::zeros(d);
                e[0] = 1.0;
                e
            };
            let mut out = vec![Comparator::linear(best)?.with_label("unit-linear/mean-gradient")];
            if !matches!(trace.set().kind(), crate::geometry::SetKind::WholeSpace) {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for k in 0..*samples {
                    out.push(
                        Comparator::linear(random_unit(d, &mut rng))?
                            .with_label(format!("unit-linear/{k}")),
                    );
                }
                Ok((out, true))
            } else {
                Ok((out, false))
            }
        }
    }
}

/// `max_{f in family} Reg_f`, evaluated in parallel across comparators.
pub fn family_regret(trace: &Trace, family: &ComparatorFamily) -> Result<FamilyRegret> {
    let (list, lower_bound) = members(trace, family)?;
    if list.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let reports = list
        .par_iter()
        .map(|f| proximal_regret(trace, f))
        .collect::<Result<Vec<_>>>()?;
    let best = reports.iter().enumerate().fold(
        0,
        |b, (i, r)| if r.regret > reports[b].regret { i } else { b },
    );
    Ok(FamilyRegret {
        reports,
        best,
        lower_bound,
    })
}

/// Linearized external regret `max_{x in X} Σ_t <g^t, x^t - x>`. Unbounded
/// sets need `radius`, which restricts the comparator to `B(0, radius)`.
pub fn external_regret(trace: &Trace, radius: Option<f64>) -> Result<f64> {
    let played: f64 = trace.rounds().iter().map(|r| r.g.dot(&r.x)).sum();
    let sum = trace.gradient_sum();
    let best = match (trace.set().is_bounded(), radius) {
        (true, _) => trace.set().minimize_linear(&sum)?.0,
        (false, Some(r)) => -r * sum.norm(),
        (false, None) => return Err(Error::Unbounded),
    };
    Ok(played - best)
}

/// `||(1/T) Σ_t g^t||`.
pub fn gradient_equilibrium_norm(trace: &Trace) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(trace.gradient_sum().norm() / trace.len() as f64)
}

/// `Σ_t <g^t, x^t - (Ax^t + b)>` for a symmetric endomorphism.
pub fn symmetric_linear_swap_regret(trace: &Trace, a: &Matrix, b: &Vector) -> Result<f64> {
    require_symmetric(a)?;
    let d = trace.set().dim();
    if a.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.nrows(),
        });
    }
    check_dim(b, d)?;
    let mut total = 0.0;
    for r in trace.rounds() {
        let image = a * &r.x + b;
        if !trace.set().contains(&image, TOL) {
            return Err(Error::NotEndomorphism {
                round: r.t,
                witness: image.iter().copied().collect(),
            });
        }
        total += r.g.dot(&(&r.x - image));
    }
    Ok(total)
}
