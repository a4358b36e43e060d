//! Regret bounds evaluated as numbers.
//!
//! Trace-dependent bounds take a [`RegretReport`] so the observed `D`, `B_f`
//! and prox path come from the same comparator the regret was measured
//! against. Closed-form bounds take scalar constants.

use crate::bregman::MirrorMap;
use crate::error::{Error, Result};
use crate::geometry::norm_unchecked;
use crate::regret::RegretReport;
use crate::trace::Trace;

/// Declared problem constants for a-priori bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub d: f64,
    pub bf: f64,
    pub g: f64,
    pub l: f64,
    pub rho: f64,
    pub alpha: f64,
    pub n: usize,
    pub horizon: usize,
    pub eta: Option<f64>,
    pub variation: Option<f64>,
}

impl Default for BoundInputs {
    fn default() -> Self {
        Self {
            d: 0.0,
            bf: 0.0,
            g: 0.0,
            l: 0.0,
            rho: 0.0,
            alpha: 0.0,
            n: 1,
            horizon: 1,
            eta: None,
            variation: None,
        }
    }
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("D", self.d),
            ("B_f", self.bf),
            ("G", self.g),
            ("L", self.l),
            ("rho", self.rho),
            ("alpha", self.alpha),
        ];
        for (name, v) in scalars {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.rho >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "rho must be < 1, got {}",
                self.rho
            )));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("T must be at least 1".into()));
        }
        if let Some(eta) = self.eta {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "eta must be positive, got {eta}"
                )));
            }
        }
        if let Some(p) = self.variation {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "gradient variation must be non-negative, got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn gd_simple(&self) -> Result<f64> {
        self.validate()?;
        Ok(gd_simple_bound(self.d, self.bf, self.g, self.horizon))
    }

    pub fn gd_optimized(&self) -> Result<f64> {
        self.validate()?;
        Ok(gd_optimized_bound(self.d, self.bf, self.g, self.horizon))
    }

    pub fn og_game(&self) -> Result<f64> {
        self.validate()?;
        let eta = self
            .eta
            .ok_or_else(|| Error::InvalidParameter("og_game bound needs a fixed eta".into()))?;
        Ok(og_game_bound(
            self.d,
            self.bf,
            self.g,
            self.l,
            self.n,
            self.horizon,
            eta,
        ))
    }

    pub fn og_game_tuned(&self) -> Result<f64> {
        self.validate()?;
        Ok(og_game_bound_tuned(
            self.d,
            self.bf,
            self.g,
            self.l,
            self.n,
            self.horizon,
        ))
    }
}

fn check_report(trace: &Trace, report: &RegretReport) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if report.prox_path.len() != trace.len() {
        return Err(Error::MissingProxPath);
    }
    Ok(())
}

fn check_non_increasing(trace: &Trace) -> Result<()> {
    for w in trace.rounds().windows(2) {
        if w[1].eta > w[0].eta * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "step sizes must be non-increasing, eta_{} = {} > eta_{} = {}",
                w[1].t, w[1].eta, w[0].t, w[0].eta
            )));
        }
    }
    Ok(())
}

/// `Σ_{t<T} c_t ||p^t - p^{t+1}||²` with `c_t = (1-ρ)/(2η_t)`.
fn prox_path_refinement(trace: &Trace, report: &RegretReport, which: crate::geometry::Norm) -> f64 {
    report
        .prox_path
        .windows(2)
        .zip(trace.rounds())
        .map(|(w, r)| {
            let step = norm_unchecked(&(&w[0] - &w[1]), which);
            (1.0 - report.rho) / (2.0 * r.eta) * step * step
        })
        .sum()
}

/// GD bound with the observed `D = max_t ||x^t - p^t||` and
/// `B_f = max_t f(p^t) - min_t f(p^t)`.
pub fn gd_full_bound(trace: &Trace, report: &RegretReport) -> Result<f64> {
    gd_full_bound_with(trace, report, report.d_obs, report.bf_obs)
}

/// `(D² + 2B_f)/(2η_T) + Σ_t (η_t/2)||g^t||² - Σ_{t<T} (1-ρ)/(2η_t) ||p^t - p^{t+1}||²`.
pub fn gd_full_bound_with(trace: &Trace, report: &RegretReport, d: f64, bf: f64) -> Result<f64> {
    check_report(trace, report)?;
    check_non_increasing(trace)?;
    let eta_t = trace.rounds()[trace.len() - 1].eta;
    let gradient_term: f64 = trace
        .rounds()
        .iter()
        .map(|r| 0.5 * r.eta * r.g.norm_squared())
        .sum();
    let refinement = prox_path_refinement(trace, report, crate::geometry::Norm::Euclidean);
    Ok((d * d + 2.0 * bf) / (2.0 * eta_t) + gradient_term - refinement)
}

/// `(D² + B_f + G²)·√T`, valid for `η_t = 1/√t` and `η = 1/√T`.
pub fn gd_simple_bound(d: f64, bf: f64, g: f64, horizon: usize) -> f64 {
    (d * d + bf + g * g) * (horizon as f64).sqrt()
}

/// `G·√(D² + 2B_f)·√T`, attained by `η = √(D² + 2B_f)/(G√T)`.
pub fn gd_optimized_bound(d: f64, bf: f64, g: f64, horizon: usize) -> f64 {
    g * (d * d + 2.0 * bf).sqrt() * (horizon as f64).sqrt()
}

/// `3(1 + ||A||₂)(4D² + D||b|| + G²)·√T` for symmetric linear swap regret of
/// GD with `η_t = 1/√t`.
pub fn symswap_bound(norm_a: f64, d: f64, norm_b: f64, g: f64, horizon: usize) -> f64 {
    3.0 * (1.0 + norm_a) * (4.0 * d * d + d * norm_b + g * g) * (horizon as f64).sqrt()
}

/// OG bound with the anchor-based `D = max_{0<=t<T} ||w^t - p^{t+1}||`:
/// `(D² + 2B_f)/(2η_T) + Σ_t η_t||g^t - g^{t-1}||² - Σ_t ||x^t - w^t||²/(2η_t)`.
pub fn og_adversarial_bound(trace: &Trace, report: &RegretReport) -> Result<f64> {
    check_report(trace, report)?;
    let anchors = trace.anchors().ok_or(Error::NotOgTrace)?;
    let d = report.d_anchor.ok_or(Error::NotOgTrace)?;
    check_non_increasing(trace)?;
    let eta_t = trace.rounds()[trace.len() - 1].eta;
    let variation: f64 = trace
        .rounds()
        .iter()
        .zip(trace.variation_terms())
        .map(|(r, v)| r.eta * v)
        .sum();
    let refinement: f64 = trace
        .rounds()
        .iter()
        .zip(&anchors[1..])
        .map(|(r, w)| (&r.x - *w).norm_squared() / (2.0 * r.eta))
        .sum();
    Ok((d * d + 2.0 * report.bf_obs) / (2.0 * eta_t) + variation - refinement)
}

/// Individual regret of OG in an `n`-player `G`-Lipschitz `L`-smooth game:
/// `(D² + 2B_f)/η + 2ηG² + 3nL²G²η³T`.
pub fn og_game_bound(d: f64, bf: f64, g: f64, l: f64, n: usize, horizon: usize, eta: f64) -> f64 {
    (d * d + 2.0 * bf) / eta
        + 2.0 * eta * g * g
        + 3.0 * n as f64 * l * l * g * g * eta.powi(3) * horizon as f64
}

/// [`og_game_bound`] at `η = T^{-1/4}`, bounded by `(D² + 2B_f + 4nL²G²)T^{1/4}`.
pub fn og_game_bound_tuned(d: f64, bf: f64, g: f64, l: f64, n: usize, horizon: usize) -> f64 {
    (d * d + 2.0 * bf + 4.0 * n as f64 * l * l * g * g) * (horizon as f64).powf(0.25)
}

/// Largest admissible step size for the social-regret bound,
/// `√(min(α, 1)/(8nL²))`.
pub fn social_step_max(alpha: f64, n: usize, l: f64) -> f64 {
    if n == 0 || l == 0.0 {
        return f64::INFINITY;
    }
    (alpha.min(1.0) / (8.0 * n as f64 * l * l)).sqrt()
}

/// `Σ_i (D_i + B_i)/(2η) + nηG²` for OG self-play against `α`-strongly convex
/// comparators. A step size above [`social_step_max`] is an error.
pub fn social_bound(
    diameters: &[f64],
    bfs: &[f64],
    g: f64,
    l: f64,
    alpha: f64,
    eta: f64,
) -> Result<f64> {
    if diameters.len() != bfs.len() {
        return Err(Error::DimensionMismatch {
            expected: diameters.len(),
            got: bfs.len(),
        });
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "social bound needs strongly convex comparators, got alpha = {alpha}"
        )));
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let n = diameters.len();
    let max = social_step_max(alpha, n, l);
    if eta > max * (1.0 + 1e-12) {
        return Err(Error::StepSizeViolation { eta, max });
    }
    let sum: f64 = diameters.iter().zip(bfs).map(|(d, b)| d + b).sum();
    Ok(sum / (2.0 * eta) + n as f64 * eta * g * g)
}

/// Mirror-descent bound with `D = max_t D_φ(p^t|x^t)`, dual-norm gradient
/// terms and the prox-path refinement in the primal norm:
/// `(D + B_f)/η_T + Σ_t (η_t/2)||g^t||_*² - Σ_{t<T} (1-ρ)/(2η_t) ||p^t - p^{t+1}||²`.
pub fn md_bound(trace: &Trace, report: &RegretReport, map: &MirrorMap) -> Result<f64> {
    check_report(trace, report)?;
    let d = report.d_bregman.ok_or(Error::MissingProxPath)?;
    check_non_increasing(trace)?;
    let eta_t = trace.rounds()[trace.len() - 1].eta;
    let dual = map.dual_norm();
    let gradient_term: f64 = trace
        .rounds()
        .iter()
        .map(|r| {
            let n = norm_unchecked(&r.g, dual);
            0.5 * r.eta * n * n
        })
        .sum();
    let refinement = prox_path_refinement(trace, report, map.primal_norm());
    Ok((d + report.bf_obs) / eta_t + gradient_term - refinement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparators::Comparator;
    use crate::geometry::ConvexSet;
    use crate::learners::{run, Learner, StepSchedule};
    use crate::linalg::{Matrix, Vector};
    use crate::regret::{bregman_proximal_regret, proximal_regret, Round};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn random_gradients(learner: &mut Learner, rounds: usize, seed: u64) -> Trace {
        let d = learner.set().dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        run(
            learner,
            &mut |_t: usize, _x: &Vector| {
                Ok(Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
            },
            rounds,
        )
        .unwrap()
    }

    fn random_comparator(d: usize, rng: &mut ChaCha8Rng) -> Comparator {
        let b = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        let mut q = (&b + b.transpose()) * 0.5;
        let shift = rng.random_range(-0.9..0.5);
        let lo = q.symmetric_eigenvalues().min();
        for i in 0..d {
            q[(i, i)] += shift - lo;
        }
        Comparator::quadratic(q, Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn simple_bound_examples() {
        assert_eq!(gd_simple_bound(1.0, 0.0, 1.0, 100), 20.0);
        assert_eq!(gd_simple_bound(1.5, 0.25, 2.0, 1), 1.5 * 1.5 + 0.25 + 4.0);
        assert_eq!(gd_optimized_bound(1.0, 0.0, 1.0, 100), 10.0);
    }

    #[test]
    fn symswap_examples() {
        assert_eq!(symswap_bound(1.0, 1.0, 0.0, 1.0, 100), 300.0);
        assert_eq!(
            symswap_bound(0.5, 2.0, 1.0, 1.0, 1),
            3.0 * 1.5 * (16.0 + 2.0 + 1.0)
        );
    }

    #[test]
    fn og_game_examples() {
        assert_abs_diff_eq!(
            og_game_bound(1.0, 0.0, 1.0, 1.0, 2, 16, 0.5),
            15.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            og_game_bound(1.0, 0.5, 2.0, 3.0, 0, 99, 0.25),
            2.0 / 0.25 + 2.0 * 0.25 * 4.0,
            epsilon = 1e-12
        );
        for t in [1usize, 16, 256, 4096] {
            let eta = (t as f64).powf(-0.25);
            let exact = og_game_bound(1.0, 0.2, 1.0, 1.0, 2, t, eta);
            let tuned = og_game_bound_tuned(1.0, 0.2, 1.0, 1.0, 2, t);
            assert!(exact <= tuned + 1e-9);
        }
    }

    #[test]
    fn og_game_tuned_over_t_decreases() {
        let r = |t: usize| og_game_bound_tuned(1.4, 0.3, 1.0, 1.0, 2, t) / t as f64;
        assert!(r(1 << 8) > r(1 << 10));
        assert!(r(1 << 10) > r(1 << 12));
    }

    #[test]
    fn social_examples() {
        assert_abs_diff_eq!(social_step_max(1.0, 2, 1.0), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(
            social_bound(&[1.0, 1.0], &[0.0, 0.0], 1.0, 1.0, 1.0, 0.25).unwrap(),
            4.5,
            epsilon = 1e-12
        );
        assert!(matches!(
            social_bound(&[1.0, 1.0], &[0.0, 0.0], 1.0, 1.0, 1.0, 0.3),
            Err(Error::StepSizeViolation { .. })
        ));
        assert!(social_bound(&[1.0], &[0.0, 0.0], 1.0, 1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn bound_inputs_validation() {
        let ok = BoundInputs {
            d: 1.0,
            g: 1.0,
            horizon: 100,
            ..Default::default()
        };
        assert_eq!(ok.gd_simple().unwrap(), 20.0);
        assert_eq!(ok.gd_optimized().unwrap(), 10.0);
        assert!(BoundInputs { rho: 1.0, ..ok }.validate().is_err());
        assert!(BoundInputs { horizon: 0, ..ok }.validate().is_err());
        assert!(BoundInputs { d: -1.0, ..ok }.validate().is_err());
        assert!(ok.og_game().is_err());
        assert_abs_diff_eq!(
            BoundInputs {
                eta: Some(0.5),
                l: 1.0,
                n: 2,
                horizon: 16,
                ..ok
            }
            .og_game()
            .unwrap(),
            15.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gd_full_with_constant_comparator_is_nonnegative() {
        for seed in 0..20 {
            let mut l =
                Learner::gd(ConvexSet::simplex(4).unwrap(), StepSchedule::Constant(0.3)).unwrap();
            let trace = random_gradients(&mut l, 100, seed);
            let report = proximal_regret(&trace, &Comparator::constant(0.0)).unwrap();
            assert!(gd_full_bound(&trace, &report).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn zero_gradients_leave_the_leading_term() {
        let set = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let mut l = Learner::gd(set, StepSchedule::InverseSqrt).unwrap();
        let trace = run(
            &mut l,
            &mut |_t: usize, _x: &Vector| Ok(Vector::zeros(2)),
            16,
        )
        .unwrap();
        let f = Comparator::indicator_point(v(&[1.0, 0.0])).unwrap();
        let report = proximal_regret(&trace, &f).unwrap();
        assert_eq!(report.bf_obs, 0.0);
        let d = report.d_obs;
        assert_abs_diff_eq!(
            gd_full_bound(&trace, &report).unwrap(),
            d * d / (2.0 * 0.25),
            epsilon = 1e-12
        );

        let mut og = Learner::og(
            ConvexSet::cube(2, 0.0, 1.0).unwrap(),
            StepSchedule::Constant(0.5),
        )
        .unwrap();
        let trace = run(
            &mut og,
            &mut |_t: usize, _x: &Vector| Ok(Vector::zeros(2)),
            8,
        )
        .unwrap();
        let report = proximal_regret(&trace, &f).unwrap();
        let d = report.d_anchor.unwrap();
        assert_abs_diff_eq!(
            og_adversarial_bound(&trace, &report).unwrap(),
            d * d,
            epsilon = 1e-12
        );
    }

    #[test]
    fn og_bound_errors() {
        let mut l =
            Learner::gd(ConvexSet::simplex(2).unwrap(), StepSchedule::Constant(0.1)).unwrap();
        let trace = random_gradients(&mut l, 5, 0);
        let report = proximal_regret(&trace, &Comparator::constant(0.0)).unwrap();
        assert_eq!(
            og_adversarial_bound(&trace, &report),
            Err(Error::NotOgTrace)
        );
        let mut short = report.clone();
        short.prox_path.pop();
        assert_eq!(gd_full_bound(&trace, &short), Err(Error::MissingProxPath));
        let map = MirrorMap::squared_euclidean(ConvexSet::simplex(2).unwrap());
        assert_eq!(md_bound(&trace, &report, &map), Err(Error::MissingProxPath));
    }

    #[test]
    fn og_constant_gradient_variation_is_first_round_only() {
        let set = ConvexSet::cube(3, -2.0, 2.0).unwrap();
        let mut og = Learner::og(set, StepSchedule::Constant(0.1)).unwrap();
        let g = v(&[0.3, -0.4, 1.0]);
        let trace = run(&mut og, &mut |_t: usize, _x: &Vector| Ok(g.clone()), 50).unwrap();
        let terms = trace.variation_terms();
        assert_abs_diff_eq!(terms[0], g.norm_squared(), epsilon = 1e-15);
        assert!(terms[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn increasing_schedule_is_rejected() {
        let set = ConvexSet::whole_space(1).unwrap();
        let rounds = (1..=3)
            .map(|t| Round {
                t,
                x: v(&[0.0]),
                g: v(&[1.0]),
                eta: t as f64,
                anchor: None,
            })
            .collect();
        let trace = Trace::from_rounds(set, rounds, None);
        let report = proximal_regret(&trace, &Comparator::constant(0.0)).unwrap();
        assert!(matches!(
            gd_full_bound(&trace, &report),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn euclidean_md_bound_matches_gd_bound() {
        for seed in 0..10 {
            let set = ConvexSet::ball(Vector::zeros(3), 1.0).unwrap();
            let map = MirrorMap::squared_euclidean(set.clone());
            let mut l = Learner::md(map.clone(), StepSchedule::InverseSqrt).unwrap();
            let trace = random_gradients(&mut l, 60, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_comparator(3, &mut rng);
            let md = bregman_proximal_regret(&trace, &f, &map).unwrap();
            let gd = proximal_regret(&trace, &f).unwrap();
            assert_abs_diff_eq!(md.regret, gd.regret, epsilon = 1e-7);
            let breg = md_bound(&trace, &md, &map).unwrap();
            let euclid =
                gd_full_bound_with(&trace, &gd, (2.0 * md.d_bregman.unwrap()).sqrt(), gd.bf_obs)
                    .unwrap();
            assert_abs_diff_eq!(breg, euclid, epsilon = 1e-6);
        }
    }

    #[test]
    fn entropy_md_uses_max_norm_gradients() {
        let map = MirrorMap::entropy(ConvexSet::simplex(3).unwrap()).unwrap();
        let mut l = Learner::md(map.clone(), StepSchedule::Constant(0.5)).unwrap();
        let g = v(&[3.0, -1.0, 0.5]);
        let trace = run(&mut l, &mut |_t: usize, _x: &Vector| Ok(g.clone()), 4).unwrap();
        let f = Comparator::constant(0.0);
        let report = bregman_proximal_regret(&trace, &f, &map).unwrap();
        assert_abs_diff_eq!(report.d_bregman.unwrap(), 0.0, epsilon = 1e-15);
        let refinement: f64 = report
            .prox_path
            .windows(2)
            .map(|w| (&w[0] - &w[1]).lp_norm(1).powi(2))
            .sum();
        assert_abs_diff_eq!(
            md_bound(&trace, &report, &map).unwrap(),
            4.0 * 0.25 * 9.0 - refinement,
            epsilon = 1e-12
        );
    }

    proptest! {
        #[test]
        fn simple_bound_is_monotone(d in 0.0f64..5.0, bf in 0.0f64..5.0, g in 0.0f64..5.0, t in 1usize..10_000, k in 0usize..4, delta in 0.0f64..2.0) {
            let base = gd_simple_bound(d, bf, g, t);
            let bumped = match k {
                0 => gd_simple_bound(d + delta, bf, g, t),
                1 => gd_simple_bound(d, bf + delta, g, t),
                2 => gd_simple_bound(d, bf, g + delta, t),
                _ => gd_simple_bound(d, bf, g, t + delta.ceil() as usize),
            };
            prop_assert!(bumped >= base);
        }

        #[test]
        fn gd_regret_is_below_full_bound(seed in 0u64..1000, constant in any::<bool>(), dim in 1usize..5, set_kind in 0usize..3) {
            let set = match set_kind {
                0 => ConvexSet::cube(dim, -1.0, 1.0).unwrap(),
                1 => ConvexSet::ball(Vector::zeros(dim), 1.5).unwrap(),
                _ => ConvexSet::simplex(dim + 1).unwrap(),
            };
            let d = set.dim();
            let schedule = if constant { StepSchedule::Constant(0.1) } else { StepSchedule::InverseSqrt };
            let mut l = Learner::gd(set, schedule).unwrap();
            let trace = random_gradients(&mut l, 80, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let f = random_comparator(d, &mut rng);
            let report = proximal_regret(&trace, &f).unwrap();
            let bound = gd_full_bound(&trace, &report).unwrap();
            prop_assert!(report.regret <= bound + 1e-6, "regret {} bound {}", report.regret, bound);
        }

        #[test]
        fn og_regret_is_below_adversarial_bound(seed in 0u64..1000, constant in any::<bool>(), dim in 1usize..5) {
            let set = ConvexSet::cube(dim, -1.0, 1.0).unwrap();
            let schedule = if constant { StepSchedule::Constant(0.2) } else { StepSchedule::InverseSqrt };
            let mut l = Learner::og(set, schedule).unwrap();
            let trace = random_gradients(&mut l, 80, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdef);
            let mut f = random_comparator(dim, &mut rng);
            if f.rho() > 0.0 {
                f = Comparator::linear(Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0))).unwrap();
            }
            let report = proximal_regret(&trace, &f).unwrap();
            let bound = og_adversarial_bound(&trace, &report).unwrap();
            prop_assert!(report.regret <= bound + 1e-6, "regret {} bound {}", report.regret, bound);
        }
    }
}
