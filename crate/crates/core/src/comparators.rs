//! Weakly convex comparator functions and their proximal operators.
//!
//! A comparator `f` is ρ-weakly convex with ρ < 1, so the subproblem
//! `min_{y in X} f(y) + ½||y - x||²` is (1-ρ)-strongly convex and
//! `prox_f(x)` is unique. Indicator, linear and unconstrained quadratic
//! comparators have closed forms; quadratics over a constrained set go
//! through projected gradient iterations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{random_unit, ConvexSet, TOL};
use crate::linalg::{
    check_dim, check_finite, inverse, require_symmetric, spectral_norm, sym_eigenvalues, Matrix,
    Vector,
};

/// Membership slack under which the unconstrained prox minimizer is
/// accepted as the constrained one.
pub const FREE_MINIMIZER_TOL: f64 = 1e-12;
pub const DEFAULT_PROX_TOL: f64 = 1e-10;
pub const DEFAULT_PROX_MAX_ITER: usize = 100_000;

/// Number of random members probed when the set has no enumerable
/// extreme points.
pub const RANDOM_PROBES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum ComparatorKind {
    IndicatorPoint(Vector),
    IndicatorSet(ConvexSet),
    Linear(Vector),
    /// `f(x) = ½ xᵀQx + cᵀx`.
    Quadratic {
        q: Matrix,
        c: Vector,
    },
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparator {
    label: String,
    kind: ComparatorKind,
    rho: f64,
    alpha: f64,
    /// Largest Hessian eigenvalue (0 for non-quadratic kinds).
    curvature_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProxResult {
    pub point: Vector,
    pub witness_subgradient: Vector,
    pub residual: f64,
}

impl Comparator {
    fn plain(label: &str, kind: ComparatorKind) -> Self {
        Self {
            label: label.to_string(),
            kind,
            rho: 0.0,
            alpha: 0.0,
            curvature_max: 0.0,
        }
    }

    pub fn indicator_point(x0: Vector) -> Result<Self> {
        check_finite(&x0)?;
        Ok(Self::plain(
            "indicator-point",
            ComparatorKind::IndicatorPoint(x0),
        ))
    }

    pub fn indicator_set(s: ConvexSet) -> Self {
        Self::plain("indicator-set", ComparatorKind::IndicatorSet(s))
    }

    pub fn linear(v: Vector) -> Result<Self> {
        check_finite(&v)?;
        Ok(Self::plain("linear", ComparatorKind::Linear(v)))
    }

    pub fn constant(value: f64) -> Self {
        Self::plain("constant", ComparatorKind::Constant(value))
    }

    /// Quadratic with ρ = max(0, -λ_min(Q)) and α = max(0, λ_min(Q)).
    pub fn quadratic(q: Matrix, c: Vector) -> Result<Self> {
        let rho = Self::quadratic_moduli(&q, &c)?.0.max(0.0);
        Self::quadratic_with_rho(q, c, rho)
    }

    /// Quadratic with an explicitly recorded weak-convexity modulus, which
    /// must dominate -λ_min(Q).
    pub fn quadratic_with_rho(q: Matrix, c: Vector, rho: f64) -> Result<Self> {
        let (neg_min, lmax) = Self::quadratic_moduli(&q, &c)?;
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "weak-convexity modulus {rho} outside [0, 1)"
            )));
        }
        if neg_min > rho + TOL {
            return Err(Error::InvalidParameter(format!(
                "smallest eigenvalue {} below -rho = {}",
                -neg_min, -rho
            )));
        }
        Ok(Self {
            label: "quadratic".into(),
            kind: ComparatorKind::Quadratic { q, c },
            rho,
            alpha: (-neg_min).max(0.0),
            curvature_max: lmax,
        })
    }

    /// Returns (-λ_min, λ_max).
    fn quadratic_moduli(q: &Matrix, c: &Vector) -> Result<(f64, f64)> {
        require_symmetric(q)?;
        check_dim(c, q.nrows())?;
        check_finite(c)?;
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let ev = sym_eigenvalues(q);
        let lmin = ev.first().copied().unwrap_or(0.0);
        let lmax = ev.last().copied().unwrap_or(0.0);
        if -lmin >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "quadratic is {}-weakly convex; prox requires rho < 1",
                -lmin
            )));
        }
        Ok((-lmin, lmax))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &ComparatorKind {
        &self.kind
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_indicator(&self) -> bool {
        matches!(
            self.kind,
            ComparatorKind::IndicatorPoint(_) | ComparatorKind::IndicatorSet(_)
        )
    }

    /// Dimension the comparator is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            ComparatorKind::IndicatorPoint(x0) => Some(x0.len()),
            ComparatorKind::IndicatorSet(s) => Some(s.dim()),
            ComparatorKind::Linear(v) => Some(v.len()),
            ComparatorKind::Quadratic { c, .. } => Some(c.len()),
            ComparatorKind::Constant(_) => None,
        }
    }

    fn check_input(&self, x: &Vector) -> Result<()> {
        if let Some(d) = self.dim() {
            check_dim(x, d)?;
        }
        check_finite(x)
    }

    /// Extended-real value; `+inf` exactly when an indicator is violated.
    pub fn evaluate(&self, x: &Vector) -> f64 {
        match &self.kind {
            ComparatorKind::IndicatorPoint(x0) => {
                if x.len() == x0.len() && (x - x0).norm() <= TOL {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ComparatorKind::IndicatorSet(s) => {
                if s.contains(x, TOL) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            ComparatorKind::Linear(v) => v.dot(x),
            ComparatorKind::Quadratic { q, c } => 0.5 * x.dot(&(q * x)) + c.dot(x),
            ComparatorKind::Constant(value) => *value,
        }
    }

    /// Gradient for the smooth kinds.
    pub fn gradient(&self, x: &Vector) -> Option<Vector> {
        match &self.kind {
            ComparatorKind::Linear(v) => Some(v.clone()),
            ComparatorKind::Quadratic { q, c } => Some(q * x + c),
            ComparatorKind::Constant(_) => Some(Vector::zeros(x.len())),
            _ => None,
        }
    }

    /// Subgradient at `p` certifying `p = prox_f(x)`: the gradient for smooth
    /// kinds and the normal-cone element `x - p` for indicators.
    pub fn witness_subgradient(&self, x: &Vector, p: &Vector) -> Vector {
        self.gradient(p).unwrap_or_else(|| x - p)
    }

    /// Unique minimizer of `f(y) + ½||y - x||²` over `set`.
    pub fn prox(&self, set: &ConvexSet, x: &Vector) -> Result<ProxResult> {
        let point = self.prox_point(set, x)?;
        Ok(self.certify(set, x, point))
    }

    fn certify(&self, set: &ConvexSet, x: &Vector, point: Vector) -> ProxResult {
        let witness_subgradient = self.witness_subgradient(x, &point);
        let residual = optimality_residual(set, x, &point, &witness_subgradient);
        ProxResult {
            point,
            witness_subgradient,
            residual,
        }
    }

    /// The prox point only, without the optimality certificate.
    pub fn prox_point(&self, set: &ConvexSet, x: &Vector) -> Result<Vector> {
        check_dim(x, set.dim())?;
        self.check_input(x)?;
        match &self.kind {
            ComparatorKind::Quadratic { q, c } => {
                let system = Matrix::identity(q.nrows(), q.ncols()) + q;
                let rhs = x - c;
                let free = match system.clone().cholesky() {
                    Some(ch) => ch.solve(&rhs),
                    None => system
                        .lu()
                        .solve(&rhs)
                        .ok_or_else(|| Error::InvalidParameter("singular prox system".into()))?,
                };
                if matches!(set.kind(), crate::geometry::SetKind::WholeSpace) {
                    Ok(free)
                } else if set.contains(&free, FREE_MINIMIZER_TOL) {
                    Ok(set.project_unchecked(&free))
                } else {
                    Ok(self
                        .prox_iterative(set, x, DEFAULT_PROX_TOL, DEFAULT_PROX_MAX_ITER)?
                        .point)
                }
            }
            _ => self.closed_form(set, x),
        }
    }

    fn closed_form(&self, set: &ConvexSet, x: &Vector) -> Result<Vector> {
        match &self.kind {
            ComparatorKind::IndicatorPoint(x0) => {
                if !set.contains(x0, TOL) {
                    return Err(Error::InvalidParameter(
                        "indicator point lies outside the feasible set".into(),
                    ));
                }
                Ok(x0.clone())
            }
            ComparatorKind::IndicatorSet(s) => {
                check_dim(x, s.dim())?;
                let p = s.project(x)?;
                if !set.contains(&p, TOL) {
                    return Err(Error::InvalidParameter(
                        "indicator set is not contained in the feasible set".into(),
                    ));
                }
                Ok(p)
            }
            ComparatorKind::Linear(v) => set.project(&(x - v)),
            ComparatorKind::Constant(_) => set.project(x),
            ComparatorKind::Quadratic { .. } => {
                unreachable!("quadratics have no general closed form")
            }
        }
    }

    /// Projected gradient on `F(y) = f(y) + ½||y - x||²` with step `1/L_F`,
    /// stopping once the fixed-point displacement drops to `tol`.
    pub fn prox_iterative(
        &self,
        set: &ConvexSet,
        x: &Vector,
        tol: f64,
        max_iter: usize,
    ) -> Result<ProxResult> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        check_dim(x, set.dim())?;
        self.check_input(x)?;
        if self.is_indicator() {
            let p = self.closed_form(set, x)?;
            return Ok(self.certify(set, x, p));
        }
        let step = 1.0 / (1.0 + self.curvature_max).max(1.0 - self.rho);
        let mut y = set.project_unchecked(x);
        let mut displacement = f64::INFINITY;
        for _ in 0..max_iter {
            let grad = self.gradient(&y).expect("smooth kind") + &y - x;
            let next = set.project_unchecked(&(&y - grad * step));
            displacement = (&next - &y).norm();
            y = next;
            if displacement <= tol {
                return Ok(self.certify(set, x, y));
            }
        }
        Err(Error::ProxNonconvergence {
            iterations: max_iter,
            residual: displacement,
        })
    }
}

/// `max_{x' in probes} <x - v - p, x' - p>`, floored at zero (p itself is a
/// probe). Polytopes and balls are probed at the exact maximizer of the
/// linear form, which is an extreme point; whole-space sets are probed on
/// the unit sphere around `p`.
fn optimality_residual(set: &ConvexSet, x: &Vector, p: &Vector, v: &Vector) -> f64 {
    let u = x - v - p;
    if set.is_bounded() {
        let mut best = match set.minimize_linear(&(-&u)) {
            Ok((neg, _)) => -neg - u.dot(p),
            Err(_) => f64::INFINITY,
        };
        if set.extreme_points().is_none() {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..RANDOM_PROBES {
                let probe = set.sample_member(&mut rng);
                best = best.max(u.dot(&(probe - p)));
            }
        }
        best.max(0.0)
    } else {
        let mut best = u.norm();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..RANDOM_PROBES {
            best = best.max(u.dot(&random_unit(set.dim(), &mut rng)));
        }
        best.max(0.0)
    }
}

/// Sampled violation of the first-order prox optimality condition at `p`.
pub fn check_prox_optimality(f: &Comparator, set: &ConvexSet, x: &Vector, p: &Vector) -> f64 {
    let v = f.witness_subgradient(x, p);
    optimality_residual(set, x, p, &v)
}

/// Slack of the three-point prox inequality:
/// `[2f(p) - 2f(p_x) - (1-ρ)||p - p_x||²] - [||x - p_x||² - ||x - p||²]`
/// with `p_x = prox_f(x)`. Non-negative up to solver tolerance.
pub fn key_inequality_gap(f: &Comparator, set: &ConvexSet, x: &Vector, p: &Vector) -> Result<f64> {
    let fp = f.evaluate(p);
    if !fp.is_finite() {
        return Err(Error::ComparatorInfeasible);
    }
    let px = f.prox_point(set, x)?;
    let rhs = 2.0 * fp - 2.0 * f.evaluate(&px) - (1.0 - f.rho()) * (p - &px).norm_squared();
    let lhs = (x - &px).norm_squared() - (x - p).norm_squared();
    Ok(rhs - lhs)
}

/// Quadratic `f` whose prox is the symmetric affine map `x ↦ Ax + b`
/// wherever the image stays in the set.
///
/// Requires `A` symmetric positive definite with either λ_max ≤ 1 (then `f`
/// is convex and ρ = 0) or λ_min > ½ (then ρ = ||A⁻¹ - I||₂ < 1).
pub fn affine_to_comparator(a: &Matrix, b: &Vector) -> Result<Comparator> {
    require_symmetric(a)?;
    check_dim(b, a.nrows())?;
    check_finite(b)?;
    let ev = sym_eigenvalues(a);
    let lmin = ev[0];
    let lmax = ev[ev.len() - 1];
    if lmin <= 0.0 {
        return Err(Error::NotProxRepresentable(
            "matrix is not positive definite".into(),
        ));
    }
    let a_inv = inverse(a)?;
    let identity = Matrix::identity(a.nrows(), a.ncols());
    let q = &a_inv - &identity;
    let rho = if lmax <= 1.0 + TOL {
        0.0
    } else if lmin > 0.5 {
        spectral_norm(&q)
    } else {
        return Err(Error::NotProxRepresentable(format!(
            "eigenvalues in [{lmin}, {lmax}] satisfy neither λ_max ≤ 1 nor λ_min > 1/2"
        )));
    };
    let c = -(&a_inv * b);
    if q.amax() <= TOL && c.amax() <= TOL {
        return Ok(Comparator::constant(0.0).with_label("affine"));
    }
    let q = (&q + q.transpose()) * 0.5;
    Ok(Comparator::quadratic_with_rho(q, c, rho)?.with_label("affine"))
}

/// `(A_α, b_α) = ((1-α)I + αA, αb)`.
pub fn interpolate_endomorphism(a: &Matrix, b: &Vector, alpha: f64) -> Result<(Matrix, Vector)> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1]"
        )));
    }
    check_dim(b, a.nrows())?;
    let identity = Matrix::identity(a.nrows(), a.ncols());
    Ok((identity * (1.0 - alpha) + a * alpha, b * alpha))
}

/// The mixing weight `1 / (3(1 + ||A||₂))` that makes `A_α` prox-representable.
pub fn interpolation_alpha(a: &Matrix) -> f64 {
    1.0 / (3.0 * (1.0 + spectral_norm(a)))
}

/// `3D² + D||b||`, the spread bound on `f(p^t)` for the interpolated affine
/// comparator over a set inside `B(0, D)`.
pub fn bf_bound_affine(b: &Vector, d: f64) -> f64 {
    3.0 * d * d + d * b.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn random_symmetric<R: Rng>(d: usize, lo: f64, hi: f64, rng: &mut R) -> Matrix {
        // random orthogonal basis from QR of a Gaussian matrix
        let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        let qr = g.qr().q();
        let diag = Matrix::from_diagonal(&Vector::from_iterator(
            d,
            (0..d).map(|_| rng.random_range(lo..=hi)),
        ));
        let m = &qr * diag * qr.transpose();
        (&m + m.transpose()) * 0.5
    }

    fn sets(d: usize) -> Vec<ConvexSet> {
        vec![
            ConvexSet::cube(d, -1.0, 1.0).unwrap(),
            ConvexSet::ball(Vector::zeros(d), 1.0).unwrap(),
            ConvexSet::simplex(d).unwrap(),
        ]
    }

    #[test]
    fn evaluate_examples() {
        let f = Comparator::indicator_point(v(&[1.0, 0.0])).unwrap();
        assert_eq!(f.evaluate(&v(&[1.0, 0.0])), 0.0);
        assert_eq!(f.evaluate(&v(&[0.0, 1.0])), f64::INFINITY);
        let q = Comparator::quadratic(Matrix::identity(2, 2), Vector::zeros(2)).unwrap();
        assert_eq!(q.evaluate(&v(&[1.0, 1.0])), 1.0);
    }

    #[test]
    fn prox_examples() {
        let simplex = ConvexSet::simplex(2).unwrap();
        let whole = ConvexSet::whole_space(2).unwrap();
        let f = Comparator::indicator_point(v(&[0.2, 0.8])).unwrap();
        assert_eq!(
            f.prox(&simplex, &v(&[0.9, 0.1])).unwrap().point,
            v(&[0.2, 0.8])
        );

        let lin = Comparator::linear(v(&[1.0, 0.0])).unwrap();
        assert_eq!(
            lin.prox(&whole, &v(&[2.0, 3.0])).unwrap().point,
            v(&[1.0, 3.0])
        );

        let q = Comparator::quadratic(Matrix::identity(2, 2) * 0.25, Vector::zeros(2)).unwrap();
        let p = q.prox(&whole, &v(&[1.0, 2.0])).unwrap().point;
        assert_abs_diff_eq!(p[0], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 1.6, epsilon = 1e-12);

        let wc = Comparator::quadratic(Matrix::identity(1, 1) * -0.5, Vector::zeros(1)).unwrap();
        assert_eq!(wc.rho(), 0.5);
        let p = wc
            .prox(&ConvexSet::whole_space(1).unwrap(), &v(&[1.0]))
            .unwrap()
            .point;
        assert_abs_diff_eq!(p[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn prox_rejects_rho_at_least_one() {
        let err = Comparator::quadratic(Matrix::identity(2, 2) * -1.0, Vector::zeros(2));
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
        let err = Comparator::quadratic_with_rho(Matrix::zeros(1, 1), Vector::zeros(1), 1.0);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn prox_iterative_examples() {
        let whole = ConvexSet::whole_space(2).unwrap();
        let q = Comparator::quadratic(Matrix::identity(2, 2) * 0.25, Vector::zeros(2)).unwrap();
        let p = q
            .prox_iterative(&whole, &v(&[1.0, 2.0]), 1e-10, 100_000)
            .unwrap()
            .point;
        assert!((p - v(&[0.8, 1.6])).amax() <= 1e-9);

        let cube = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let lin = Comparator::linear(v(&[1.0, 0.0])).unwrap();
        let p = lin
            .prox_iterative(&cube, &v(&[0.5, 0.5]), 1e-10, 100_000)
            .unwrap()
            .point;
        assert!((p - v(&[0.0, 0.5])).amax() <= 1e-9);

        let zero = Comparator::constant(0.0);
        let x = v(&[0.3, 0.9]);
        assert_eq!(zero.prox_iterative(&cube, &x, 1e-10, 10).unwrap().point, x);
    }

    #[test]
    fn prox_iterative_reports_nonconvergence() {
        let cube = ConvexSet::cube(3, -1.0, 1.0).unwrap();
        let q = Comparator::quadratic(
            Matrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, -0.9, 0.0, 0.0, 0.0, 1.0]),
            v(&[3.0, -1.0, 0.5]),
        )
        .unwrap();
        let err = q
            .prox_iterative(&cube, &v(&[0.2, 0.4, -0.3]), 1e-14, 2)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::ProxNonconvergence { iterations: 2, .. }
        ));
    }

    #[test]
    fn optimality_residual_examples() {
        let whole = ConvexSet::whole_space(2).unwrap();
        let lin = Comparator::linear(v(&[1.0, -2.0])).unwrap();
        let x = v(&[0.4, 0.1]);
        let p = lin.prox_point(&whole, &x).unwrap();
        assert_abs_diff_eq!(
            check_prox_optimality(&lin, &whole, &x, &p),
            0.0,
            epsilon = 1e-12
        );

        let zero = Comparator::constant(0.0);
        let cube = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let x = v(&[0.3, 0.6]);
        assert_eq!(check_prox_optimality(&zero, &cube, &x, &x), 0.0);

        let lin = Comparator::linear(v(&[0.2, 0.1])).unwrap();
        let p = lin.prox_point(&cube, &x).unwrap();
        let perturbed = &p + v(&[0.1, 0.0]);
        assert!(check_prox_optimality(&lin, &cube, &x, &perturbed) > 0.0);
    }

    #[test]
    fn key_inequality_examples() {
        let cube = ConvexSet::cube(2, -1.0, 1.0).unwrap();
        let zero = Comparator::constant(0.0);
        let gap = key_inequality_gap(&zero, &cube, &v(&[0.1, 0.2]), &v(&[-0.5, 0.7])).unwrap();
        assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-12);

        let whole = ConvexSet::whole_space(3).unwrap();
        let lin = Comparator::linear(v(&[0.3, -1.0, 2.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = whole.sample_member(&mut rng) * 3.0;
            let p = whole.sample_member(&mut rng) * 3.0;
            let gap = key_inequality_gap(&lin, &whole, &x, &p).unwrap();
            assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-9);
        }

        let ball = ConvexSet::ball(Vector::zeros(2), 1.0).unwrap();
        let q = Comparator::quadratic(Matrix::identity(2, 2) * 0.5, Vector::zeros(2)).unwrap();
        for _ in 0..100 {
            let x = ball.sample_member(&mut rng);
            let p = ball.sample_member(&mut rng);
            assert!(key_inequality_gap(&q, &ball, &x, &p).unwrap() >= -1e-10);
        }

        let ind = Comparator::indicator_point(v(&[0.0, 0.0])).unwrap();
        assert_eq!(
            key_inequality_gap(&ind, &cube, &v(&[0.1, 0.1]), &v(&[0.5, 0.5])),
            Err(Error::ComparatorInfeasible)
        );
    }

    #[test]
    fn affine_examples() {
        let whole = ConvexSet::whole_space(2).unwrap();
        let f = affine_to_comparator(&(Matrix::identity(2, 2) * 0.8), &Vector::zeros(2)).unwrap();
        assert_eq!(f.rho(), 0.0);
        assert_abs_diff_eq!(f.evaluate(&v(&[1.0, 0.0])), 0.125, epsilon = 1e-12);
        let p = f.prox(&whole, &v(&[1.0, 0.0])).unwrap().point;
        assert_abs_diff_eq!(p[0], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-12);

        let id = affine_to_comparator(&Matrix::identity(2, 2), &Vector::zeros(2)).unwrap();
        assert_eq!(id.kind(), &ComparatorKind::Constant(0.0));

        let a = Matrix::from_diagonal(&v(&[0.6, 0.9]));
        let b = v(&[0.01, 0.0]);
        let f = affine_to_comparator(&a, &b).unwrap();
        let ball = ConvexSet::ball(Vector::zeros(2), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x = ball.sample_member(&mut rng) * 0.9;
            let target = &a * &x + &b;
            assert!(ball.contains(&target, 0.0));
            let p = f.prox(&ball, &x).unwrap().point;
            assert!((p - target).amax() <= 1e-7);
        }
    }

    #[test]
    fn affine_rejects_unrepresentable() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(affine_to_comparator(&a, &Vector::zeros(2)).is_err());
        let a = Matrix::from_diagonal(&v(&[0.3, 1.5]));
        assert!(matches!(
            affine_to_comparator(&a, &Vector::zeros(2)),
            Err(Error::NotProxRepresentable(_))
        ));
        let a = Matrix::from_diagonal(&v(&[-0.2, 0.5]));
        assert!(matches!(
            affine_to_comparator(&a, &Vector::zeros(2)),
            Err(Error::NotProxRepresentable(_))
        ));
    }

    #[test]
    fn affine_case_two_rho_is_spectral_norm() {
        let a = Matrix::from_diagonal(&v(&[0.8, 1.6]));
        let f = affine_to_comparator(&a, &Vector::zeros(2)).unwrap();
        // A⁻¹ - I = diag(0.25, -0.375)
        assert_abs_diff_eq!(f.rho(), 0.375, epsilon = 1e-12);
        let whole = ConvexSet::whole_space(2).unwrap();
        let p = f.prox(&whole, &v(&[1.0, 0.5])).unwrap().point;
        assert!((p - v(&[0.8, 0.8])).amax() <= 1e-12);
    }

    #[test]
    fn interpolation_examples() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let alpha = interpolation_alpha(&a);
        assert_abs_diff_eq!(alpha, 1.0 / 6.0, epsilon = 1e-12);
        let (aa, _) = interpolate_endomorphism(&a, &Vector::zeros(2), alpha).unwrap();
        assert!(sym_eigenvalues(&aa)[0] >= 2.0 / 3.0 - 1e-12);

        let b = v(&[0.3, 0.1]);
        let (a1, b1) = interpolate_endomorphism(&a, &b, 1.0).unwrap();
        assert_eq!(a1, a);
        assert_eq!(b1, b);

        let (am, bm) =
            interpolate_endomorphism(&(-Matrix::identity(2, 2)), &Vector::zeros(2), 1.0 / 6.0)
                .unwrap();
        assert!((am - Matrix::identity(2, 2) * (2.0 / 3.0)).amax() <= 1e-15);
        assert_eq!(bm, Vector::zeros(2));

        assert!(interpolate_endomorphism(&a, &b, 0.0).is_err());
    }

    #[test]
    fn bf_bound_examples() {
        assert_eq!(bf_bound_affine(&Vector::zeros(2), 1.0), 3.0);
        assert_eq!(bf_bound_affine(&v(&[0.6, 0.8]), 0.0), 0.0);
        assert_eq!(bf_bound_affine(&v(&[0.6, 0.8]), 2.0), 14.0);
    }

    #[test]
    fn closed_form_prox_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let d = rng.random_range(1..=6);
            let set = &sets(d)[rng.random_range(0..3)];
            let x = Vector::from_iterator(d, (0..d).map(|_| rng.random_range(-2.0..2.0)));
            let f = match rng.random_range(0..4) {
                0 => Comparator::indicator_point(set.sample_member(&mut rng)).unwrap(),
                1 => Comparator::linear(random_unit(d, &mut rng) * rng.random_range(0.0..2.0))
                    .unwrap(),
                2 => Comparator::constant(1.5),
                _ => Comparator::indicator_set(ConvexSet::ball(set.center(), 0.0).unwrap()),
            };
            let r = f.prox(set, &x).unwrap();
            assert!(set.contains(&r.point, TOL));
            assert!(r.residual <= 1e-7, "residual {}", r.residual);
        }
    }

    #[test]
    fn iterative_prox_matches_unconstrained_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let d = rng.random_range(1..=6);
            let q = random_symmetric(d, -0.9, 3.0, &mut rng);
            let c = Vector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0)));
            let f = Comparator::quadratic(q, c).unwrap();
            let whole = ConvexSet::whole_space(d).unwrap();
            let x = Vector::from_iterator(d, (0..d).map(|_| rng.random_range(-2.0..2.0)));
            let exact = f.prox_point(&whole, &x).unwrap();
            let iter = f
                .prox_iterative(&whole, &x, DEFAULT_PROX_TOL, DEFAULT_PROX_MAX_ITER)
                .unwrap();
            assert!((exact - iter.point).norm() <= 1e-6);
        }
    }

    #[test]
    fn iterative_prox_matches_linear_closed_form_on_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let d = rng.random_range(1..=6);
            for set in sets(d) {
                let f = Comparator::linear(random_unit(d, &mut rng)).unwrap();
                let x = set.sample_member(&mut rng);
                let exact = f.prox_point(&set, &x).unwrap();
                let iter = f.prox_iterative(&set, &x, 1e-12, 1000).unwrap();
                assert!((exact - iter.point).norm() <= 1e-6);
            }
        }
    }

    #[test]
    fn constrained_quadratic_prox_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..300 {
            let d = rng.random_range(1..=6);
            let set = &sets(d)[rng.random_range(0..3)];
            let q = random_symmetric(d, -0.9, 2.0, &mut rng);
            let c = Vector::from_iterator(d, (0..d).map(|_| rng.random_range(-1.0..1.0)));
            let f = Comparator::quadratic(q, c).unwrap();
            let x = Vector::from_iterator(d, (0..d).map(|_| rng.random_range(-2.0..2.0)));
            let r = f.prox(set, &x).unwrap();
            assert!(r.residual <= 1e-7, "residual {}", r.residual);
        }
    }

    #[test]
    fn interpolated_affine_spread_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let d = 3;
        let simplex = ConvexSet::simplex(d).unwrap();
        for _ in 0..20 {
            // symmetric doubly stochastic map of the simplex into itself
            let w: f64 = rng.random_range(0.0..1.0);
            let perm = Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
            let a = Matrix::identity(3, 3) * w + (&perm + perm.transpose()) * (0.5 * (1.0 - w));
            let b = Vector::zeros(d);
            let alpha = interpolation_alpha(&a);
            let (aa, ba) = interpolate_endomorphism(&a, &b, alpha).unwrap();
            let f = affine_to_comparator(&aa, &ba).unwrap();
            let values: Vec<f64> = (0..200)
                .map(|_| {
                    let x = simplex.sample_member(&mut rng);
                    f.evaluate(&f.prox_point(&simplex, &x).unwrap())
                })
                .collect();
            let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(spread <= bf_bound_affine(&b, 1.0) + 1e-9);
        }
    }

    proptest! {
        #[test]
        fn affine_prox_reproduces_map(
            eigs in proptest::collection::vec(0.55f64..1.4, 2..5),
            shift in proptest::collection::vec(-0.05f64..0.05, 4),
            seed in 0u64..1000,
        ) {
            let d = eigs.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
            let basis = g.qr().q();
            let a = &basis * Matrix::from_diagonal(&Vector::from_vec(eigs)) * basis.transpose();
            let a = (&a + a.transpose()) * 0.5;
            let b = Vector::from_iterator(d, shift.into_iter().take(d));
            let f = affine_to_comparator(&a, &b).unwrap();
            prop_assert!(f.rho() < 1.0);
            let ball = ConvexSet::ball(Vector::zeros(d), 2.0).unwrap();
            for _ in 0..20 {
                let x = ball.sample_member(&mut rng) * 0.5;
                let target = &a * &x + &b;
                let p = f.prox_point(&ball, &x).unwrap();
                prop_assert!((p - target).norm() <= 1e-7);
            }
        }

        #[test]
        fn interpolation_preserves_spectrum_bound(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 3;
            let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-2.0..2.0));
            let a = (&g + g.transpose()) * 0.5;
            let alpha = interpolation_alpha(&a);
            let (aa, ba) = interpolate_endomorphism(&a, &Vector::zeros(d), alpha).unwrap();
            prop_assert!(sym_eigenvalues(&aa)[0] >= 2.0 / 3.0 - 1e-12);
            prop_assert!(affine_to_comparator(&aa, &ba).is_ok());
        }
    }
}
