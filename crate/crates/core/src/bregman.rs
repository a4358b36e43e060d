//! Distance-generating functions, Bregman divergences and Bregman proximal
//! operators.

use crate::comparators::{
    Comparator, ComparatorKind, ProxResult, DEFAULT_PROX_MAX_ITER, DEFAULT_PROX_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{norm_unchecked, ConvexSet, Norm, TOL};
use crate::linalg::{check_dim, check_finite, Vector};

/// Entropy iterates are floored here after renormalization.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorKind {
    /// `φ(x) = ½||x||²`, 1-strongly convex in the Euclidean norm.
    SquaredEuclidean,
    /// `φ(x) = Σ xᵢ log xᵢ` on the simplex, 1-strongly convex in the 1-norm.
    NegativeEntropy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MirrorMap {
    kind: MirrorKind,
    domain: ConvexSet,
}

impl MirrorMap {
    pub fn squared_euclidean(domain: ConvexSet) -> Self {
        Self {
            kind: MirrorKind::SquaredEuclidean,
            domain,
        }
    }

    pub fn entropy(domain: ConvexSet) -> Result<Self> {
        if !domain.is_simplex() {
            return Err(Error::InvalidParameter(
                "the entropy mirror map is defined on the probability simplex".into(),
            ));
        }
        Ok(Self {
            kind: MirrorKind::NegativeEntropy,
            domain,
        })
    }

    pub fn kind(&self) -> MirrorKind {
        self.kind
    }

    pub fn domain(&self) -> &ConvexSet {
        &self.domain
    }

    /// Norm in which `φ` is 1-strongly convex.
    pub fn primal_norm(&self) -> Norm {
        match self.kind {
            MirrorKind::SquaredEuclidean => Norm::Euclidean,
            MirrorKind::NegativeEntropy => Norm::L1,
        }
    }

    pub fn dual_norm(&self) -> Norm {
        match self.kind {
            MirrorKind::SquaredEuclidean => Norm::Euclidean,
            MirrorKind::NegativeEntropy => Norm::Max,
        }
    }

    pub fn potential(&self, x: &Vector) -> f64 {
        match self.kind {
            MirrorKind::SquaredEuclidean => 0.5 * x.norm_squared(),
            MirrorKind::NegativeEntropy => x.iter().map(|v| xlogx(*v)).sum(),
        }
    }

    /// `∇φ(x)`; requires `x > 0` for entropy.
    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        match self.kind {
            MirrorKind::SquaredEuclidean => Ok(x.clone()),
            MirrorKind::NegativeEntropy => {
                if x.iter().any(|v| *v <= 0.0) {
                    return Err(Error::BoundaryDivergence);
                }
                Ok(x.map(|v| v.ln() + 1.0))
            }
        }
    }

    /// `D_φ(x|y) = φ(x) - φ(y) - <∇φ(y), x - y>`.
    pub fn bregman_div(&self, x: &Vector, y: &Vector) -> Result<f64> {
        check_dim(x, self.domain.dim())?;
        check_dim(y, self.domain.dim())?;
        check_finite(x)?;
        check_finite(y)?;
        match self.kind {
            MirrorKind::SquaredEuclidean => Ok(0.5 * (x - y).norm_squared()),
            MirrorKind::NegativeEntropy => {
                if y.iter().any(|v| *v <= 0.0) {
                    return Err(Error::BoundaryDivergence);
                }
                if x.iter().any(|v| *v < 0.0) {
                    return Err(Error::InvalidParameter(
                        "negative entry outside entropy domain".into(),
                    ));
                }
                Ok(x.iter()
                    .zip(y.iter())
                    .map(|(xi, yi)| xlogx(*xi) - xi * yi.ln() + yi - xi)
                    .sum())
            }
        }
    }

    /// `argmin_{y in X} <ηg, y> + D_φ(y|x)`.
    pub fn md_argmin(&self, x: &Vector, g: &Vector, eta: f64) -> Result<Vector> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "step size {eta} must be positive"
            )));
        }
        check_dim(x, self.domain.dim())?;
        check_dim(g, self.domain.dim())?;
        check_finite(g)?;
        match self.kind {
            MirrorKind::SquaredEuclidean => self.domain.project(&(x - g * eta)),
            MirrorKind::NegativeEntropy => {
                if x.iter().any(|v| *v <= 0.0) {
                    return Err(Error::BoundaryDivergence);
                }
                Ok(multiplicative_update(x, &(g * eta)))
            }
        }
    }

    /// `argmin_{y in X} f(y) + D_φ(y|x)`.
    pub fn bregman_prox(&self, f: &Comparator, x: &Vector) -> Result<ProxResult> {
        match self.kind {
            MirrorKind::SquaredEuclidean => f.prox(&self.domain, x),
            MirrorKind::NegativeEntropy => {
                let point = self.bregman_prox_point(f, x)?;
                Ok(self.certify(f, x, point))
            }
        }
    }

    /// The Bregman prox point without the optimality certificate.
    pub fn bregman_prox_point(&self, f: &Comparator, x: &Vector) -> Result<Vector> {
        if self.kind == MirrorKind::SquaredEuclidean {
            return f.prox_point(&self.domain, x);
        }
        check_dim(x, self.domain.dim())?;
        check_finite(x)?;
        if x.iter().any(|v| *v <= 0.0) {
            return Err(Error::BoundaryDivergence);
        }
        match f.kind() {
            ComparatorKind::Linear(v) => {
                check_dim(v, x.len())?;
                Ok(multiplicative_update(x, v))
            }
            ComparatorKind::Constant(_) => Ok(x.clone()),
            ComparatorKind::IndicatorPoint(x0) => {
                if !self.domain.contains(x0, TOL) {
                    return Err(Error::InvalidParameter(
                        "indicator point lies outside the feasible set".into(),
                    ));
                }
                Ok(x0.clone())
            }
            ComparatorKind::IndicatorSet(s) => {
                if s.is_simplex() && s.dim() == x.len() {
                    Ok(x.clone())
                } else {
                    Err(Error::InvalidParameter(
                        "entropy Bregman prox of a set indicator is only available for the simplex itself".into(),
                    ))
                }
            }
            ComparatorKind::Quadratic { .. } => Ok(self
                .bregman_prox_iterative(f, x, DEFAULT_PROX_TOL, DEFAULT_PROX_MAX_ITER)?
                .point),
        }
    }

    /// Mirror-gradient iterations on `F(y) = f(y) + D_φ(y|x)`:
    /// `y ← argmin <s∇F(y), ·> + D_φ(·|y)` with `s = 1/(1 + L_f)`, where
    /// `L_f` bounds the Hessian of `f` from the 1-norm to the max-norm.
    pub fn bregman_prox_iterative(
        &self,
        f: &Comparator,
        x: &Vector,
        tol: f64,
        max_iter: usize,
    ) -> Result<ProxResult> {
        if self.kind == MirrorKind::SquaredEuclidean {
            return f.prox_iterative(&self.domain, x, tol, max_iter);
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        check_dim(x, self.domain.dim())?;
        if x.iter().any(|v| *v <= 0.0) {
            return Err(Error::BoundaryDivergence);
        }
        let curvature = match f.kind() {
            ComparatorKind::Quadratic { q, .. } => q.amax(),
            ComparatorKind::Linear(_) | ComparatorKind::Constant(_) => 0.0,
            _ => {
                let p = self.bregman_prox_point(f, x)?;
                return Ok(self.certify(f, x, p));
            }
        };
        let step = 1.0 / (1.0 + curvature);
        let log_x = x.map(f64::ln);
        let mut y = x.clone();
        let mut displacement = f64::INFINITY;
        for _ in 0..max_iter {
            let grad_f = f.gradient(&y).expect("smooth kind");
            let log_y = y.map(|v| v.max(ENTROPY_FLOOR).ln());
            let grad = grad_f + &log_y - &log_x;
            let next = multiplicative_update(&y, &(grad * step));
            displacement = norm_unchecked(&(&next - &y), Norm::L1);
            y = next;
            if displacement <= tol {
                return Ok(self.certify(f, x, y));
            }
        }
        Err(Error::ProxNonconvergence {
            iterations: max_iter,
            residual: displacement,
        })
    }

    /// Residual of `<∇φ(x) - v - ∇φ(p), x' - p> ≤ 0` over the simplex
    /// vertices, with `v` the comparator's witness subgradient.
    fn certify(&self, f: &Comparator, x: &Vector, point: Vector) -> ProxResult {
        let witness_subgradient = match f.gradient(&point) {
            Some(g) => g,
            None => {
                // normal-cone element for indicators: ∇φ(x) - ∇φ(p)
                let floor = point.map(|v| v.max(ENTROPY_FLOOR));
                match (self.gradient(x), self.gradient(&floor)) {
                    (Ok(gx), Ok(gp)) => gx - gp,
                    _ => Vector::zeros(x.len()),
                }
            }
        };
        let residual = match (
            self.gradient(x),
            self.gradient(&point.map(|v| v.max(ENTROPY_FLOOR))),
        ) {
            (Ok(gx), Ok(gp)) => {
                let u = gx - &witness_subgradient - gp;
                let base = u.dot(&point);
                u.iter().fold(0.0_f64, |m, ui| m.max(ui - base))
            }
            _ => f64::INFINITY,
        };
        ProxResult {
            point,
            witness_subgradient,
            residual,
        }
    }
}

fn xlogx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// `yᵢ ∝ xᵢ exp(-sᵢ)`, exponents shifted by their maximum before
/// exponentiation and entries floored at `ENTROPY_FLOOR`.
fn multiplicative_update(x: &Vector, s: &Vector) -> Vector {
    let logits: Vector = x.zip_map(s, |xi, si| xi.max(ENTROPY_FLOOR).ln() - si);
    let shift = logits.max();
    let w = logits.map(|l| (l - shift).exp());
    let total = w.sum();
    (w / total).map(|v| v.max(ENTROPY_FLOOR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn entropy(d: usize) -> MirrorMap {
        MirrorMap::entropy(ConvexSet::simplex(d).unwrap()).unwrap()
    }

    #[test]
    fn divergence_examples() {
        let e = entropy(2);
        assert_eq!(
            e.bregman_div(&v(&[0.5, 0.5]), &v(&[0.5, 0.5])).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            e.bregman_div(&v(&[1.0, 0.0]), &v(&[0.5, 0.5])).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        let sq = MirrorMap::squared_euclidean(ConvexSet::whole_space(2).unwrap());
        assert_eq!(
            sq.bregman_div(&v(&[1.0, 0.0]), &v(&[0.0, 0.0])).unwrap(),
            0.5
        );
        assert_eq!(
            e.bregman_div(&v(&[0.5, 0.5]), &v(&[1.0, 0.0])),
            Err(Error::BoundaryDivergence)
        );
    }

    #[test]
    fn entropy_requires_simplex() {
        assert!(MirrorMap::entropy(ConvexSet::cube(2, 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn bregman_prox_examples() {
        let e = entropy(2);
        let lin = Comparator::linear(v(&[1.0, 0.0])).unwrap();
        let p = e.bregman_prox(&lin, &v(&[0.5, 0.5])).unwrap();
        let ee = std::f64::consts::E;
        assert_abs_diff_eq!(p.point[0], 1.0 / (1.0 + ee), epsilon = 1e-12);
        assert_abs_diff_eq!(p.point[1], ee / (1.0 + ee), epsilon = 1e-12);
        assert!(p.residual <= 1e-12);

        let x = v(&[0.2, 0.8]);
        assert_eq!(
            e.bregman_prox(&Comparator::constant(0.0), &x)
                .unwrap()
                .point,
            x
        );

        let box2 = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let sq = MirrorMap::squared_euclidean(box2.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let x = box2.sample_member(&mut rng);
            let f = Comparator::linear(v(&[
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]))
            .unwrap();
            let a = sq.bregman_prox(&f, &x).unwrap().point;
            let b = f.prox(&box2, &x).unwrap().point;
            assert!((a - b).amax() <= 1e-9);
        }
    }

    #[test]
    fn md_argmin_examples() {
        let e = entropy(2);
        let y = e
            .md_argmin(&v(&[0.5, 0.5]), &v(&[1.0, 0.0]), std::f64::consts::LN_2)
            .unwrap();
        assert_abs_diff_eq!(y[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(y[1], 2.0 / 3.0, epsilon = 1e-12);
        let x = v(&[0.3, 0.7]);
        assert_eq!(e.md_argmin(&x, &Vector::zeros(2), 0.5).unwrap(), x);

        let sq = MirrorMap::squared_euclidean(ConvexSet::cube(1, 0.0, 1.0).unwrap());
        assert_eq!(
            sq.md_argmin(&v(&[0.05]), &v(&[1.0]), 0.1).unwrap(),
            v(&[0.0])
        );
    }

    #[test]
    fn md_argmin_survives_huge_exponents() {
        let e = entropy(3);
        let y = e
            .md_argmin(&v(&[0.2, 0.3, 0.5]), &v(&[1e4, -1e4, 0.0]), 1.0)
            .unwrap();
        assert!(y.iter().all(|v| v.is_finite() && *v > 0.0));
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-12);
    }

    fn random_interior<R: Rng>(d: usize, rng: &mut R) -> Vector {
        let s = ConvexSet::simplex(d).unwrap();
        s.sample_member(rng).map(|v| v.max(1e-6)).normalize_l1()
    }

    trait NormalizeL1 {
        fn normalize_l1(self) -> Self;
    }
    impl NormalizeL1 for Vector {
        fn normalize_l1(self) -> Self {
            let s = self.sum();
            self / s
        }
    }

    #[test]
    fn three_point_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..7 {
            let maps = [
                entropy(d),
                MirrorMap::squared_euclidean(ConvexSet::simplex(d).unwrap()),
            ];
            for m in &maps {
                for _ in 0..200 {
                    let p = random_interior(d, &mut rng);
                    let x = random_interior(d, &mut rng);
                    let y = random_interior(d, &mut rng);
                    let lhs = m.bregman_div(&p, &x).unwrap()
                        - m.bregman_div(&p, &y).unwrap()
                        - m.bregman_div(&y, &x).unwrap();
                    let rhs = (m.gradient(&x).unwrap() - m.gradient(&y).unwrap()).dot(&(&y - &p));
                    assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn strong_convexity_in_declared_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let d = rng.random_range(2..9);
            let m = entropy(d);
            let x = ConvexSet::simplex(d).unwrap().sample_member(&mut rng);
            let y = random_interior(d, &mut rng);
            let div = m.bregman_div(&x, &y).unwrap();
            let n = norm_unchecked(&(&x - &y), m.primal_norm());
            assert!(div >= 0.5 * n * n - 1e-12);
        }
    }

    #[test]
    fn entropy_quadratic_prox_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let d = rng.random_range(2..6);
            let m = entropy(d);
            let g = Matrix::from_fn(d, d, |_, _| rng.random_range(-0.5..0.5));
            let q = (&g * g.transpose()) * 0.5;
            let f =
                Comparator::quadratic(q, Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
                    .unwrap();
            let x = random_interior(d, &mut rng);
            let r = m.bregman_prox(&f, &x).unwrap();
            assert!(r.residual <= 1e-7, "residual {}", r.residual);
        }
    }

    #[test]
    fn iterative_matches_multiplicative_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = entropy(4);
        for _ in 0..50 {
            let f =
                Comparator::linear(Vector::from_fn(4, |_, _| rng.random_range(-2.0..2.0))).unwrap();
            let x = random_interior(4, &mut rng);
            let a = m.bregman_prox(&f, &x).unwrap().point;
            let b = m.bregman_prox_iterative(&f, &x, 1e-12, 1000).unwrap().point;
            assert!((a - b).amax() <= 1e-9);
        }
    }
}
