//! Seeded loss oracles used as adversaries in experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::random_unit;
use crate::learners::LossOracle;
use crate::linalg::{check_dim, Vector};

/// Declarative adversary description as it appears in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    pub kind: String,
    /// Gradient norm for `iid-linear`, `alternating-sign` and `constant`.
    #[serde(default = "default_g")]
    pub g: f64,
    /// Target quantile level for `pinball`.
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default)]
    pub score_mean: f64,
    #[serde(default = "default_score_std")]
    pub score_std: f64,
}

fn default_g() -> f64 {
    1.0
}

fn default_q() -> f64 {
    0.5
}

fn default_score_std() -> f64 {
    1.0
}

impl AdversarySpec {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            g: default_g(),
            q: default_q(),
            score_mean: 0.0,
            score_std: default_score_std(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryKind {
    /// `g^t` uniform on the sphere of radius `g`.
    IidLinear { g: f64 },
    /// `g^t = (-1)^t g u` with `u = 1/√d`.
    AlternatingSign { g: f64 },
    /// `g^t = g u` every round.
    Constant { g: f64 },
    /// Subgradient `q - 1{y^t > x^t}` of the pinball loss against a normal
    /// score stream, in one dimension.
    Pinball { q: f64, scores: Normal<f64> },
    /// `g^t_k = sign(x^t_k)/√d`, with a seeded coin at zero.
    WorstCaseExternal,
}

#[derive(Debug, Clone)]
pub struct Adversary {
    kind: AdversaryKind,
    dim: usize,
    rng: ChaCha8Rng,
    scores: Vec<f64>,
}

/// Builds the adversary `spec.kind` for `dim`-dimensional play.
pub fn adversary(spec: &AdversarySpec, dim: usize, seed: u64) -> Result<Adversary> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let positive_g = || {
        if spec.g.is_finite() && spec.g >= 0.0 {
            Ok(spec.g)
        } else {
            Err(Error::InvalidParameter(format!(
                "adversary g must be non-negative, got {}",
                spec.g
            )))
        }
    };
    let kind = match spec.kind.as_str() {
        "iid-linear" => AdversaryKind::IidLinear { g: positive_g()? },
        "alternating-sign" => AdversaryKind::AlternatingSign { g: positive_g()? },
        "constant" => AdversaryKind::Constant { g: positive_g()? },
        "pinball" => {
            if dim != 1 {
                return Err(Error::InvalidParameter(
                    "the pinball adversary is one-dimensional".into(),
                ));
            }
            if !(spec.q > 0.0 && spec.q < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "pinball q must lie in (0, 1), got {}",
                    spec.q
                )));
            }
            let scores = Normal::new(spec.score_mean, spec.score_std)
                .map_err(|e| Error::InvalidParameter(format!("pinball score stream: {e}")))?;
            AdversaryKind::Pinball { q: spec.q, scores }
        }
        "worst-case-external" => AdversaryKind::WorstCaseExternal,
        other => return Err(Error::UnknownAdversary(other.to_string())),
    };
    Ok(Adversary {
        kind,
        dim,
        rng: ChaCha8Rng::seed_from_u64(seed),
        scores: Vec::new(),
    })
}

impl Adversary {
    pub fn kind(&self) -> &AdversaryKind {
        &self.kind
    }

    /// Largest gradient norm this adversary can produce.
    pub fn g_bound(&self) -> f64 {
        match &self.kind {
            AdversaryKind::IidLinear { g }
            | AdversaryKind::AlternatingSign { g }
            | AdversaryKind::Constant { g } => *g,
            AdversaryKind::Pinball { q, .. } => q.max(1.0 - q),
            AdversaryKind::WorstCaseExternal => 1.0,
        }
    }

    /// Pinball scores `y^1, y^2, ...` drawn so far.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Explicit convex loss behind the gradients, when there is one:
    /// `ℓ^t(x) = max(q(x - y^t), (q - 1)(x - y^t))` for `pinball`.
    pub fn loss(&self, t: usize, x: &Vector) -> Option<f64> {
        match &self.kind {
            AdversaryKind::Pinball { q, .. } => {
                let r = x[0] - self.scores.get(t.checked_sub(1)?)?;
                Some((q * r).max((q - 1.0) * r))
            }
            _ => None,
        }
    }

    fn diagonal(&self) -> Vector {
        Vector::from_element(self.dim, 1.0 / (self.dim as f64).sqrt())
    }
}

impl LossOracle for Adversary {
    fn gradient(&mut self, t: usize, x: &Vector) -> Result<Vector> {
        check_dim(x, self.dim)?;
        Ok(match &self.kind {
            AdversaryKind::IidLinear { g } => random_unit(self.dim, &mut self.rng) * *g,
            AdversaryKind::AlternatingSign { g } => {
                let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
                self.diagonal() * (sign * g)
            }
            AdversaryKind::Constant { g } => self.diagonal() * *g,
            AdversaryKind::Pinball { q, scores } => {
                let y = scores.sample(&mut self.rng);
                self.scores.push(y);
                Vector::from_element(1, if y > x[0] { q - 1.0 } else { *q })
            }
            AdversaryKind::WorstCaseExternal => {
                let scale = 1.0 / (self.dim as f64).sqrt();
                let mut g = Vector::zeros(self.dim);
                for k in 0..self.dim {
                    let s = if x[k] > 0.0 {
                        1.0
                    } else if x[k] < 0.0 {
                        -1.0
                    } else if self.rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    };
                    g[k] = s * scale;
                }
                g
            }
        })
    }
}
