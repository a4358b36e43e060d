//! Experiment configuration files (TOML).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::adversary::AdversarySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Adversarial,
    SelfPlay,
    Fuzz,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Adversarial => "adversarial",
            Mode::SelfPlay => "self-play",
            Mode::Fuzz => "fuzz",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Cube {
        dim: usize,
        lo: f64,
        hi: f64,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Simplex {
        dim: usize,
    },
    WholeSpace {
        dim: usize,
    },
    Translate {
        inner: Box<SetSpec>,
        offset: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gd,
    Og,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mirror {
    Euclidean,
    Entropy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Constant {
        eta: f64,
    },
    InverseSqrt,
    /// `η = √(D² + 2B_f)/(G√T)`; `d` defaults to the set diameter.
    Optimized {
        d: Option<f64>,
        #[serde(default)]
        bf: f64,
        g: f64,
    },
    /// `η = T^{-1/4}`.
    QuarterPower,
    /// `η = √(min(α, 1)/(8nL²))` from the game constants.
    SocialMax {
        alpha: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSpec {
    pub algorithm: Algorithm,
    pub mirror: Option<Mirror>,
    pub schedule: ScheduleSpec,
    pub start: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ComparatorSpec {
    IndicatorPoint {
        id: Option<String>,
        player: Option<usize>,
        point: Vec<f64>,
    },
    IndicatorSet {
        id: Option<String>,
        player: Option<usize>,
        set: SetSpec,
    },
    Linear {
        id: Option<String>,
        player: Option<usize>,
        v: Vec<f64>,
    },
    Quadratic {
        id: Option<String>,
        player: Option<usize>,
        q: Vec<Vec<f64>>,
        c: Vec<f64>,
    },
    Constant {
        id: Option<String>,
        player: Option<usize>,
        #[serde(default)]
        value: f64,
    },
    /// Quadratic whose prox is `x ↦ Ax + b`; with `interpolate = true` the
    /// map is first mixed toward the identity.
    Affine {
        id: Option<String>,
        player: Option<usize>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default)]
        interpolate: bool,
    },
}

impl ComparatorSpec {
    pub fn player(&self) -> Option<usize> {
        match self {
            ComparatorSpec::IndicatorPoint { player, .. }
            | ComparatorSpec::IndicatorSet { player, .. }
            | ComparatorSpec::Linear { player, .. }
            | ComparatorSpec::Quadratic { player, .. }
            | ComparatorSpec::Constant { player, .. }
            | ComparatorSpec::Affine { player, .. } => *player,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Indicator points at every vertex of a polytope set.
    Vertices,
    /// Indicator points at random members.
    RandomPoints { count: usize },
    /// Linear comparators with random unit directions.
    UnitLinear { count: usize },
    /// Quadratics with spectrum drawn from `[min_eig, max_eig]`.
    RandomQuadratics {
        count: usize,
        #[serde(default)]
        min_eig: f64,
        #[serde(default = "default_max_eig")]
        max_eig: f64,
    },
    /// Prox-representable quadratics of random symmetric affine maps.
    RandomAffine { count: usize },
}

fn default_max_eig() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub with: usize,
    pub c: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticPlayerSpec {
    pub set: SetSpec,
    pub own: Vec<Vec<f64>>,
    pub linear: Vec<f64>,
    #[serde(default)]
    pub couplings: Vec<CouplingSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GameSpec {
    /// `u_0 = x_0ᵀ M x_1 = -u_1`; sets default to simplices.
    BilinearZeroSum {
        m: Option<Vec<Vec<f64>>>,
        m_csv: Option<String>,
        row_set: Option<SetSpec>,
        col_set: Option<SetSpec>,
    },
    NormalForm {
        actions: Vec<usize>,
        payoffs: Option<Vec<Vec<f64>>>,
        payoffs_csv: Option<Vec<String>>,
    },
    Quadratic {
        players: Vec<QuadraticPlayerSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SocialSpec {
    pub alpha: f64,
    /// `z_i` in `f_i = (α/2)||x - z_i||²`; defaults to each set's center.
    pub centers: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzSuite {
    KeyInequality,
    Projection,
    ProxOptimality,
}

impl fmt::Display for FuzzSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuzzSuite::KeyInequality => "key-inequality",
            FuzzSuite::Projection => "projection",
            FuzzSuite::ProxOptimality => "prox-optimality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzSpec {
    pub suite: FuzzSuite,
    pub samples: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_rho_max")]
    pub rho_max: f64,
}

fn default_max_dim() -> usize {
    8
}

fn default_rho_max() -> f64 {
    0.95
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub rounds: Option<usize>,
    #[serde(default)]
    pub assert_bounds: bool,
    pub set: Option<SetSpec>,
    pub learner: Option<LearnerSpec>,
    pub adversary: Option<AdversarySpec>,
    pub game: Option<GameSpec>,
    pub social: Option<SocialSpec>,
    pub fuzz: Option<FuzzSpec>,
    #[serde(default)]
    pub comparators: Vec<ComparatorSpec>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// A list of experiment files run as one batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchConfig {
    pub batch: Vec<String>,
}

/// A configuration problem, anchored to a line when one can be found.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.path.display())?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
            if let Some(col) = self.column {
                write!(f, ":{col}")?;
            }
        }
        write!(f, ": {}", self.message)
    }
}

/// A loaded config file with its source kept for error anchoring.
#[derive(Debug, Clone)]
pub struct Source {
    pub path: PathBuf,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.to_path_buf(),
            line: None,
            column: None,
            message: format!("cannot read config: {e}"),
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            text,
        })
    }

    pub fn base_dir(&self) -> PathBuf {
        self.path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default()
    }

    /// 1-based line and column of a byte offset.
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before
            .rfind('\n')
            .map_or(before.len(), |i| before.len() - i - 1)
            + 1;
        (line, column)
    }

    /// Error anchored at the first line that mentions `key` as a key or
    /// table header, falling back to no line.
    pub fn error_at(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let line = self.text.lines().position(|l| {
            let t = l.trim_start();
            let header = t.trim_start_matches('[').trim_end_matches(']').trim();
            header == key || t.starts_with(&format!("{key} ")) || t.starts_with(&format!("{key}="))
        });
        ConfigError {
            path: self.path.clone(),
            line: line.map(|l| l + 1),
            column: None,
            message: message.into(),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError {
            path: self.path.clone(),
            line: None,
            column: None,
            message: message.into(),
        }
    }

    fn parse_error(&self, e: toml::de::Error) -> ConfigError {
        let (line, column) = match e.span() {
            Some(span) => {
                let (l, c) = self.position(span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        ConfigError {
            path: self.path.clone(),
            line,
            column,
            message: e.message().trim().to_string(),
        }
    }

    pub fn is_batch(&self) -> bool {
        toml::from_str::<toml::Table>(&self.text).is_ok_and(|t| t.contains_key("batch"))
    }

    pub fn parse_batch(&self) -> Result<BatchConfig, ConfigError> {
        toml::from_str(&self.text).map_err(|e| self.parse_error(e))
    }

    pub fn parse(&self) -> Result<ExperimentConfig, ConfigError> {
        toml::from_str(&self.text).map_err(|e| self.parse_error(e))
    }
}
