use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry in input vector")]
    NonFinite,

    #[error("set is unbounded")]
    Unbounded,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("prox-nonconvergence after {iterations} iterations (residual {residual:e})")]
    ProxNonconvergence { iterations: usize, residual: f64 },

    #[error("comparator infeasible at p")]
    ComparatorInfeasible,

    #[error("not prox-representable: {0}")]
    NotProxRepresentable(String),

    #[error("boundary divergence: reference point lies on the boundary of the entropy domain")]
    BoundaryDivergence,

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("empty trace")]
    EmptyTrace,

    #[error("empty comparator family")]
    EmptyFamily,

    #[error(
        "not an endomorphism: image of round {round} point leaves the set (witness {witness:?})"
    )]
    NotEndomorphism { round: usize, witness: Vec<f64> },

    #[error("step size {eta} violates social-regret condition (max {max})")]
    StepSizeViolation { eta: f64, max: f64 },

    #[error("constants violated: player {player} round {round} gradient norm {norm} exceeds G = {bound}")]
    ConstantsViolated {
        player: usize,
        round: usize,
        norm: f64,
        bound: f64,
    },

    #[error("not an OG trace: anchor points missing")]
    NotOgTrace,

    #[error("missing prox path")]
    MissingProxPath,

    #[error("unknown adversary kind `{0}`")]
    UnknownAdversary(String),

    #[error("oracle failure: {0}")]
    Oracle(String),
}
