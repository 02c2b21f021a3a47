use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown model `{0}`; valid names: bernoulli, binomial(n), laplace(b), gaussian, cauchy, mpt-individual-word, mpt-only-mixed, categorical-beta, categorical-gamma, bent-coin")]
    UnknownModel(String),

    #[error("parameter {0:?} outside the open domain of `{1}`")]
    OutsideDomain(Vec<f64>, String),

    #[error("outcome `{0}` not in the outcome space")]
    UnknownOutcome(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbVector(String),

    #[error("invalid count vector: {0}")]
    InvalidCounts(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature failed to converge: achieved tolerance {achieved:.3e} (requested {requested:.3e})")]
    QuadratureFailure { achieved: f64, requested: f64 },

    #[error("non-invertible or non-monotone map on the sampled grid")]
    BadReparameterization,

    #[error("empty data")]
    EmptyData,

    #[error("degenerate Wald interval: MLE on the domain boundary ({0})")]
    BoundaryMle(String),

    #[error("Fisher information is not positive at the requested point")]
    NonPositiveInformation,

    #[error("zero marginal likelihood: data impossible under every grid node")]
    ZeroMarginalLikelihood,

    #[error("interval ({0}, {1}) not inside the distribution domain")]
    IntervalOutsideDomain(f64, f64),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
