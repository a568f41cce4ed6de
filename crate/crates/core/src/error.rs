use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by geometric and numerical operations.
///
/// Variants are grouped by the module that raises them; the CLI maps
/// [`Error::InvalidConfig`] to exit code 2 and everything else to exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point:?} in chart {chart} is too close to the chart boundary (limit {limit})")]
    ChartBoundary {
        chart: usize,
        point: Vec<num_complex::Complex<f64>>,
        limit: f64,
    },

    #[error("field `{name}` returned a non-finite value at {point:?}")]
    NonFiniteField {
        name: String,
        point: Vec<num_complex::Complex<f64>>,
    },

    #[error("grid is empty")]
    EmptyGrid,

    #[error("{what} is not positive definite at {where_}: smallest eigenvalue {min_eig:.3e}")]
    NotPositiveDefinite {
        what: String,
        where_: String,
        min_eig: f64,
    },

    #[error("Cholesky factorization failed: {0}")]
    CholeskyFailed(String),

    #[error("quadrature under-resolved: {what} changed by {delta:.3e} (> {tol:.3e}) when refining nodes")]
    QuadratureUnderResolved { what: String, delta: f64, tol: f64 },

    #[error("zero fiber vector")]
    ZeroFiberVector,

    #[error("base point of |L^{k}| found at {point}: all sections vanish there")]
    BasePointFound { k: u32, point: String },

    #[error("evaluation inside the excluded neighbourhood of an orbifold point (use the uniformizing cover)")]
    ExcludedOrbifoldPoint,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("automorphism is not supported: {0}")]
    UnsupportedAutomorphism(String),

    #[error("map is not a contraction: {0}")]
    NotAContraction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("structure invariant violated: {check} = {value:.3e} exceeds {tolerance:.1e} at {point}")]
    InvariantViolated {
        check: String,
        value: f64,
        tolerance: f64,
        point: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
