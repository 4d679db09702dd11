use thiserror::Error;

/// Crate-wide error type. Numerical routines that can only fail on
/// malformed input (negative radicand, empty chains, degenerate mass)
/// report the offending value so callers can log it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid prior spec: {0}")]
    InvalidSpec(String),

    /// The square root in the first-derivative branch went negative beyond
    /// tolerance. The state (u, c) is off the solution manifold.
    #[error("negative radicand {radicand:e} at u = {u}")]
    RadicandNegative { u: f64, radicand: f64 },

    /// A proposed or requested point left the open parameter domain.
    #[error("point {theta} is outside the parameter domain")]
    DomainExit { theta: f64 },

    /// Every grid point of a table was truncated, so there is no mass to
    /// normalize.
    #[error("density table has no usable mass")]
    DegenerateMass,

    /// Centered finite differences need two grid neighbours on each side.
    #[error("theta {theta} is too close to the grid edge for a centered stencil")]
    NearBoundary { theta: f64 },

    #[error("chain holds no retained draws")]
    EmptyChain,

    #[error("chain init coordinate {coord} = {value} is outside its prior domain")]
    InitOutOfDomain { coord: usize, value: f64 },

    /// Marginal likelihood integrand vanished everywhere on the grid.
    #[error("integrand is zero at every grid point")]
    AllZeroIntegrand,

    /// Mixture weights must be positive and sum to one.
    #[error("weights {0:?} do not form a point in the open simplex")]
    SimplexViolation(Vec<f64>),

    #[error("model expects {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
