use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("1F1 domain error: b = {b} is a non-positive integer")]
    KummerDomain { b: f64 },

    #[error("overflow evaluating {what} (argument {at})")]
    Overflow { what: &'static str, at: f64 },

    #[error("series for {what} did not converge after {iterations} terms")]
    SeriesNonConvergence { what: &'static str, iterations: usize },

    #[error("integration blew up at x = {x}")]
    IntegrationBlowUp { x: f64 },

    #[error("constraint b^2 - 4ac = -4 lambda^2 / w0^2 is infeasible: ac = {ac} < lambda^2/w0^2 = {bound}")]
    ConstraintInfeasible { ac: f64, bound: f64 },

    #[error("constraint b^2 - 4ac = -4 lambda^2 / w0^2 violated by {residual:e}")]
    ConstraintViolated { residual: f64 },

    #[error("alpha^2 = a u1^2 + b u1 u2 + c u2^2 is not positive at x = {x} (value {value:e})")]
    NotPositive { x: f64, value: f64 },

    #[error("u-function vanishes at x = {x} (|u| = {modulus:e})")]
    NodeInSeed { x: f64, modulus: f64 },

    #[error("level E_n = {energy} must lie above the factorization energy {epsilon}")]
    EnergyOrdering { energy: f64, epsilon: f64 },

    #[error("missing state 1/u is not normalizable on this domain ({0})")]
    NotNormalizable(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("operator dimension {dim} exceeds the dense cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigenvalue iteration did not converge at index {index} after {iterations} iterations")]
    EigenNonConvergence { index: usize, iterations: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
