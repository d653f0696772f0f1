use thiserror::Error;

/// Errors raised by grid construction, solvers and norm evaluations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("CFL violation: dt = {dt} exceeds {cfl} * dr = {limit}")]
    Cfl { dt: f64, cfl: f64, limit: f64 },

    #[error("non-finite value {value} at {location}")]
    NonFinite { value: f64, location: String },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("time {t} is not a stored slice")]
    NoSuchSlice { t: f64 },

    #[error("unsupported norm combination: {0}")]
    UnsupportedNorm(String),

    #[error("unknown catalogue entry `{0}`")]
    UnknownCatalogue(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("infeasible exponents: {0}")]
    Infeasible(String),

    #[error("infeasible exponents at p = {}: {}", .0.p, .0.binding_constraint.as_deref().unwrap_or("unknown"))]
    InfeasibleExponents(Box<crate::exponents::ExponentReport>),
}

pub type Result<T> = std::result::Result<T, Error>;
