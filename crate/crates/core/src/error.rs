use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no projective meaning")]
    ZeroVector,
    #[error("point is not proper (inside the ball)")]
    NotProper,
    #[error("point is not ideal (on the boundary sphere)")]
    NotIdeal,
    #[error("arccosh argument {0} below 1")]
    DomainError(f64),
    #[error("hyperplane form has non-positive Lorentz norm")]
    DegeneratePlane,
    #[error("matrix does not preserve the Lorentz form (deviation {0:e})")]
    NotIsometry(f64),
    #[error("tangency foot is not a proper point")]
    FootAtInfinity,
    #[error("horoball does not meet the edge (lambda = {0})")]
    NoIntersection(f64),
    #[error("degenerate horospherical triangle")]
    DegenerateTriangle,
    #[error("s-parameter {0} outside (-1, 1)")]
    InvalidParameter(f64),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("no orthoscheme decomposition known for {0}")]
    UnknownDecomposition(String),
    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
    #[error("validation of {entry} failed: {check}")]
    ValidationError { entry: String, check: String },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("no tangency: {0}")]
    NoTangency(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
