//! Error types shared across the library.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("odd root exponent in term `{term}`; closed-path structure violated")]
    OddRootExponent { term: String },
    #[error("frequencies must be strictly positive")]
    NonPositiveFrequency,
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex set does not contain the root 0")]
    RootMissing,
    #[error("vertex {vertex:?} has mass {mass}, expected 0 or -2")]
    BadMass { vertex: Vec<i64>, mass: i64 },
    #[error("vertex set is not connected under the induced edges")]
    Disconnected,
    #[error("vertex {vertex:?} listed twice")]
    DuplicateVertex { vertex: Vec<i64> },
    #[error("vertex {vertex:?} has {got} coordinates, expected {expected}")]
    DimensionMismatch { vertex: Vec<i64>, expected: usize, got: usize },
    #[error("graph has no integer relations between its nonzero vertices")]
    NotDegenerate,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("sites dimension {n} is smaller than required")]
    SitesTooSmall { n: usize },
    #[error("graph has {m} lattice directions but {sites} sites were supplied")]
    SiteCountMismatch { m: usize, sites: usize },
    #[error("graph has no integer relations; avoidable constraints are undefined")]
    NotDegenerate,
    #[error("sites fail the genericity check: {0}")]
    DegenerateSites(String),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SpectralError {
    #[error("frequencies must be strictly positive")]
    NonPositiveFrequency,
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
    #[error("eigenvalue {value} fails the exact cross-check (residual {residual:.3e} > {allowed:.3e})")]
    ResidualCheck { value: String, residual: f64, allowed: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
