//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by constructors and operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// The product relation `g0·g1·g2·g3 = id` (or `h0·h1·h∞ = id`) fails,
    /// or a permutation list has the wrong degree.
    #[error("monodromy error: {0}")]
    Monodromy(String),

    #[error("surface is not connected: {0}")]
    Connectivity(String),

    /// Cyclic cover datum violating `0 < a_i <= N`, the gcd condition or
    /// the sum condition.
    #[error("invalid cyclic datum: {0}")]
    Datum(String),

    #[error("invalid locus specification: {0}")]
    Locus(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("orbit exceeds the configured cap of {cap} vertices")]
    OrbitCap { cap: usize },

    /// No single Siegel–Veech normalization fits all calibration surfaces.
    #[error("calibration contradiction: {0}")]
    Calibration(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An internal invariant was violated; always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
