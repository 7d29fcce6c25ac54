use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra: root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
    },

    #[error("algebra: {0} collapsed to a constant map")]
    DegenerateResult(&'static str),

    #[error("algebra: Möbius transform is not invertible (|ad - bc| = {0:e})")]
    NotInvertible(f64),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{0}: polynomial must have degree at least {1}")]
    DegreeTooLow(&'static str, usize),

    #[error("symmetry: polynomial is not normalized ({0})")]
    NotNormalized(String),

    #[error("symmetry: the symmetry group is the full circle, family is infinite")]
    InfiniteFamily,

    #[error("symmetry: λ is not in the symmetry group (|λ^{order} - 1| = {residual:e})")]
    LambdaNotInGroup { order: u32, residual: f64 },

    #[error("symmetry: hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("symmetry: map has no exceptional point")]
    NoExceptionalPoint,

    #[error("symmetry: map has two exceptional points {0} and {1}; it is conjugate to z^d via φ(z) = a(z-ζ₁)/(z-ζ₂)")]
    TwoExceptionalPoints(String, String),

    #[error("symmetry: β(P) = {0} < 2, the construction needs β ≥ 2")]
    BetaTooSmall(String),

    #[error("{0}: invalid parameters: {1}")]
    InvalidParameters(&'static str, String),

    #[error("rootfinding_methods: {0} degenerates to a map of degree at most one")]
    DegenerateMethod(&'static str),

    #[error("dynamics: degree {degree} of the iterate exceeds the root-finder cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("verify: boundary mask has no marked pixels")]
    EmptyMask,

    #[error("render: I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("render: malformed PPM: {0}")]
    MalformedImage(String),
}
