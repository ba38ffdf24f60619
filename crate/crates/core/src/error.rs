use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("series did not converge after {terms} terms ({context})")]
    NonConvergence { terms: usize, context: String },

    #[error("asymptotic expansion of U({epsilon}, {z}) cannot reach the requested tolerance")]
    AsymptoticDivergence { epsilon: f64, z: f64 },

    #[error("point {x} is at a singularity of the operator")]
    SingularPoint { x: f64 },

    #[error("only {found} of {wanted} eigenvalues found in the search window [{lo}, {hi}]")]
    WindowTooSmall {
        found: usize,
        wanted: usize,
        lo: f64,
        hi: f64,
    },

    #[error("bracketing could not separate neighbouring roots (last scan step {step})")]
    BracketAmbiguity { step: f64 },

    #[error("box half-width b = {b} is below the solver minimum {min}")]
    DomainTooNarrow { b: f64, min: f64 },

    #[error("normalization failed: {0}")]
    NormalizationFailure(String),

    #[error("grid too coarse: eigenvalue {index} moved by {relative_change:e} between resolutions")]
    GridTooCoarse { index: usize, relative_change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
