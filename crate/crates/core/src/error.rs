//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input text could not be parsed. `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A homogeneous form was expected but monomials of two different total
    /// degrees were found.
    #[error("non-homogeneous input: found monomials of degree {deg_a} and {deg_b}")]
    NonHomogeneous { deg_a: u32, deg_b: u32 },

    /// The zero polynomial was passed where a nonzero one is required.
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(&'static str),

    /// Numeric root finding cannot handle the request.
    #[error("root finding limit: {0}")]
    RootFinding(String),

    /// Root finding converged poorly; partial results are attached.
    #[error("ill-conditioned root finding: max residual {max_err:.3e}")]
    IllConditioned { max_err: f64, roots: Vec<(f64, f64)> },

    /// The curve degree (in X, after moving the point) is too small.
    #[error("unsupported degree: X-degree {d} after normalization, need at least 3")]
    UnsupportedDegree { d: u32 },

    /// The input pair (curve, point) is not usable.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A pencil line is contained in the curve.
    #[error("line is contained in the curve (restricted polynomial is zero)")]
    LineContainedInCurve,

    /// The requested line is degenerate for this operation (repeated
    /// intersection points, or a singular point of the curve on it).
    #[error("degenerate line for tangent computation: {0}")]
    DegenerateLine(String),

    /// The normalized curve has no coefficient forms at all.
    #[error("curve reduces to Z^m * X^d with no lower terms; it is non-reduced")]
    NonReducedPower,

    /// Normal-form data cannot be written down over the rationals.
    #[error("normal form not representable: {0}")]
    NonRepresentable(String),

    /// Every member of the family is singular.
    #[error("degenerate family: the discriminant vanishes identically")]
    DegenerateFamily,

    /// Classification was asked for a degree other than 3 or 4.
    #[error("classification implemented for degrees 3 and 4 only, got {d}")]
    UnsupportedClassification { d: u32 },

    /// An internal consistency check failed. This indicates a bug, not bad
    /// user input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// True when the error signals a problem with user input rather than an
    /// internal failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::NonHomogeneous { .. }
                | Error::InvalidInput(_)
                | Error::UnsupportedDegree { .. }
                | Error::UnsupportedClassification { .. }
        )
    }
}
