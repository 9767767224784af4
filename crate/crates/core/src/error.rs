//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Shape or length mismatch between arguments.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A matrix required to be symmetric is not, within tolerance.
    #[error("matrix not symmetric: max |A_ij - A_ji| = {max_dev:.3e} exceeds {tol:.3e}")]
    Symmetry { max_dev: f64, tol: f64 },

    /// Declared bandwidth is smaller than the measured one.
    #[error("declared bandwidth {declared} below measured bandwidth {measured}")]
    Bandwidth { declared: usize, measured: usize },

    /// A desk-scale size guard was exceeded (brute-force oracle, telephone numbers).
    #[error("size guard exceeded: {what} = {got}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// An operation precondition not covered by the variants above.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The state is unphysical (e.g. Q not positive definite) or a parameter
    /// is outside its physical range.
    #[error("unphysical state: {0}")]
    Unphysical(String),

    /// Numerical breakdown: a quantity that must be real/non-negative came
    /// out otherwise beyond tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}
