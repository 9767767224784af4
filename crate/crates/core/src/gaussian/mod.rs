//! Gaussian states of layered local circuits and their exact photon
//! statistics.
//!
//! A circuit is described declaratively: per-mode squeezing, per-mode
//! displacement, a uniform energy transmission eta, and layers of local
//! gates (phase shifters and beamsplitters coupling adjacent modes). D
//! layers compose into an M x M unitary of bandwidth at most D, and the
//! resulting Gaussian state has an adjacency matrix whose B and C blocks
//! inherit bandwidth at most 4D; that bandedness is what the fast hafnian
//! engines exploit.
//!
//! The state is carried in creation/annihilation ordering: the mean vector
//! alpha stacks the M annihilation-operator means over the M conjugate
//! means, and sigma is the 2M x 2M covariance in the same ordering, with
//! vacuum sigma = I/2. From Q = sigma + I/2 the adjacency data
//!
//!   A = X (I - Q^-1),    gamma^T = alpha^dagger Q^-1,
//!   prefactor = exp(-alpha^dagger Q^-1 alpha / 2) / sqrt(det Q)
//!
//! determine every photon-pattern probability
//!
//!   p(s) = prefactor * lhaf(A~_s) / (s_1! ... s_M!)
//!
//! where A~_s repeats index pairs (j, M+j) of A s_j times and overwrites
//! the diagonal with the repeated gamma. [`prob`] evaluates this through
//! the interleaving permutation so the hafnian engines see a banded
//! matrix.

mod adjacency;
mod circuit;
mod state;

pub use adjacency::{adjacency, bc_blocks, extended_adjacency, prob, AdjacencyData};
pub use circuit::{build_unitary, CircuitSpec, Gate};
pub use state::{prepare_state, reduce, GaussianState};

/// Absolute tolerance for discarding imaginary parts of probabilities;
/// negative probabilities above -IMAG_TOL clamp to zero, anything worse is
/// an error (silent numerical failure must not pass as a value).
pub const IMAG_TOL: f64 = 1e-8;
