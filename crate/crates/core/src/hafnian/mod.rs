//! Loop-hafnian engines.
//!
//! The loop hafnian of a symmetric n x n matrix A is the sum over all
//! perfect matchings of the complete graph on n vertices *with loops* of
//! the product of matched entries: a vertex may pair with a later vertex
//! (contributing A_ij) or with itself (contributing A_ii). For the all-ones
//! matrix this counts the matchings themselves: the telephone numbers
//! 1, 1, 2, 4, 10, 26, 76, ...
//!
//! Three engines compute it:
//!
//! - [`lhaf_brute`]: direct matching enumeration. Exponential cost, capped
//!   at n = 16; it is the oracle everything else is verified against.
//! - [`lhaf_banded`]: for matrices of bandwidth w, a sliding-window dynamic
//!   program over subsets of the last 2w+1 indices, O(n w 4^w) arithmetic.
//! - [`lhaf_banded_rep`]: for a banded matrix whose rows/columns are
//!   repeated according to a multiplicity vector s, a dynamic program over
//!   bounded multi-indices combined by convolution, polynomial in n for
//!   fixed bandwidth and max multiplicity. [`lhaf_banded_rep_fdiag`] is the
//!   same engine with an independently chosen diagonal on the expanded
//!   matrix, which is what Gaussian-state probabilities need.
//!
//! [`lhaf_auto`] dispatches between them by size and structure.

mod banded;
mod brute;
mod rep;
mod telephone;

pub use banded::lhaf_banded;
pub use brute::lhaf_brute;
pub use rep::{convolve, lhaf_banded_rep, lhaf_banded_rep_fdiag, SubhafnianTableRep};
pub use telephone::{t_poly, t_poly_with_diag, telephone};

pub(crate) use rep::{factorial, pattern_factorial, RepDp};

use num_complex::Complex64 as C64;

use crate::matrixcore::{
    bandwidth, fdiag, repeat_pattern, repeat_vec, ComplexMatrix, RepetitionVector, BAND_TOL,
};
use crate::Result;

/// Expanded dimension up to which [`lhaf_auto`] prefers the brute engine.
pub const AUTO_BRUTE_LIMIT: usize = 14;

/// Dispatch to the cheapest applicable engine: brute force when the
/// (expanded) dimension is at most [`AUTO_BRUTE_LIMIT`], the banded DP when
/// there is no repetition, and the repetition DP otherwise. All paths agree
/// on overlapping domains.
pub fn lhaf_auto(a: &ComplexMatrix, s: Option<&RepetitionVector>) -> Result<C64> {
    match s {
        None => {
            if a.dim() <= AUTO_BRUTE_LIMIT {
                lhaf_brute(a)
            } else {
                let w = bandwidth(a, BAND_TOL);
                lhaf_banded(a, w)
            }
        }
        Some(s) => {
            if s.expanded_dim() <= AUTO_BRUTE_LIMIT {
                lhaf_brute(&repeat_pattern(a, s)?)
            } else if s.is_all_ones() {
                let w = bandwidth(a, BAND_TOL);
                lhaf_banded(a, w)
            } else {
                let w = bandwidth(a, BAND_TOL);
                lhaf_banded_rep(a, w, s)
            }
        }
    }
}

/// [`lhaf_auto`] dispatch for the loop hafnian of repeat_pattern(A, s)
/// with its diagonal overwritten by the repeated vector v. The replaced
/// diagonal never changes the bandwidth, so engine selection is identical.
pub(crate) fn lhaf_auto_fdiag(a: &ComplexMatrix, v: &[C64], s: &RepetitionVector) -> Result<C64> {
    if s.expanded_dim() <= AUTO_BRUTE_LIMIT {
        let expanded = fdiag(&repeat_pattern(a, s)?, &repeat_vec(v, s)?)?;
        lhaf_brute(&expanded)
    } else if s.is_all_ones() {
        let replaced = fdiag(a, v)?;
        let w = bandwidth(&replaced, BAND_TOL);
        lhaf_banded(&replaced, w)
    } else {
        let w = bandwidth(a, BAND_TOL);
        lhaf_banded_rep_fdiag(a, v, w, s)
    }
}
