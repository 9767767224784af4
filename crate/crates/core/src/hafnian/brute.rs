//! Brute-force loop hafnian by matching enumeration; the oracle engine.

use num_complex::Complex64 as C64;

use crate::matrixcore::{exceeds, ComplexMatrix, SYM_TOL};
use crate::{Error, Result};

/// Largest dimension the brute enumerator accepts; the cost is the n-th
/// telephone number, which passes 4.6e7 at n = 16.
pub const BRUTE_LIMIT: usize = 16;

/// Loop hafnian by enumerating perfect matchings with loops: the lowest
/// unmatched vertex pairs with itself or with any later unmatched vertex,
/// recursively. Requires symmetry within [`SYM_TOL`] and n <= 16.
pub fn lhaf_brute(a: &ComplexMatrix) -> Result<C64> {
    let n = a.dim();
    if n > BRUTE_LIMIT {
        return Err(Error::SizeGuard {
            what: "brute-force loop hafnian dimension",
            got: n,
            limit: BRUTE_LIMIT,
        });
    }
    let dev = a.symmetry_deviation();
    if exceeds(dev, SYM_TOL) {
        return Err(Error::Symmetry {
            max_dev: dev,
            tol: SYM_TOL,
        });
    }
    Ok(rec(a, (1u32 << n).wrapping_sub(1)))
}

fn rec(a: &ComplexMatrix, unmatched: u32) -> C64 {
    if unmatched == 0 {
        return C64::new(1.0, 0.0);
    }
    let i = unmatched.trailing_zeros() as usize;
    let rest = unmatched & !(1 << i);
    // loop on vertex i
    let mut acc = a.get(i, i) * rec(a, rest);
    // pair i with each later unmatched vertex j
    let mut others = rest;
    while others != 0 {
        let j = others.trailing_zeros() as usize;
        others &= others - 1;
        acc += a.get(i, j) * rec(a, rest & !(1 << j));
    }
    acc
}
