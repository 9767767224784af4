//! Telephone numbers and their weighted generalizations: loop hafnians of
//! constant matrices, which the repetition DP uses as per-index factors.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// T_k(1), the number of perfect matchings with loops of the complete
/// k-vertex graph, via T_k = T_{k-1} + (k-1) T_{k-2}. Guarded at k = 30;
/// T_31 overflows 64-bit arithmetic.
pub fn telephone(k: usize) -> Result<u64> {
    if k > 30 {
        return Err(Error::SizeGuard {
            what: "telephone number index",
            got: k,
            limit: 30,
        });
    }
    let (mut t0, mut t1) = (1u64, 1u64); // T_0, T_1
    if k == 0 {
        return Ok(t0);
    }
    for i in 2..=k as u64 {
        let t2 = t1 + (i - 1) * t0;
        t0 = t1;
        t1 = t2;
    }
    Ok(t1)
}

/// Loop hafnian of the k x k matrix with every entry equal to `a`:
/// T_k(a) = a (T_{k-1}(a) + (k-1) T_{k-2}(a)), T_0 = 1, T_1 = a.
pub fn t_poly(k: usize, a: C64) -> C64 {
    t_poly_with_diag(k, a, a)
}

/// Loop hafnian of the k x k matrix with `diag` on the diagonal and
/// `offdiag` everywhere else: each of the k vertices either loops (weight
/// `diag`) or pairs with one of the others (weight `offdiag`), giving the
/// recursion T_k = diag * T_{k-1} + (k-1) * offdiag * T_{k-2}.
pub fn t_poly_with_diag(k: usize, offdiag: C64, diag: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    if k == 0 {
        return one;
    }
    let (mut t0, mut t1) = (one, diag);
    for i in 2..=k {
        let t2 = diag * t1 + (i - 1) as f64 * offdiag * t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}
