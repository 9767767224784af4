//! Dense complex matrices and the structural transformations the hafnian
//! and Gaussian modules are built on: bandwidth measurement, simultaneous
//! row/column permutation, row/column repetition, diagonal substitution,
//! and principal submatrix extraction.
//!
//! Index conventions: element accessors ([`ComplexMatrix::get`],
//! [`ComplexMatrix::set`]) are 0-based like any Rust container. Index
//! *sets* handed across the public API (permutation sequences and the
//! `idx` argument of [`extract_principal`]) are 1-based, matching how the
//! operations are usually written down on paper.
//!
//! Matrices are stored dense; banded structure is exploited by the
//! algorithms, not by the storage. Desk-scale dimensions (a few thousand)
//! keep this cheap, and the dynamic-programming cost dominates anyway.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Absolute tolerance for symmetry assertions (`max |A_ij - A_ji|`).
pub const SYM_TOL: f64 = 1e-10;

/// Default tolerance for bandwidth measurement; adjacency matrices built
/// numerically carry ~1e-15 noise outside the band.
pub const BAND_TOL: f64 = 1e-12;

/// Tolerance-gate predicate: true when `x` lies above `tol` or is not
/// comparable to it (NaN). Validation gates use this instead of a bare `>`,
/// whose NaN case would silently pass the gate.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
#[inline]
pub(crate) fn exceeds(x: f64, tol: f64) -> bool {
    !(x <= tol)
}

/// Dense square matrix of complex scalars, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n.min(8) {
            write!(f, "  ")?;
            for j in 0..self.n.min(8) {
                let z = self.get(i, j);
                write!(f, "{:+.3e}{:+.3e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        if self.n > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a closure over (row, col), 0-based.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from nested rows; all rows must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    r.len(),
                    n
                )));
            }
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Real matrix helper, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    /// Row-major view of all entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!(
                "matmul of {}x{} with {}x{}",
                self.n, self.n, rhs.n, rhs.n
            )));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// max_ij |A_ij - A_ji| (0 for the empty matrix).
    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        dev
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.symmetry_deviation() <= tol
    }

    /// max_ij |A_ij - conj(A_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Serialize in the matrix text format: first line `n`, then `n` rows
    /// of `n` whitespace-separated entries written `re,im`. 17 significant
    /// digits, so parsing the output reproduces the matrix exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.n));
        for i in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for j in 0..self.n {
                let z = self.get(i, j);
                row.push(format!("{:.16e},{:.16e}", z.re, z.im));
            }
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the matrix text format. Entries are `re` or `re,im`; a missing
    /// imaginary part defaults to 0.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension line {first:?}")))?;
        let mut m = Self::zeros(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {} of {}", i + 1, n)))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    toks.len(),
                    n
                )));
            }
            for (j, tok) in toks.iter().enumerate() {
                m.set(i, j, parse_entry(tok)?);
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!(
                "unexpected trailing content {extra:?}"
            )));
        }
        Ok(m)
    }
}

fn parse_entry(tok: &str) -> Result<C64> {
    let parse_f = |p: &str| -> Result<f64> {
        let v: f64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad number {p:?}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite entry {p:?}")));
        }
        Ok(v)
    };
    match tok.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_f(re)?, parse_f(im)?)),
        None => Ok(C64::new(parse_f(tok)?, 0.0)),
    }
}

/// Per-index repetition counts for [`repeat_pattern`]: entry 0 deletes the
/// index, entry k >= 1 makes the row/column appear k times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionVector(pub Vec<u32>);

impl RepetitionVector {
    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&x| x == 1)
    }

    /// Dimension of the expanded matrix.
    pub fn expanded_dim(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }
}

impl From<Vec<u32>> for RepetitionVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Bijection on {1..n}; `order[p-1]` is the (1-based) source index placed
/// at position p, so applying the permutation reads out the old indices in
/// `order` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>, // 0-based internally: order[new] = old
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Build from a 1-based index sequence; must be a bijection on {1..n}.
    pub fn from_one_based(seq: &[usize]) -> Result<Self> {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &v in seq {
            if v < 1 || v > n {
                return Err(Error::Precondition(format!(
                    "permutation entry {v} outside 1..={n}"
                )));
            }
            if seen[v - 1] {
                return Err(Error::Precondition(format!(
                    "permutation entry {v} repeated"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Self {
            order: seq.iter().map(|&v| v - 1).collect(),
        })
    }

    /// The 1-based index sequence (new position -> old index).
    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|&v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub(crate) fn source(&self, new_pos: usize) -> usize {
        self.order[new_pos]
    }
}

/// Smallest w such that |A_ij| <= tol whenever |i-j| > w. The 0x0 matrix
/// has bandwidth 0.
pub fn bandwidth(a: &ComplexMatrix, tol: f64) -> usize {
    let n = a.dim();
    let mut w = 0usize;
    for i in 0..n {
        for j in (i + 1 + w)..n {
            if a.get(i, j).norm() > tol || a.get(j, i).norm() > tol {
                w = j - i;
            }
        }
    }
    w
}

/// Block bandwidth of a 2k x 2k matrix viewed as a 2x2 grid of k x k
/// blocks: the maximum of [`bandwidth`] over the four blocks.
pub fn block_bandwidth(a: &ComplexMatrix, tol: f64) -> Result<usize> {
    let n = a.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "block bandwidth needs even dimension, got {n}"
        )));
    }
    let k = n / 2;
    let mut w = 0usize;
    for (bi, bj) in [(0, 0), (0, k), (k, 0), (k, k)] {
        let block = ComplexMatrix::from_fn(k, |i, j| a.get(bi + i, bj + j));
        w = w.max(bandwidth(&block, tol));
    }
    Ok(w)
}

/// Permutation on 2k indices sending the pair (j, k+j) to the adjacent
/// positions (2j-1, 2j): the new order reads old indices
/// 1, k+1, 2, k+2, ..., k, 2k. Applied to a block-banded matrix with block
/// bandwidth w, the result has scalar bandwidth at most 2w+1.
pub fn interleave_perm(k: usize) -> Permutation {
    let mut order = Vec::with_capacity(2 * k);
    for j in 0..k {
        order.push(j);
        order.push(k + j);
    }
    Permutation { order }
}

/// Simultaneous row/column reordering: result[i][j] = A[p(i)][p(j)] where
/// p is the new-position -> old-index map. The loop hafnian is invariant
/// under this.
pub fn permute(a: &ComplexMatrix, p: &Permutation) -> Result<ComplexMatrix> {
    if a.dim() != p.len() {
        return Err(Error::Dimension(format!(
            "permutation of size {} applied to {}x{} matrix",
            p.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(ComplexMatrix::from_fn(a.dim(), |i, j| {
        a.get(p.source(i), p.source(j))
    }))
}

/// Reorder a vector with the same convention as [`permute`].
pub fn permute_vec<T: Clone>(v: &[T], p: &Permutation) -> Result<Vec<T>> {
    if v.len() != p.len() {
        return Err(Error::Dimension(format!(
            "permutation of size {} applied to vector of length {}",
            p.len(),
            v.len()
        )));
    }
    Ok((0..v.len()).map(|i| v[p.source(i)].clone()).collect())
}

/// Expand A by repeating index i `s_i` times (deleting it when s_i = 0).
/// The result has dimension sum(s) and inherits symmetry.
pub fn repeat_pattern(a: &ComplexMatrix, s: &RepetitionVector) -> Result<ComplexMatrix> {
    if a.dim() != s.len() {
        return Err(Error::Dimension(format!(
            "repetition vector of length {} for {}x{} matrix",
            s.len(),
            a.dim(),
            a.dim()
        )));
    }
    let mut src = Vec::with_capacity(s.expanded_dim());
    for (i, &cnt) in s.0.iter().enumerate() {
        for _ in 0..cnt {
            src.push(i);
        }
    }
    Ok(ComplexMatrix::from_fn(src.len(), |i, j| {
        a.get(src[i], src[j])
    }))
}

/// Expand a vector alongside [`repeat_pattern`].
pub fn repeat_vec<T: Clone>(v: &[T], s: &RepetitionVector) -> Result<Vec<T>> {
    if v.len() != s.len() {
        return Err(Error::Dimension(format!(
            "repetition vector of length {} for vector of length {}",
            s.len(),
            v.len()
        )));
    }
    let mut out = Vec::with_capacity(s.expanded_dim());
    for (x, &cnt) in v.iter().zip(&s.0) {
        for _ in 0..cnt {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Copy of A with the diagonal overwritten by v; off-diagonal untouched.
pub fn fdiag(a: &ComplexMatrix, v: &[C64]) -> Result<ComplexMatrix> {
    if a.dim() != v.len() {
        return Err(Error::Dimension(format!(
            "diagonal of length {} for {}x{} matrix",
            v.len(),
            a.dim(),
            a.dim()
        )));
    }
    let mut out = a.clone();
    for (i, &z) in v.iter().enumerate() {
        out.set(i, i, z);
    }
    Ok(out)
}

/// Principal submatrix on a strictly increasing set of 1-based indices.
pub fn extract_principal(a: &ComplexMatrix, idx: &[usize]) -> Result<ComplexMatrix> {
    for (pos, &v) in idx.iter().enumerate() {
        if v < 1 || v > a.dim() {
            return Err(Error::Precondition(format!(
                "index {v} outside 1..={}",
                a.dim()
            )));
        }
        if pos > 0 && idx[pos - 1] >= v {
            return Err(Error::Precondition(
                "principal indices must be strictly increasing".into(),
            ));
        }
    }
    Ok(ComplexMatrix::from_fn(idx.len(), |i, j| {
        a.get(idx[i] - 1, idx[j] - 1)
    }))
}
