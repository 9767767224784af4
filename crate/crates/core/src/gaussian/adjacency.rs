//! Adjacency data of a Gaussian state and exact pattern probabilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::circuit::{build_unitary, CircuitSpec};
use super::state::GaussianState;
use super::IMAG_TOL;
use crate::hafnian::{lhaf_auto_fdiag, pattern_factorial};
use crate::matrixcore::{
    exceeds, fdiag, interleave_perm, permute, permute_vec, repeat_pattern, repeat_vec,
    ComplexMatrix, RepetitionVector, SYM_TOL,
};
use crate::{Error, Result};

/// Everything the probability formula needs: Q = sigma + I/2, the
/// adjacency matrix A = X(I - Q^-1), the loop vector gamma with
/// gamma^T = alpha^dagger Q^-1, and the pattern-independent prefactor
/// exp(-alpha^dagger Q^-1 alpha / 2) / sqrt(det Q).
#[derive(Clone, Debug)]
pub struct AdjacencyData {
    pub q: ComplexMatrix,
    pub a: ComplexMatrix,
    pub gamma: Vec<C64>,
    pub prefactor: f64,
}

fn to_na(a: &ComplexMatrix) -> DMatrix<C64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j))
}

/// Compute the adjacency data of a state. Q is factorized once with
/// partial pivoting; gamma comes from a solve rather than an explicit
/// inverse. Errors if Q is not positive definite (unphysical state) or if
/// the numerics degrade (non-real det, asymmetric A).
pub fn adjacency(st: &GaussianState) -> Result<AdjacencyData> {
    let m = st.modes();
    let dim = 2 * m;
    let q = ComplexMatrix::from_fn(dim, |i, j| {
        let add = if i == j { 0.5 } else { 0.0 };
        st.sigma().get(i, j) + add
    });

    let qna = to_na(&q);
    // positive definiteness is exactly "the Hermitian factorization succeeds"
    if nalgebra::linalg::Cholesky::new(qna.clone()).is_none() {
        return Err(Error::Unphysical(
            "Q = sigma + I/2 is not positive definite".into(),
        ));
    }
    let lu = qna.lu();
    let det = lu.determinant();
    // positively established, so NaN or overflow lands in the error branch
    let det_ok = det.re.is_finite() && det.re > 0.0;
    if !det_ok || exceeds(det.im.abs(), IMAG_TOL * det.re.max(1.0)) {
        return Err(Error::Numerical(format!(
            "det(Q) = {det} is not finite real positive"
        )));
    }
    let qinv = lu
        .try_inverse()
        .ok_or_else(|| Error::Numerical("Q factorization is singular".into()))?;

    // A = X (I - Q^-1): row i of the product is row swap(i) of I - Q^-1
    let swap = |i: usize| if i < m { i + m } else { i - m };
    let a = ComplexMatrix::from_fn(dim, |i, j| {
        let r = swap(i);
        let idm = if r == j { 1.0 } else { 0.0 };
        C64::new(idm, 0.0) - qinv[(r, j)]
    });
    let dev = a.symmetry_deviation();
    if exceeds(dev, SYM_TOL) {
        return Err(Error::Symmetry {
            max_dev: dev,
            tol: SYM_TOL,
        });
    }

    let alpha = DVector::from_column_slice(st.alpha());
    let z = lu
        .solve(&alpha)
        .ok_or_else(|| Error::Numerical("Q solve failed".into()))?;
    let mut adag_z = C64::new(0.0, 0.0);
    for (ai, zi) in st.alpha().iter().zip(z.iter()) {
        adag_z += ai.conj() * zi;
    }
    if exceeds(adag_z.im.abs(), IMAG_TOL) {
        return Err(Error::Numerical(format!(
            "alpha^dagger Q^-1 alpha has imaginary part {:.3e}",
            adag_z.im
        )));
    }
    let prefactor = (-0.5 * adag_z.re).exp() / det.re.sqrt();
    let prefactor_ok = prefactor > 0.0 && prefactor <= 1.0 + IMAG_TOL;
    if !prefactor_ok {
        return Err(Error::Numerical(format!(
            "prefactor {prefactor:.3e} outside (0, 1]"
        )));
    }
    let gamma: Vec<C64> = z.iter().map(|v| v.conj()).collect();

    Ok(AdjacencyData {
        q,
        a,
        gamma,
        prefactor,
    })
}

/// Independent construction of the adjacency blocks straight from the
/// circuit: B = U diag(lambda) U^T and C = U diag(mu) U^dagger with
/// lambda_i = m_i / ((1+n_i)^2 - |m_i|^2) and
/// mu_i = 1 - (1+n_i) / ((1+n_i)^2 - |m_i|^2). Used only to cross-validate
/// [`adjacency`]; the two routes share no linear algebra.
pub fn bc_blocks(c: &CircuitSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    c.validate()?;
    let u = build_unitary(c)?;
    let m = c.modes;
    let eta = c.eta;
    let mut lambda = Vec::with_capacity(m);
    let mut mu = Vec::with_capacity(m);
    for i in 0..m {
        let n = eta * c.r[i].sinh().powi(2);
        let mm = C64::from_polar(0.5 * eta * (2.0 * c.r[i]).sinh(), c.phi_sq[i]);
        let det = (1.0 + n).powi(2) - mm.norm_sqr();
        lambda.push(mm / det);
        mu.push(1.0 - (1.0 + n) / det);
    }
    let b = ComplexMatrix::from_fn(m, |i, j| {
        (0..m).map(|k| u.get(i, k) * lambda[k] * u.get(j, k)).sum()
    });
    let cc = ComplexMatrix::from_fn(m, |i, j| {
        (0..m)
            .map(|k| u.get(i, k) * mu[k] * u.get(j, k).conj())
            .sum()
    });
    Ok((b, cc))
}

/// Materialize the extended adjacency matrix of a pattern: repeat index
/// pairs (j, M+j) of A s_j times each (indices with s_j = 0 are deleted)
/// and overwrite the diagonal with the correspondingly repeated gamma.
/// This is the matrix whose loop hafnian gives the pattern probability;
/// [`prob`] avoids building it at scale, so this explicit form mainly
/// feeds brute-force cross-checks.
pub fn extended_adjacency(st: &GaussianState, s: &[u32]) -> Result<ComplexMatrix> {
    let m = st.modes();
    if s.len() != m {
        return Err(Error::Dimension(format!(
            "pattern of length {} for an {m}-mode state",
            s.len()
        )));
    }
    let ad = adjacency(st)?;
    let mut rep = Vec::with_capacity(2 * m);
    rep.extend_from_slice(s);
    rep.extend_from_slice(s);
    let rv = RepetitionVector(rep);
    let expanded = repeat_pattern(&ad.a, &rv)?;
    let diag = repeat_vec(&ad.gamma, &rv)?;
    fdiag(&expanded, &diag)
}

/// Exact probability of detecting the photon pattern s:
/// prefactor * lhaf(A~_s) / (s_1! ... s_M!). The adjacency matrix and
/// gamma are brought to interleaved order first, so the engine dispatch
/// (the policy of `lhaf_auto`, here with the replaced diagonal) sees the
/// banded structure; the repetition vector doubles each s_j for the
/// interleaved index pair.
pub fn prob(st: &GaussianState, s: &[u32]) -> Result<f64> {
    let m = st.modes();
    if s.len() != m {
        return Err(Error::Dimension(format!(
            "pattern of length {} for an {m}-mode state",
            s.len()
        )));
    }
    let ad = adjacency(st)?;
    prob_from_adjacency(&ad, m, s)
}

/// [`prob`] on precomputed adjacency data (the sampler holds one
/// AdjacencyData per step and reuses it across pattern evaluations).
pub(crate) fn prob_from_adjacency(ad: &AdjacencyData, m: usize, s: &[u32]) -> Result<f64> {
    let p = interleave_perm(m);
    let a_int = permute(&ad.a, &p)?;
    let g_int = permute_vec(&ad.gamma, &p)?;
    let mut rep = Vec::with_capacity(2 * s.len());
    for &sj in s {
        rep.push(sj);
        rep.push(sj);
    }
    let val = lhaf_auto_fdiag(&a_int, &g_int, &RepetitionVector(rep))?;
    finite_probability(val * ad.prefactor / pattern_factorial(s))
}

/// Accept a computed probability: discard an imaginary part below
/// [`IMAG_TOL`], clamp negatives above -IMAG_TOL to zero, cap at 1, and
/// reject anything worse as numerical breakdown.
pub(crate) fn finite_probability(raw: C64) -> Result<f64> {
    if !raw.re.is_finite() || !raw.im.is_finite() {
        return Err(Error::Numerical(format!("probability {raw} is not finite")));
    }
    if raw.im.abs() > IMAG_TOL {
        return Err(Error::Numerical(format!(
            "probability has imaginary part {:.3e} beyond tolerance",
            raw.im
        )));
    }
    let p = raw.re;
    if p < 0.0 {
        if p > -IMAG_TOL {
            return Ok(0.0);
        }
        return Err(Error::Numerical(format!(
            "probability {p:.3e} is negative beyond tolerance"
        )));
    }
    Ok(p.min(1.0))
}
