//! Gaussian state construction and reduction to leading modes.

use num_complex::Complex64 as C64;

use super::circuit::{build_unitary, CircuitSpec};
use crate::matrixcore::{exceeds, ComplexMatrix, SYM_TOL};
use crate::{Error, Result};

/// Gaussian state in creation/annihilation ordering: alpha holds the M
/// annihilation-operator means followed by their conjugates, sigma is the
/// 2M x 2M covariance with vacuum I/2.
#[derive(Clone, Debug)]
pub struct GaussianState {
    modes: usize,
    alpha: Vec<C64>,
    sigma: ComplexMatrix,
}

impl GaussianState {
    /// Wrap a mean vector and covariance, validating the ordering's
    /// conjugation symmetry: alpha_{M+j} = conj(alpha_j) and
    /// sigma = X conj(sigma) X with X the half swap. Positive
    /// definiteness of Q = sigma + I/2 is checked where it is needed, at
    /// adjacency construction.
    pub fn new(alpha: Vec<C64>, sigma: ComplexMatrix) -> Result<Self> {
        let dim = sigma.dim();
        if !dim.is_multiple_of(2) || alpha.len() != dim || dim == 0 {
            return Err(Error::Dimension(format!(
                "mean vector of length {} with {}x{} covariance",
                alpha.len(),
                dim,
                dim
            )));
        }
        // non-finite moments (overflowed circuit parameters, NaN input)
        // would otherwise slip through every tolerance gate downstream
        let finite = alpha.iter().all(|v| v.re.is_finite() && v.im.is_finite())
            && sigma
                .as_slice()
                .iter()
                .all(|v| v.re.is_finite() && v.im.is_finite());
        if !finite {
            return Err(Error::Unphysical(
                "state has non-finite mean or covariance entries".into(),
            ));
        }
        let st = Self {
            modes: dim / 2,
            alpha,
            sigma,
        };
        let dev = st.conjugation_deviation();
        if exceeds(dev, SYM_TOL) {
            return Err(Error::Symmetry {
                max_dev: dev,
                tol: SYM_TOL,
            });
        }
        Ok(st)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    pub fn sigma(&self) -> &ComplexMatrix {
        &self.sigma
    }

    /// Largest violation of the ordering's conjugation symmetry, over both
    /// the mean vector and the covariance.
    pub fn conjugation_deviation(&self) -> f64 {
        let m = self.modes;
        let swap = |i: usize| if i < m { i + m } else { i - m };
        let mut dev = 0.0f64;
        for j in 0..m {
            dev = dev.max((self.alpha[m + j] - self.alpha[j].conj()).norm());
        }
        for i in 0..2 * m {
            for j in 0..2 * m {
                let d = (self.sigma.get(i, j) - self.sigma.get(swap(i), swap(j)).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }
}

/// Build the output state of a circuit: per-mode squeezed (and displaced)
/// inputs through the interferometer U with uniform transmission eta.
///
/// Uniform loss commutes with a passive unitary, so it enters only through
/// the per-mode moments n_i = eta sinh^2 r_i and
/// m_i = (eta/2) sinh(2 r_i) e^{i phi_i}; the covariance is sigma = V T V*
/// with V = diag(conj(U), U) and T carrying (n_i + 1/2) on the diagonal and
/// the pair moments off it. Convention notes, both fixed by cross-checks
/// rather than free choices: T places conj(m_i) in the upper-right block
/// (so the adjacency B block comes out as U diag(lambda) U^T, matching the
/// independent construction in bc_blocks), and the mean transports as
/// sqrt(eta) conj(U) beta (the same map V applies to sigma; the coherent
/// Poisson statistics pin the pairing).
pub fn prepare_state(c: &CircuitSpec) -> Result<GaussianState> {
    c.validate()?;
    let m = c.modes;
    let u = build_unitary(c)?;
    let eta = c.eta;

    let n: Vec<f64> = c.r.iter().map(|&r| eta * r.sinh().powi(2)).collect();
    let mm: Vec<C64> =
        c.r.iter()
            .zip(&c.phi_sq)
            .map(|(&r, &phi)| C64::from_polar(0.5 * eta * (2.0 * r).sinh(), phi))
            .collect();

    let mut t = ComplexMatrix::zeros(2 * m);
    for i in 0..m {
        let d = C64::new(n[i] + 0.5, 0.0);
        t.set(i, i, d);
        t.set(m + i, m + i, d);
        t.set(i, m + i, mm[i].conj());
        t.set(m + i, i, mm[i]);
    }

    let mut v = ComplexMatrix::zeros(2 * m);
    for i in 0..m {
        for j in 0..m {
            v.set(i, j, u.get(i, j).conj());
            v.set(m + i, m + j, u.get(i, j));
        }
    }
    let sigma = v.matmul(&t)?.matmul(&v.adjoint())?;

    let scale = eta.sqrt();
    let mut alpha = vec![C64::new(0.0, 0.0); 2 * m];
    for i in 0..m {
        let mut x = C64::new(0.0, 0.0);
        for j in 0..m {
            x += u.get(i, j).conj() * c.beta[j];
        }
        alpha[i] = scale * x;
        alpha[m + i] = alpha[i].conj();
    }

    GaussianState::new(alpha, sigma)
}

/// Restrict a state to its leading k modes: keep mean entries
/// {1..k, M+1..M+k} and the matching covariance rows/columns.
pub fn reduce(st: &GaussianState, k: usize) -> Result<GaussianState> {
    let m = st.modes();
    if k < 1 || k > m {
        return Err(Error::Precondition(format!(
            "reduction to {k} modes of a {m}-mode state"
        )));
    }
    if k == m {
        return Ok(st.clone());
    }
    // 0-based source index for reduced position i
    let src = |i: usize| if i < k { i } else { m + (i - k) };
    let alpha: Vec<C64> = (0..2 * k).map(|i| st.alpha()[src(i)]).collect();
    let sigma = ComplexMatrix::from_fn(2 * k, |i, j| st.sigma().get(src(i), src(j)));
    GaussianState::new(alpha, sigma)
}
