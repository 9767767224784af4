//! Circuit descriptions and their interferometer unitaries.

use num_complex::Complex64 as C64;

use crate::matrixcore::ComplexMatrix;
use crate::{Error, Result};

/// One local gate. Modes are 1-based; a beamsplitter on mode j couples
/// modes (j, j+1), so adjacency is structural.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// [[cos t, -e^{-i p} sin t], [e^{i p} sin t, cos t]] on (a_j, a_{j+1}).
    Beamsplitter { mode: usize, theta: f64, phi: f64 },
    /// e^{i d} on a_j.
    Phase { mode: usize, delta: f64 },
}

impl Gate {
    /// Modes the gate occupies, 1-based.
    fn footprint(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Beamsplitter { mode, .. } => (mode, Some(mode + 1)),
            Gate::Phase { mode, .. } => (mode, None),
        }
    }
}

/// Declarative circuit: M squeezed, displaced modes through layers of
/// local gates with uniform energy transmission eta. The layer count D
/// bounds the bandwidth of the composed unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub modes: usize,
    /// Per-mode squeezing magnitudes, >= 0.
    pub r: Vec<f64>,
    /// Per-mode squeezing phases (radians).
    pub phi_sq: Vec<f64>,
    /// Per-mode complex displacement amplitudes.
    pub beta: Vec<C64>,
    /// Uniform energy transmission in (0, 1]; 1 is lossless.
    pub eta: f64,
    /// Gate layers, applied in order; gates within a layer are disjoint.
    pub layers: Vec<Vec<Gate>>,
}

impl CircuitSpec {
    /// Circuit with no squeezing, no displacement, no gates, no loss.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            modes,
            r: vec![0.0; modes],
            phi_sq: vec![0.0; modes],
            beta: vec![C64::new(0.0, 0.0); modes],
            eta: 1.0,
            layers: Vec::new(),
        }
    }

    /// Number of layers D.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.modes;
        if m == 0 {
            return Err(Error::Precondition(
                "circuit needs at least one mode".into(),
            ));
        }
        if self.r.len() != m || self.phi_sq.len() != m || self.beta.len() != m {
            return Err(Error::Dimension(format!(
                "per-mode data lengths ({}, {}, {}) for {} modes",
                self.r.len(),
                self.phi_sq.len(),
                self.beta.len(),
                m
            )));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::Precondition(format!(
                "transmission eta = {} outside (0, 1]",
                self.eta
            )));
        }
        for (i, &ri) in self.r.iter().enumerate() {
            if !ri.is_finite() || ri < 0.0 {
                return Err(Error::Precondition(format!(
                    "squeezing magnitude r[{}] = {} (must be finite and >= 0)",
                    i + 1,
                    ri
                )));
            }
        }
        if self.phi_sq.iter().any(|p| !p.is_finite())
            || self
                .beta
                .iter()
                .any(|b| !b.re.is_finite() || !b.im.is_finite())
        {
            return Err(Error::Precondition(
                "non-finite squeezing phase or displacement".into(),
            ));
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut occupied = vec![false; m + 1];
            for gate in layer {
                let (a, b) = gate.footprint();
                let hi = b.unwrap_or(a);
                if a < 1 || hi > m {
                    return Err(Error::Precondition(format!(
                        "layer {}: gate on mode {} outside 1..={}",
                        li + 1,
                        a,
                        m
                    )));
                }
                match *gate {
                    Gate::Beamsplitter { theta, phi, .. } => {
                        if !theta.is_finite() || !phi.is_finite() {
                            return Err(Error::Precondition(format!(
                                "layer {}: non-finite beamsplitter angles",
                                li + 1
                            )));
                        }
                    }
                    Gate::Phase { delta, .. } => {
                        if !delta.is_finite() {
                            return Err(Error::Precondition(format!(
                                "layer {}: non-finite phase",
                                li + 1
                            )));
                        }
                    }
                }
                // index is the mode number reported in the error message
                #[allow(clippy::needless_range_loop)]
                for mode in a..=hi {
                    if occupied[mode] {
                        return Err(Error::Precondition(format!(
                            "layer {}: overlapping gates on mode {}",
                            li + 1,
                            mode
                        )));
                    }
                    occupied[mode] = true;
                }
            }
        }
        Ok(())
    }
}

/// Compose the circuit's M x M interferometer unitary, layer by layer.
/// Each layer is block-diagonal with 1x1 and 2x2 blocks, so D layers give
/// bandwidth at most D.
pub fn build_unitary(c: &CircuitSpec) -> Result<ComplexMatrix> {
    c.validate()?;
    let m = c.modes;
    let mut u = ComplexMatrix::identity(m);
    for layer in &c.layers {
        let mut l = ComplexMatrix::identity(m);
        for gate in layer {
            match *gate {
                Gate::Beamsplitter { mode, theta, phi } => {
                    let (ct, st) = (theta.cos(), theta.sin());
                    let e = C64::from_polar(1.0, phi);
                    let i = mode - 1;
                    l.set(i, i, C64::new(ct, 0.0));
                    l.set(i, i + 1, -e.conj() * st);
                    l.set(i + 1, i, e * st);
                    l.set(i + 1, i + 1, C64::new(ct, 0.0));
                }
                Gate::Phase { mode, delta } => {
                    l.set(mode - 1, mode - 1, C64::from_polar(1.0, delta));
                }
            }
        }
        u = l.matmul(&u)?;
    }
    Ok(u)
}
