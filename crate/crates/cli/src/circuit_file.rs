//! Circuit description files.
//!
//! Circuits are stored as TOML with an explicit `format_version = 1` field
//! so fixtures stay readable across releases. Unknown fields are rejected.
//!
//! ```toml
//! format_version = 1
//! modes = 2
//! eta = 1.0
//!
//! [[squeezing]]
//! r = 0.6
//! phase = 0.0
//!
//! [[squeezing]]
//! r = 0.6
//!
//! [[layers]]
//! gates = [{ kind = "beamsplitter", mode = 1, theta = 0.785398163397448 }]
//! ```
//!
//! `displacement` is an optional array of `[re, im]` pairs, one per mode,
//! defaulting to zero. A beamsplitter on `mode = j` couples modes j and
//! j+1; a phase gate takes `delta` instead of `theta`/`phi`.

use gbts_core::gaussian::{CircuitSpec, Gate};
use gbts_core::Error;
use num_complex::Complex64 as C64;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    format_version: u32,
    modes: usize,
    eta: f64,
    squeezing: Vec<SqueezeEntry>,
    #[serde(default)]
    displacement: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    layers: Vec<LayerEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SqueezeEntry {
    r: f64,
    #[serde(default)]
    phase: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerEntry {
    gates: Vec<GateEntry>,
}

// One struct for every gate kind keeps unknown-field rejection strict;
// kind-specific parameter checks happen after deserialization.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GateEntry {
    kind: String,
    mode: usize,
    #[serde(default)]
    theta: Option<f64>,
    #[serde(default)]
    phi: Option<f64>,
    #[serde(default)]
    delta: Option<f64>,
}

impl GateEntry {
    fn into_gate(self) -> Result<Gate, Error> {
        match self.kind.as_str() {
            "beamsplitter" => {
                let theta = self
                    .theta
                    .ok_or_else(|| Error::Parse("beamsplitter gate needs theta".into()))?;
                if self.delta.is_some() {
                    return Err(Error::Parse("beamsplitter gate does not take delta".into()));
                }
                Ok(Gate::Beamsplitter {
                    mode: self.mode,
                    theta,
                    phi: self.phi.unwrap_or(0.0),
                })
            }
            "phase" => {
                let delta = self
                    .delta
                    .ok_or_else(|| Error::Parse("phase gate needs delta".into()))?;
                if self.theta.is_some() || self.phi.is_some() {
                    return Err(Error::Parse("phase gate takes only delta".into()));
                }
                Ok(Gate::Phase {
                    mode: self.mode,
                    delta,
                })
            }
            other => Err(Error::Parse(format!("unknown gate kind '{other}'"))),
        }
    }
}

/// Parse a circuit file and validate it against the circuit model.
pub fn parse_circuit(text: &str) -> Result<CircuitSpec, Error> {
    let file: CircuitFile =
        toml::from_str(text).map_err(|e| Error::Parse(format!("circuit file: {e}")))?;
    if file.format_version != 1 {
        return Err(Error::Parse(format!(
            "unsupported format_version {} (expected 1)",
            file.format_version
        )));
    }
    if file.squeezing.len() != file.modes {
        return Err(Error::Parse(format!(
            "{} squeezing entries for {} modes",
            file.squeezing.len(),
            file.modes
        )));
    }
    let beta = match file.displacement {
        None => vec![C64::new(0.0, 0.0); file.modes],
        Some(d) => {
            if d.len() != file.modes {
                return Err(Error::Parse(format!(
                    "{} displacement entries for {} modes",
                    d.len(),
                    file.modes
                )));
            }
            d.iter().map(|p| C64::new(p[0], p[1])).collect()
        }
    };
    let mut layers = Vec::with_capacity(file.layers.len());
    for layer in file.layers {
        let gates: Result<Vec<Gate>, Error> =
            layer.gates.into_iter().map(GateEntry::into_gate).collect();
        layers.push(gates?);
    }
    let spec = CircuitSpec {
        modes: file.modes,
        r: file.squeezing.iter().map(|s| s.r).collect(),
        phi_sq: file.squeezing.iter().map(|s| s.phase).collect(),
        beta,
        eta: file.eta,
        layers,
    };
    spec.validate()?;
    Ok(spec)
}
