//! Benchmark sweeps over the hafnian kernels and the sampler.
//!
//! A sweep spec is a semicolon-separated list of assignments, exactly one
//! of which is a range `start:end:step`; the rest are fixed values, for
//! example `n=500:2000:500;w=3`. Each kernel has a fixed parameter set:
//!
//! * `banded`: matrix size `n`, bandwidth `w`
//! * `banded-rep`: matrix size `n`, bandwidth `w`, per-index repetition `s`
//! * `sampler`: modes `m`, circuit depth `d`, detector threshold `c`
//!
//! Rows report the median wall time of 5 repetitions after 1 warm-up, plus
//! the engine call count of the measured run.

use gbts_core::gaussian::{CircuitSpec, Gate};
use gbts_core::hafnian::{lhaf_banded, lhaf_banded_rep};
use gbts_core::matrixcore::RepetitionVector;
use gbts_core::sampler::{gbts_sample, sample_stream, Engine, SamplerConfig};
use gbts_core::verify::random_banded_symmetric;
use gbts_core::{Error, Result};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Banded,
    BandedRep,
    Sampler,
}

impl std::str::FromStr for Kernel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "banded" => Ok(Kernel::Banded),
            "banded-rep" => Ok(Kernel::BandedRep),
            "sampler" => Ok(Kernel::Sampler),
            other => Err(Error::Parse(format!(
                "unknown kernel '{other}' (expected banded, banded-rep, or sampler)"
            ))),
        }
    }
}

impl Kernel {
    fn params(self) -> &'static [&'static str] {
        match self {
            Kernel::Banded => &["n", "w"],
            Kernel::BandedRep => &["n", "w", "s"],
            Kernel::Sampler => &["m", "d", "c"],
        }
    }
}

/// A parsed sweep: one varying parameter with its values, the rest fixed.
#[derive(Debug)]
pub struct Sweep {
    pub varying: String,
    pub values: Vec<u64>,
    pub fixed: BTreeMap<String, u64>,
}

pub fn parse_sweep(spec: &str) -> Result<Sweep> {
    let mut varying: Option<(String, Vec<u64>)> = None;
    let mut fixed = BTreeMap::new();
    for part in spec.split(';').filter(|p| !p.is_empty()) {
        let (key, rhs) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("sweep term '{part}' is not key=value")))?;
        let key = key.trim().to_string();
        let pieces: Vec<&str> = rhs.split(':').collect();
        let nums: Vec<u64> = pieces
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("sweep value '{p}' is not an integer")))
            })
            .collect::<Result<_>>()?;
        match nums.as_slice() {
            [v] => {
                if fixed.insert(key.clone(), *v).is_some() {
                    return Err(Error::Parse(format!("duplicate sweep parameter '{key}'")));
                }
            }
            [start, end, step] => {
                if varying.is_some() {
                    return Err(Error::Parse("sweep has more than one range".into()));
                }
                if *step == 0 || end < start {
                    return Err(Error::Parse(format!("empty sweep range '{part}'")));
                }
                let values: Vec<u64> = (*start..=*end).step_by(*step as usize).collect();
                varying = Some((key, values));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "sweep term '{part}' must be value or start:end:step"
                )))
            }
        }
    }
    let (varying, values) =
        varying.ok_or_else(|| Error::Parse("sweep names no varying range".into()))?;
    if fixed.contains_key(&varying) {
        return Err(Error::Parse(format!(
            "sweep parameter '{varying}' is both fixed and ranged"
        )));
    }
    Ok(Sweep {
        varying,
        values,
        fixed,
    })
}

#[derive(Debug)]
pub struct BenchRow {
    pub value: u64,
    pub median_time_s: f64,
    pub engine_calls: u64,
}

/// Median wall time of 5 runs after 1 warm-up; the call count comes from
/// the last measured run.
fn median5(mut run: impl FnMut() -> Result<u64>) -> Result<(f64, u64)> {
    run()?;
    let mut times = Vec::with_capacity(5);
    let mut calls = 0;
    for _ in 0..5 {
        let t0 = Instant::now();
        calls = run()?;
        times.push(t0.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok((times[2], calls))
}

fn brick_wall(m: usize, d: usize) -> CircuitSpec {
    let mut layers = Vec::with_capacity(d);
    for layer in 0..d {
        let mut gates = Vec::new();
        let mut j = 1 + (layer % 2);
        while j < m {
            gates.push(Gate::Beamsplitter {
                mode: j,
                theta: 0.7,
                phi: 0.3,
            });
            j += 2;
        }
        layers.push(gates);
    }
    CircuitSpec {
        modes: m,
        r: vec![0.25; m],
        phi_sq: vec![0.0; m],
        beta: vec![C64::new(0.0, 0.0); m],
        eta: 1.0,
        layers,
    }
}

pub fn run_bench(kernel: Kernel, sweep: &Sweep) -> Result<Vec<BenchRow>> {
    let mut names: Vec<&str> = sweep.fixed.keys().map(String::as_str).collect();
    names.push(&sweep.varying);
    names.sort_unstable();
    let mut expected: Vec<&str> = kernel.params().to_vec();
    expected.sort_unstable();
    if names != expected {
        return Err(Error::Parse(format!(
            "kernel parameters are {:?}, sweep provides {names:?}",
            kernel.params()
        )));
    }
    let mut rows = Vec::with_capacity(sweep.values.len());
    for &value in &sweep.values {
        let mut p = sweep.fixed.clone();
        p.insert(sweep.varying.clone(), value);
        let (median_time_s, engine_calls) = match kernel {
            Kernel::Banded => {
                let (n, w) = (p["n"] as usize, p["w"] as usize);
                let mut rng = ChaCha12Rng::seed_from_u64(0xBE7C ^ value);
                let a = random_banded_symmetric(&mut rng, n, w);
                median5(|| lhaf_banded(&a, w).map(|_| 1))?
            }
            Kernel::BandedRep => {
                let (n, w, s) = (p["n"] as usize, p["w"] as usize, p["s"] as u32);
                let mut rng = ChaCha12Rng::seed_from_u64(0xBE7D ^ value);
                let a = random_banded_symmetric(&mut rng, n, w);
                let reps = RepetitionVector(vec![s; n]);
                median5(|| lhaf_banded_rep(&a, w, &reps).map(|_| 1))?
            }
            Kernel::Sampler => {
                let (m, d, c) = (p["m"] as usize, p["d"] as usize, p["c"] as u32);
                let circuit = brick_wall(m, d);
                let cfg = SamplerConfig {
                    c,
                    seed: 0xBE7E,
                    engine: Engine::Auto,
                };
                median5(|| {
                    gbts_sample(&circuit, &cfg, &mut sample_stream(cfg.seed, 0))
                        .map(|o| o.hafnian_calls)
                })?
            }
        };
        rows.push(BenchRow {
            value,
            median_time_s,
            engine_calls,
        });
    }
    Ok(rows)
}
