//! Exact threshold sampling by the chain rule.
//!
//! A resolution-c detector reports photon counts 0..=c; any outcome that
//! overloads at least one detector is coarse-grained into a single
//! overflow symbol. Sampling proceeds mode by mode: at step k the
//! conditional distribution over {0..c, overflow} given the prefix drawn
//! so far is a ratio of marginal probabilities of the state reduced to k
//! modes, the denominator carried forward from the previous step. Drawing
//! the overflow outcome ends the sample immediately.
//!
//! At each step the k-mode adjacency data is built once; the production
//! engines then evaluate the whole family p(prefix, x) for x = 0..=c in a
//! single repetition-DP pass. The family shares one expanded matrix shape
//! in which only the multiplicity of the last index pair varies, and the
//! DP's final window keeps both of those axes, so every family member is
//! a readout of one table. That is what keeps the per-sample cost within
//! M*c engine calls; the brute and banded engines exist as cross-checking
//! oracles and pay c+1 separate hafnian calls per step instead.
//!
//! Randomness: each sample uses stream `index` of a ChaCha12 generator
//! seeded with the configured seed, one uniform draw per step, inverse
//! CDF with ties resolved to the lower outcome. Batch output is therefore
//! identical across runs, execution orders, and thread counts.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::gaussian::{adjacency, prepare_state, reduce, CircuitSpec, GaussianState, IMAG_TOL};
use crate::hafnian::{factorial, lhaf_banded, lhaf_brute, pattern_factorial, RepDp};
use crate::matrixcore::{
    bandwidth, exceeds, extract_principal, fdiag, interleave_perm, permute, permute_vec,
    repeat_pattern, repeat_vec, ComplexMatrix, RepetitionVector, BAND_TOL,
};
use crate::{Error, Result};

/// One sample: per-mode counts within detector resolution, or the
/// coarse-grained overflow outcome.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PhotonPattern {
    Counts(Vec<u32>),
    Overflow,
}

impl PhotonPattern {
    /// Output-file form: space-separated counts, or `#` for overflow.
    pub fn to_line(&self) -> String {
        match self {
            PhotonPattern::Overflow => "#".to_string(),
            PhotonPattern::Counts(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Hafnian engine a sampler step evaluates probabilities with. Auto and
/// BandedRep take the one-pass family DP; Brute and Banded are oracle
/// paths evaluating each pattern separately on the expanded matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Auto,
    Brute,
    Banded,
    BandedRep,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Engine::Auto),
            "brute" => Ok(Engine::Brute),
            "banded" => Ok(Engine::Banded),
            "banded-rep" => Ok(Engine::BandedRep),
            _ => Err(Error::Parse(format!(
                "unknown engine '{s}' (expected auto, brute, banded, or banded-rep)"
            ))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Brute => "brute",
            Engine::Banded => "banded",
            Engine::BandedRep => "banded-rep",
        })
    }
}

/// Detector resolution, seed, and engine choice.
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub c: u32,
    pub seed: u64,
    pub engine: Engine,
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.c < 1 {
            return Err(Error::Precondition(
                "detector resolution c must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Conditional probability table of one sampling step: q[x] for photon
/// counts x = 0..=c, then the overflow mass last. Entries are
/// non-negative and sum to 1 (the overflow entry is the complement).
#[derive(Clone, Debug)]
pub struct ConditionalDist {
    pub q: Vec<f64>,
    /// Hafnian-engine invocations spent building the table.
    pub hafnian_calls: u64,
}

/// A drawn sample together with the engine calls it cost (the per-sample
/// cost contract is hafnian_calls <= M*c on the production engines).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub pattern: PhotonPattern,
    pub hafnian_calls: u64,
}

/// Per-step cache: interleaved adjacency matrix and gamma of the state
/// reduced to k modes, built once and reused across every pattern
/// evaluation at that step (and across samples in a batch).
struct StepData {
    a_int: ComplexMatrix,
    gamma_int: Vec<C64>,
    prefactor: f64,
}

fn step_data(st_k: &GaussianState) -> Result<StepData> {
    let ad = adjacency(st_k)?;
    let p = interleave_perm(st_k.modes());
    Ok(StepData {
        a_int: permute(&ad.a, &p)?,
        gamma_int: permute_vec(&ad.gamma, &p)?,
        prefactor: ad.prefactor,
    })
}

/// Conditional distribution over {0..c, overflow} at step k: the state
/// reduced to k modes, the drawn prefix of length k-1, and its
/// probability (carried forward by the caller; must be positive).
pub fn conditional_dist(
    st_k: &GaussianState,
    prefix: &[u32],
    prior_prob: f64,
    cfg: &SamplerConfig,
) -> Result<ConditionalDist> {
    cfg.validate()?;
    if prefix.len() + 1 != st_k.modes() {
        return Err(Error::Dimension(format!(
            "prefix of length {} with a state reduced to {} modes",
            prefix.len(),
            st_k.modes()
        )));
    }
    // positively established, so NaN never reaches the division below
    let prior_ok = prior_prob.is_finite() && prior_prob > 0.0;
    if !prior_ok {
        return Err(Error::Precondition(format!(
            "prior probability {prior_prob} is not finite positive"
        )));
    }
    let sd = step_data(st_k)?;
    step_conditional(&sd, prefix, prior_prob, cfg)
}

fn step_conditional(
    sd: &StepData,
    prefix: &[u32],
    prior: f64,
    cfg: &SamplerConfig,
) -> Result<ConditionalDist> {
    let (numerators, hafnian_calls) = match cfg.engine {
        Engine::Auto | Engine::BandedRep => family_numerators(sd, prefix, cfg.c)?,
        Engine::Brute => explicit_numerators(sd, prefix, cfg.c, false)?,
        Engine::Banded => explicit_numerators(sd, prefix, cfg.c, true)?,
    };
    let mut q = Vec::with_capacity(numerators.len() + 1);
    for (x, &num) in numerators.iter().enumerate() {
        let mut qx = num / prior;
        if !qx.is_finite() {
            return Err(Error::Numerical(format!(
                "conditional mass at outcome {x} is not finite"
            )));
        }
        if qx < 0.0 {
            if qx < -IMAG_TOL {
                return Err(Error::Numerical(format!(
                    "conditional mass {qx:.3e} at outcome {x} is negative beyond tolerance"
                )));
            }
            qx = 0.0;
        }
        q.push(qx);
    }
    let sum: f64 = q.iter().sum();
    if exceeds(sum, 1.0 + IMAG_TOL) {
        return Err(Error::Numerical(format!(
            "conditional masses sum to {sum} > 1"
        )));
    }
    if sum > 1.0 {
        // overshoot within tolerance: no overflow mass left, renormalize
        for qx in q.iter_mut() {
            *qx /= sum;
        }
        q.push(0.0);
    } else {
        q.push(1.0 - sum);
    }
    Ok(ConditionalDist { q, hafnian_calls })
}

/// All numerators p(prefix, x) for x = 0..=c from one repetition-DP pass.
///
/// The expanded matrix of the pattern (prefix, x) is the interleaved
/// adjacency at multiplicities (s_1, s_1, ..., s_{k-1}, s_{k-1}, x, x)
/// with gamma on the diagonal. Zero-multiplicity prefix pairs are deleted
/// up front; the tail pair always stays, with DP bounds (c, c). Entries
/// of the final table at (full, ..., full, x, x) equal the scaled
/// subhafnians of every tail multiplicity x at once, because the DP
/// recursion below a bound never references entries above it and the tail
/// axes never leave the window (the window parameter is kept >= 1).
fn family_numerators(sd: &StepData, prefix: &[u32], c: u32) -> Result<(Vec<f64>, u64)> {
    let k = prefix.len() + 1;
    let mut keep = Vec::with_capacity(2 * k);
    let mut s_dp = Vec::with_capacity(2 * k);
    for (j, &sj) in prefix.iter().enumerate() {
        if sj > 0 {
            // interleaved pair of mode j+1, 1-based indices
            keep.push(2 * j + 1);
            keep.push(2 * j + 2);
            s_dp.push(sj);
            s_dp.push(sj);
        }
    }
    keep.push(2 * k - 1);
    keep.push(2 * k);
    s_dp.push(c);
    s_dp.push(c);

    let ac = extract_principal(&sd.a_int, &keep)?;
    let gc: Vec<C64> = keep.iter().map(|&i| sd.gamma_int[i - 1]).collect();
    let w_dp = bandwidth(&ac, BAND_TOL).max(1);
    let mut dp = RepDp::new(&ac, gc, s_dp, w_dp);
    for _ in 0..ac.dim() {
        dp.advance();
    }

    let axes = dp.table().axes();
    let mut d = dp.table().bounds.clone();
    let pf_prefix = pattern_factorial(prefix);
    let mut out = Vec::with_capacity(c as usize + 1);
    for x in 0..=c {
        d[axes - 2] = x;
        d[axes - 1] = x;
        let h = dp.value_at(&d)?;
        // lhaf scaling: prefix factorials (squared per pair) cancel one
        // power against the pattern factorial, the tail contributes x!
        let raw = h * (sd.prefactor * pf_prefix * factorial(x));
        if exceeds(raw.im.abs(), IMAG_TOL) {
            return Err(Error::Numerical(format!(
                "probability numerator has imaginary part {:.3e}",
                raw.im
            )));
        }
        out.push(raw.re);
    }
    // one pass delivers the c nonzero-count numerators; x = 0 rides along
    Ok((out, c as u64))
}

/// Oracle-path numerators: one explicit expanded hafnian per outcome.
fn explicit_numerators(
    sd: &StepData,
    prefix: &[u32],
    c: u32,
    banded: bool,
) -> Result<(Vec<f64>, u64)> {
    let mut pattern = prefix.to_vec();
    pattern.push(0);
    let last = pattern.len() - 1;
    let mut out = Vec::with_capacity(c as usize + 1);
    for x in 0..=c {
        pattern[last] = x;
        let mut rep = Vec::with_capacity(2 * pattern.len());
        for &sj in &pattern {
            rep.push(sj);
            rep.push(sj);
        }
        let rv = RepetitionVector(rep);
        let expanded = fdiag(
            &repeat_pattern(&sd.a_int, &rv)?,
            &repeat_vec(&sd.gamma_int, &rv)?,
        )?;
        let v = if banded {
            lhaf_banded(&expanded, bandwidth(&expanded, BAND_TOL))?
        } else {
            lhaf_brute(&expanded)?
        };
        let raw = v * (sd.prefactor / pattern_factorial(&pattern));
        if exceeds(raw.im.abs(), IMAG_TOL) {
            return Err(Error::Numerical(format!(
                "probability numerator has imaginary part {:.3e}",
                raw.im
            )));
        }
        out.push(raw.re);
    }
    Ok((out, c as u64 + 1))
}

/// Inverse-CDF draw: smallest outcome with positive mass whose cumulative
/// reaches u (ties at a boundary go to the lower outcome; zero-mass
/// outcomes are never drawn). Falls back to the last positive-mass
/// outcome if accumulated rounding leaves u above the total.
fn draw_outcome(q: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    let mut last_pos = 0;
    for (i, &qi) in q.iter().enumerate() {
        if qi > 0.0 {
            cum += qi;
            last_pos = i;
            if u <= cum {
                return i;
            }
        }
    }
    last_pos
}

/// Precomputed per-step data for one circuit.
struct Sampler {
    steps: Vec<StepData>,
}

impl Sampler {
    fn new(circuit: &CircuitSpec) -> Result<Self> {
        let full = prepare_state(circuit)?;
        let m = full.modes();
        let mut steps = Vec::with_capacity(m);
        for k in 1..=m {
            let st_k = reduce(&full, k)?;
            steps.push(step_data(&st_k)?);
        }
        Ok(Self { steps })
    }

    fn run_one(&self, cfg: &SamplerConfig, rng: &mut impl Rng) -> Result<SampleOutcome> {
        let overflow_idx = cfg.c as usize + 1;
        let mut prefix: Vec<u32> = Vec::with_capacity(self.steps.len());
        let mut prior = 1.0f64;
        let mut hafnian_calls = 0u64;
        for sd in &self.steps {
            let dist = step_conditional(sd, &prefix, prior, cfg)?;
            hafnian_calls += dist.hafnian_calls;
            let u: f64 = rng.gen();
            let i = draw_outcome(&dist.q, u);
            if i == overflow_idx {
                return Ok(SampleOutcome {
                    pattern: PhotonPattern::Overflow,
                    hafnian_calls,
                });
            }
            prior *= dist.q[i];
            prefix.push(i as u32);
        }
        Ok(SampleOutcome {
            pattern: PhotonPattern::Counts(prefix),
            hafnian_calls,
        })
    }
}

/// The random stream of one sample: stream `index` of a ChaCha12
/// generator seeded with `seed`. Fixed by contract so sample fixtures are
/// portable across versions and platforms.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw one sample from the circuit's threshold distribution.
pub fn gbts_sample(
    circuit: &CircuitSpec,
    cfg: &SamplerConfig,
    rng: &mut impl Rng,
) -> Result<SampleOutcome> {
    cfg.validate()?;
    Sampler::new(circuit)?.run_one(cfg, rng)
}

/// Draw n samples, sample i from stream (seed, i). The per-step state
/// preparations are shared; samples run in parallel and collect in index
/// order, so the output is identical for any thread count.
pub fn batch_sample(
    circuit: &CircuitSpec,
    cfg: &SamplerConfig,
    n: usize,
) -> Result<Vec<SampleOutcome>> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    let sampler = Sampler::new(circuit)?;
    (0..n)
        .into_par_iter()
        .map(|i| sampler.run_one(cfg, &mut sample_stream(cfg.seed, i as u64)))
        .collect()
}
