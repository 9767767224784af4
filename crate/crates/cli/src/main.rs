//! Command-line interface to the threshold-sampling simulator.
//!
//! Subcommands: `lhaf` (loop hafnian of a matrix file), `prob` (outcome
//! probability of a circuit), `sample` (seeded threshold samples),
//! `verify` (self-check suites), `bench` (kernel timing sweeps to CSV).
//!
//! Exit codes are stable: 0 success, 1 verification failure, 2 parse
//! failure, 3 precondition failure, 4 unphysical state. All floating
//! output carries 15 significant digits with a `.` decimal separator.

mod bench;
mod circuit_file;
mod report;

use clap::{Parser, Subcommand};
use gbts_core::gaussian::{prepare_state, prob};
use gbts_core::hafnian::{lhaf_auto, lhaf_banded, lhaf_banded_rep, lhaf_brute};
use gbts_core::matrixcore::{bandwidth, repeat_pattern, ComplexMatrix, RepetitionVector, BAND_TOL};
use gbts_core::sampler::{batch_sample, Engine, SamplerConfig};
use gbts_core::verify::{run_lemma_suite, run_oracle_suite};
use gbts_core::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "gbts",
    version,
    about = "Gaussian boson threshold sampling toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the loop hafnian of a matrix file, printed as `re im`
    Lhaf {
        /// Matrix file: first line n, then n whitespace-separated rows of
        /// `re` or `re,im` entries
        matrix: PathBuf,
        /// Engine: auto, brute, banded, or banded-rep
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Repetition counts, one per index (e.g. `--reps 2,1,0,3`)
        #[arg(long)]
        reps: Option<String>,
        /// Declared bandwidth for the banded engines (measured if omitted)
        #[arg(long)]
        bandwidth: Option<usize>,
    },
    /// Print the photon-count probability of one outcome pattern
    Prob {
        /// Circuit file (TOML, format_version 1)
        circuit: PathBuf,
        /// Outcome pattern, one count per mode (e.g. `--pattern 0,2`)
        #[arg(long)]
        pattern: String,
    },
    /// Draw seeded threshold-detector samples, one line per sample
    Sample {
        /// Circuit file (TOML, format_version 1)
        circuit: PathBuf,
        /// Detector resolution c; counts above c print as `#`
        #[arg(long)]
        threshold: u32,
        /// Number of samples
        #[arg(long)]
        samples: usize,
        /// Seed of the sample streams
        #[arg(long)]
        seed: u64,
        /// Engine: auto, brute, banded, or banded-rep
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Write a JSON run report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the self-check suites and report measured quantities
    Verify {
        /// Suite: lemmas, oracles, or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed of the randomized corpora
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Time a kernel over a parameter sweep and write CSV
    Bench {
        /// Kernel: banded, banded-rep, or sampler
        #[arg(long)]
        kernel: String,
        /// Sweep spec, e.g. `n=500:2000:500;w=3` (exactly one range)
        #[arg(long)]
        sweep: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Unphysical(_) => 4,
                _ => 3,
            })
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Lhaf {
            matrix,
            engine,
            reps,
            bandwidth,
        } => cmd_lhaf(&matrix, &engine, reps.as_deref(), bandwidth),
        Cmd::Prob { circuit, pattern } => cmd_prob(&circuit, &pattern),
        Cmd::Sample {
            circuit,
            threshold,
            samples,
            seed,
            engine,
            report,
        } => cmd_sample(
            &circuit,
            threshold,
            samples,
            seed,
            &engine,
            report.as_deref(),
        ),
        Cmd::Verify { suite, seed } => cmd_verify(&suite, seed),
        Cmd::Bench { kernel, sweep, out } => cmd_bench(&kernel, &sweep, &out),
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Format with 15 significant digits: integers print plain, moderate
/// exponents print positionally, the rest in scientific notation.
fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i128);
    }
    let sci = format!("{:.14e}", x);
    let exp: i32 = sci
        .split_once('e')
        .map(|(_, e)| e.parse().unwrap_or(0))
        .unwrap_or(0);
    if (-4..15).contains(&exp) {
        format!("{:.*}", (14 - exp).max(0) as usize, x)
    } else {
        sci
    }
}

fn parse_counts(text: &str, what: &str) -> Result<Vec<u32>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Parse(format!("{what} entry '{t}' is not a count")))
        })
        .collect()
}

fn cmd_lhaf(
    matrix: &Path,
    engine: &str,
    reps: Option<&str>,
    declared: Option<usize>,
) -> Result<ExitCode> {
    let a = ComplexMatrix::parse_text(&read_input(matrix)?)?;
    let engine: Engine = engine.parse()?;
    let reps = reps
        .map(|r| parse_counts(r, "reps").map(RepetitionVector))
        .transpose()?;
    if let Some(s) = &reps {
        if s.len() != a.dim() {
            return Err(Error::Precondition(format!(
                "{} repetition counts for a {}x{} matrix",
                s.len(),
                a.dim(),
                a.dim()
            )));
        }
    }
    if declared.is_some() && matches!(engine, Engine::Auto | Engine::Brute) {
        return Err(Error::Precondition(
            "--bandwidth applies only to the banded engines".into(),
        ));
    }
    let value = match engine {
        Engine::Auto => lhaf_auto(&a, reps.as_ref())?,
        Engine::Brute => {
            let m = match &reps {
                Some(s) => repeat_pattern(&a, s)?,
                None => a,
            };
            lhaf_brute(&m)?
        }
        Engine::Banded => {
            let m = match &reps {
                Some(s) => repeat_pattern(&a, s)?,
                None => a,
            };
            let w = declared.unwrap_or_else(|| bandwidth(&m, BAND_TOL));
            lhaf_banded(&m, w)?
        }
        Engine::BandedRep => {
            let s = reps.unwrap_or_else(|| RepetitionVector::ones(a.dim()));
            let w = declared.unwrap_or_else(|| bandwidth(&a, BAND_TOL));
            lhaf_banded_rep(&a, w, &s)?
        }
    };
    println!("{} {}", fmt_sig(value.re), fmt_sig(value.im));
    Ok(ExitCode::SUCCESS)
}

fn cmd_prob(circuit: &Path, pattern: &str) -> Result<ExitCode> {
    let spec = circuit_file::parse_circuit(&read_input(circuit)?)?;
    let s = parse_counts(pattern, "pattern")?;
    if s.len() != spec.modes {
        return Err(Error::Precondition(format!(
            "pattern of length {} for {} modes",
            s.len(),
            spec.modes
        )));
    }
    let st = prepare_state(&spec)?;
    println!("{}", fmt_sig(prob(&st, &s)?));
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(
    circuit: &Path,
    threshold: u32,
    samples: usize,
    seed: u64,
    engine: &str,
    report: Option<&Path>,
) -> Result<ExitCode> {
    let started = Instant::now();
    let text = read_input(circuit)?;
    let spec = circuit_file::parse_circuit(&text)?;
    let cfg = SamplerConfig {
        c: threshold,
        seed,
        engine: engine.parse()?,
    };
    let t_sample = Instant::now();
    let outcomes = batch_sample(&spec, &cfg, samples)?;
    let sample_s = t_sample.elapsed().as_secs_f64();
    let mut lines = String::new();
    for o in &outcomes {
        lines.push_str(&o.pattern.to_line());
        lines.push('\n');
    }
    print!("{lines}");
    if let Some(path) = report {
        let mut frequencies: BTreeMap<String, u64> = BTreeMap::new();
        for o in &outcomes {
            *frequencies.entry(o.pattern.to_line()).or_default() += 1;
        }
        let max_calls = outcomes.iter().map(|o| o.hafnian_calls).max().unwrap_or(0);
        let total_calls: u64 = outcomes.iter().map(|o| o.hafnian_calls).sum();
        let mut timings_s = BTreeMap::new();
        timings_s.insert("sample".to_string(), sample_s);
        timings_s.insert("total".to_string(), started.elapsed().as_secs_f64());
        let mut inputs = BTreeMap::new();
        inputs.insert(
            circuit.display().to_string(),
            report::sha256_hex(text.as_bytes()),
        );
        let run = report::RunReport {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            inputs,
            timings_s,
            engine_calls: total_calls,
            output: serde_json::json!({
                "samples": samples,
                "max_calls_per_sample": max_calls,
                "call_budget_per_sample": spec.modes as u64 * threshold as u64,
                "frequencies": frequencies,
            }),
        };
        report::write_report(&run, path)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, seed: u64) -> Result<ExitCode> {
    let (lemmas, oracles) = match suite {
        "lemmas" => (true, false),
        "oracles" => (false, true),
        "all" => (true, true),
        other => {
            return Err(Error::Parse(format!(
                "unknown suite '{other}' (expected lemmas, oracles, or all)"
            )))
        }
    };
    let mut ok = true;
    if lemmas {
        let r = run_lemma_suite(seed)?;
        println!(
            "lemmas: circuits={} unitary_violations={} max_unitary_bw_over_depth={} \
             states={} block_violations={} max_block_bw_over_depth={} within_2d={} beyond_2d={}",
            r.circuits,
            r.unitary_violations,
            fmt_sig(r.max_unitary_bw_over_d),
            r.states_checked,
            r.block_violations,
            fmt_sig(r.max_block_bw_over_d),
            r.within_2d,
            r.beyond_2d
        );
        println!("lemmas: {}", if r.passed() { "PASS" } else { "FAIL" });
        ok &= r.passed();
    }
    if oracles {
        let r = run_oracle_suite(seed)?;
        println!(
            "oracles: matrices={} banded_evals={} max_rel_banded={} \
             rep_matrices={} rep_evals={} max_rel_rep={}",
            r.matrices,
            r.banded_evals,
            fmt_sig(r.max_rel_banded),
            r.rep_matrices,
            r.rep_evals,
            fmt_sig(r.max_rel_rep)
        );
        println!("oracles: {}", if r.passed() { "PASS" } else { "FAIL" });
        ok &= r.passed();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(kernel: &str, sweep: &str, out: &Path) -> Result<ExitCode> {
    let kernel: bench::Kernel = kernel.parse()?;
    let sweep = bench::parse_sweep(sweep)?;
    let rows = bench::run_bench(kernel, &sweep)?;
    let mut csv = String::from("value,median_time_s,engine_calls\n");
    for row in rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            row.value,
            fmt_sig(row.median_time_s),
            row.engine_calls
        ));
    }
    std::fs::write(out, csv)
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", out.display())))?;
    Ok(ExitCode::SUCCESS)
}
