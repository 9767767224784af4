//! Binary-level checks of the gbts CLI: output formats, file parsing,
//! and the documented exit codes (0 ok, 1 verify failure, 2 parse,
//! 3 precondition, 4 unphysical).

use gbts_core::gaussian::{prepare_state, prob, CircuitSpec, Gate};
use num_complex::Complex64 as C64;
use sha2::{Digest, Sha256};
use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const PATH5: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/path5.txt");
const EMPTY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/empty.txt");
const BS2: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/bs2.toml");
const VACUUM3: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/vacuum3.toml");

fn gbts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbts"))
        .args(args)
        .output()
        .expect("spawn gbts")
}

fn stdout_of(args: &[&str]) -> String {
    let out = gbts(args);
    assert!(
        out.status.success(),
        "gbts {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

fn exit_code(args: &[&str]) -> i32 {
    gbts(args).status.code().expect("exit code")
}

#[test]
fn lhaf_prints_exact_integers() {
    assert_eq!(stdout_of(&["lhaf", PATH5]), "292 0\n");
    assert_eq!(stdout_of(&["lhaf", EMPTY]), "1 0\n");
    for engine in ["brute", "banded", "banded-rep"] {
        assert_eq!(stdout_of(&["lhaf", PATH5, "--engine", engine]), "292 0\n");
    }
    assert_eq!(
        stdout_of(&["lhaf", PATH5, "--engine", "banded", "--bandwidth", "3"]),
        "292 0\n"
    );
}

#[test]
fn lhaf_complex_entries_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edge.txt");
    fs::write(&path, "2\n0,0 1,2\n1,2 0,0\n").unwrap();
    assert_eq!(stdout_of(&["lhaf", path.to_str().unwrap()]), "1 2\n");
}

#[test]
fn lhaf_repetition_engines_agree() {
    let reps = "2,1,0,3,1";
    let rep_out = stdout_of(&["lhaf", PATH5, "--engine", "banded-rep", "--reps", reps]);
    let brute_out = stdout_of(&["lhaf", PATH5, "--engine", "brute", "--reps", reps]);
    let auto_out = stdout_of(&["lhaf", PATH5, "--reps", reps]);
    assert_eq!(rep_out, brute_out);
    assert_eq!(rep_out, auto_out);
}

#[test]
fn lhaf_error_exit_codes() {
    // parse problems: exit 2
    assert_eq!(exit_code(&["lhaf", "/nonexistent/matrix.txt"]), 2);
    assert_eq!(exit_code(&["lhaf", PATH5, "--engine", "fast"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n1 x\n3 4\n").unwrap();
    assert_eq!(exit_code(&["lhaf", bad.to_str().unwrap()]), 2);
    // precondition problems: exit 3
    assert_eq!(
        exit_code(&["lhaf", PATH5, "--engine", "banded", "--bandwidth", "0"]),
        3
    );
    assert_eq!(exit_code(&["lhaf", PATH5, "--bandwidth", "2"]), 3);
    assert_eq!(exit_code(&["lhaf", PATH5, "--reps", "1,2"]), 3);
}

/// The committed two-mode fixture as a library value, for cross-checking
/// CLI output against an in-process computation.
fn bs2_circuit() -> CircuitSpec {
    CircuitSpec {
        modes: 2,
        r: vec![0.6, 0.6],
        phi_sq: vec![0.0, 0.0],
        beta: vec![C64::new(0.0, 0.0); 2],
        eta: 1.0,
        layers: vec![vec![Gate::Beamsplitter {
            mode: 1,
            theta: FRAC_PI_4,
            phi: 0.0,
        }]],
    }
}

#[test]
fn prob_matches_library_and_closed_form() {
    let vac = stdout_of(&["prob", BS2, "--pattern", "0,0"]);
    let got: f64 = vac.trim().parse().unwrap();
    let closed = 1.0 / 0.6f64.cosh().powi(2);
    assert!((got - closed).abs() <= 1e-12, "{got} vs {closed}");
    // 15 significant digits in positional notation
    assert_eq!(vac.trim().len(), "0.".len() + 15);

    let st = prepare_state(&bs2_circuit()).unwrap();
    for pattern in [[1u32, 1], [2, 0], [3, 1]] {
        let arg = format!("{},{}", pattern[0], pattern[1]);
        let got: f64 = stdout_of(&["prob", BS2, "--pattern", &arg])
            .trim()
            .parse()
            .unwrap();
        let expect = prob(&st, &pattern).unwrap();
        assert!((got - expect).abs() <= 1e-12, "{arg}: {got} vs {expect}");
    }
}

#[test]
fn prob_error_exit_codes() {
    assert_eq!(exit_code(&["prob", BS2, "--pattern", "0,0,0"]), 3);
    assert_eq!(exit_code(&["prob", BS2, "--pattern", "0,x"]), 2);
    assert_eq!(
        exit_code(&["prob", "/nonexistent.toml", "--pattern", "0"]),
        2
    );
}

fn write_toml(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn circuit_file_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &str)] = &[
        (
            "unknown_field.toml",
            "format_version = 1\nmodes = 1\neta = 1.0\nbogus = 3\n\n[[squeezing]]\nr = 0.5\n",
        ),
        (
            "bad_version.toml",
            "format_version = 2\nmodes = 1\neta = 1.0\n\n[[squeezing]]\nr = 0.5\n",
        ),
        (
            "unknown_gate.toml",
            "format_version = 1\nmodes = 2\neta = 1.0\n\n[[squeezing]]\nr = 0.5\n\n\
             [[squeezing]]\nr = 0.5\n\n[[layers]]\n[[layers.gates]]\nkind = \"swap\"\nmode = 1\n",
        ),
        (
            "missing_theta.toml",
            "format_version = 1\nmodes = 2\neta = 1.0\n\n[[squeezing]]\nr = 0.5\n\n\
             [[squeezing]]\nr = 0.5\n\n[[layers]]\n[[layers.gates]]\n\
             kind = \"beamsplitter\"\nmode = 1\n",
        ),
        (
            "squeezing_count.toml",
            "format_version = 1\nmodes = 2\neta = 1.0\n\n[[squeezing]]\nr = 0.5\n",
        ),
    ];
    for (name, body) in cases {
        let path = write_toml(dir.path(), name, body);
        assert_eq!(exit_code(&["prob", &path, "--pattern", "0"]), 2, "{name}");
    }
    // parses cleanly but overflows to an unphysical state: exit 4
    let huge = write_toml(
        dir.path(),
        "huge.toml",
        "format_version = 1\nmodes = 1\neta = 1.0\n\n[[squeezing]]\nr = 400.0\n",
    );
    assert_eq!(exit_code(&["prob", &huge, "--pattern", "0"]), 4);
}

#[test]
fn sample_output_shape() {
    let out = stdout_of(&[
        "sample",
        VACUUM3,
        "--threshold",
        "2",
        "--samples",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(out, "0 0 0\n".repeat(5));

    let out = stdout_of(&[
        "sample",
        BS2,
        "--threshold",
        "1",
        "--samples",
        "50",
        "--seed",
        "9",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 50);
    let mut overflows = 0;
    for line in &lines {
        if *line == "#" {
            overflows += 1;
        } else {
            let counts: Vec<u32> = line
                .split(' ')
                .map(|t| t.parse().expect("count token"))
                .collect();
            assert_eq!(counts.len(), 2);
            assert!(counts.iter().all(|&c| c <= 1));
        }
    }
    // r=0.6 into a 50:50 splitter overflows a 1-photon detector often
    assert!(overflows > 0);
}

#[test]
fn sample_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("run.json");
    let out = stdout_of(&[
        "sample",
        BS2,
        "--threshold",
        "3",
        "--samples",
        "20",
        "--seed",
        "5",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.lines().count(), 20);

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let command = report["command"].as_str().unwrap();
    assert!(command.contains("sample") && command.contains("--seed 5"));

    let digest = report["inputs"][BS2].as_str().unwrap();
    let expect = format!("{:x}", Sha256::digest(fs::read(BS2).unwrap()));
    assert_eq!(digest, expect);

    assert!(report["timings_s"]["sample"].as_f64().unwrap() >= 0.0);
    assert!(report["timings_s"]["total"].as_f64().unwrap() >= 0.0);
    assert!(report["engine_calls"].as_u64().unwrap() > 0);

    let output = &report["output"];
    assert_eq!(output["samples"].as_u64().unwrap(), 20);
    assert_eq!(output["call_budget_per_sample"].as_u64().unwrap(), 2 * 3);
    let max_calls = output["max_calls_per_sample"].as_u64().unwrap();
    assert!(max_calls > 0 && max_calls <= 6);
    let freq_total: u64 = output["frequencies"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(freq_total, 20);
}

#[test]
fn verify_suite_output_and_exit() {
    let out = stdout_of(&["verify", "--suite", "oracles", "--seed", "7"]);
    assert!(out.contains("oracles: PASS"), "{out}");
    assert!(out.contains("max_rel_banded="), "{out}");
    assert_eq!(exit_code(&["verify", "--suite", "bogus"]), 2);
}

#[test]
fn bench_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = gbts(&[
        "bench",
        "--kernel",
        "banded",
        "--sweep",
        "n=64:128:64;w=2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "value,median_time_s,engine_calls");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("64,"));
    assert!(lines[2].starts_with("128,"));
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        assert!(fields[1].parse::<f64>().unwrap() > 0.0);
        assert!(fields[2].parse::<u64>().unwrap() >= 1);
    }
}

#[test]
fn bench_sweep_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let csv = csv.to_str().unwrap();
    for sweep in [
        "n=64:128:64;w=2:3:1", // two ranges
        "n=64:128:64",         // missing fixed parameter
        "n=64;w=2",            // no range at all
        "n=64:128:64;w=2;x=1", // unknown parameter
    ] {
        assert_eq!(
            exit_code(&["bench", "--kernel", "banded", "--sweep", sweep, "--out", csv]),
            2,
            "{sweep}"
        );
    }
    assert_eq!(
        exit_code(&[
            "bench",
            "--kernel",
            "warp",
            "--sweep",
            "n=4:8:4;w=2",
            "--out",
            csv
        ]),
        2
    );
}

#[test]
fn sampler_bench_kernel_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = gbts(&[
        "bench",
        "--kernel",
        "sampler",
        "--sweep",
        "m=2:4:2;d=1;c=2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
}
