//! Machine-readable run reports.
//!
//! On request (`--report path`) the sample command writes a JSON document
//! describing the run: the exact command line, SHA-256 digests of the
//! input files, per-stage wall-clock timings, and the engine call counts
//! behind the cost invariant, together with a compact output payload.

use gbts_core::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub timings_s: BTreeMap<String, f64>,
    pub engine_calls: u64,
    pub output: serde_json::Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Precondition(format!("cannot encode report: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}
