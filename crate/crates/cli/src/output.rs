//! Report envelopes, digests and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;
use crate::run::{RunOutput, SCHEMA_VERSION};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The configuration as archived in reports: everything except where output goes.
pub fn archived_config(cfg: &RunConfig) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(cfg).map_err(|e| CliError::Serialize(e.to_string()))?;
    if let Some(map) = v.as_object_mut() {
        map.remove("output");
    }
    Ok(v)
}

pub fn config_digest(cfg: &RunConfig) -> Result<String, CliError> {
    let v = archived_config(cfg)?;
    Ok(sha256_hex(v.to_string().as_bytes()))
}

/// Full JSON report. `report_digest` hashes everything except `timestamp`.
pub fn envelope(command: Command, cfg: &RunConfig, out: &RunOutput, timestamp: u64) -> Result<Value, CliError> {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command.as_str(),
        "seed": cfg.seed(),
        "config_digest": config_digest(cfg)?,
        "config": archived_config(cfg)?,
        "passed": out.passed,
        "result": out.result,
    });
    let digest = sha256_hex(v.to_string().as_bytes());
    let map = v.as_object_mut().expect("object literal");
    map.insert("report_digest".into(), Value::String(digest));
    map.insert("timestamp".into(), Value::from(timestamp));
    Ok(v)
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

/// Writes `<command>.json` and/or `<command>.csv` under `dir`.
pub fn write_reports(
    dir: &Path,
    format: Format,
    command: Command,
    report: &Value,
    csv: &str,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut written = Vec::new();
    if matches!(format, Format::Json | Format::Both) {
        let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Serialize(e.to_string()))?;
        text.push('\n');
        written.push(write_atomic(dir, &format!("{}.json", command.as_str()), text.as_bytes())?);
    }
    if matches!(format, Format::Csv | Format::Both) {
        written.push(write_atomic(dir, &format!("{}.csv", command.as_str()), csv.as_bytes())?);
    }
    Ok(written)
}
