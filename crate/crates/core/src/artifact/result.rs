use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::canonical::{read_document, to_canonical_string, write_document};
use crate::error::{Error, Result};
use crate::sampler::Counts;
use crate::witness::{MetricKind, MetricRecord};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Placeholder written over `timestamp_utc` when comparing artifacts.
pub const MASKED_TIMESTAMP: &str = "<masked>";

/// Modes a result artifact may record.
pub const ARTIFACT_MODES: [&str; 4] = ["coherence-x", "coherence-y", "rp-z", "ideal"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    pub timestamp_utc: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_spec_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
}

impl Provenance {
    /// Tool version and current UTC time; hashes left empty.
    pub fn now() -> Self {
        Provenance {
            tool_version: TOOL_VERSION.to_string(),
            timestamp_utc: timestamp_utc(),
            circuit_hash: None,
            noise_spec_hash: None,
            sampler: None,
        }
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the wall clock, as `YYYY-MM-DDTHH:MM:SSZ`.
pub fn timestamp_utc() -> String {
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    when.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn is_digest(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

/// One measured (or exactly evaluated) circuit configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultArtifact {
    pub schema: u32,
    pub mode: String,
    pub k: usize,
    pub mu: f64,
    pub shots: u64,
    pub seed: u64,
    /// Absent for exact (`ideal`) artifacts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    pub metrics: BTreeMap<MetricKind, MetricRecord>,
    pub provenance: Provenance,
}

impl ResultArtifact {
    /// Checks every artifact invariant, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::parse("schema", format!("unsupported version {}", self.schema)));
        }
        if !ARTIFACT_MODES.contains(&self.mode.as_str()) {
            return Err(Error::parse("mode", format!("unknown mode {:?}", self.mode)));
        }
        match &self.counts {
            Some(c) if c.total_shots() != self.shots => {
                return Err(Error::parse(
                    "counts",
                    format!("counts total {} does not match shots {}", c.total_shots(), self.shots),
                ))
            }
            None if self.shots != 0 => {
                return Err(Error::parse("counts", format!("missing for {} shots", self.shots)))
            }
            _ => {}
        }
        for (kind, record) in &self.metrics {
            if !record.value.is_finite() {
                return Err(Error::parse(format!("metrics.{kind}.value"), "not finite"));
            }
            match record.error {
                None => return Err(Error::parse(format!("metrics.{kind}.error"), "missing")),
                Some(e) if !(e >= 0.0) || !e.is_finite() => {
                    return Err(Error::parse(format!("metrics.{kind}.error"), format!("invalid value {e}")))
                }
                _ => {}
            }
        }
        match &self.provenance.circuit_hash {
            Some(h) if is_digest(h) => {}
            Some(h) => return Err(Error::parse("provenance.circuit_hash", format!("not a SHA256 digest: {h:?}"))),
            None => return Err(Error::parse("provenance.circuit_hash", "missing")),
        }
        if let Some(h) = &self.provenance.noise_spec_hash {
            if !is_digest(h) {
                return Err(Error::parse("provenance.noise_spec_hash", format!("not a SHA256 digest: {h:?}")));
            }
        }
        Ok(())
    }
}

/// Validates, then writes the canonical form.
pub fn write_result_artifact(artifact: &ResultArtifact, path: &Path) -> Result<()> {
    artifact.validate()?;
    write_document(artifact, path)
}

/// Reads and re-validates an artifact. Unknown keys are rejected.
pub fn read_result_artifact(path: &Path) -> Result<ResultArtifact> {
    let artifact: ResultArtifact = read_document(path, "result artifact")?;
    artifact.validate()?;
    Ok(artifact)
}

/// Canonical text of any JSON document with `provenance.timestamp_utc` (and
/// any nested provenance timestamps) replaced by a fixed placeholder.
pub fn mask_timestamps(text: &str) -> Result<String> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Error::parse("document", e.to_string()))?;
    mask(&mut value);
    to_canonical_string(&value)
}

fn mask(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                if key == "timestamp_utc" || key == "created_utc" {
                    *v = Value::String(MASKED_TIMESTAMP.into());
                } else {
                    mask(v);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(mask),
        _ => {}
    }
}
