use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::canonical::format_float;
use super::result::Provenance;
use crate::circuit::CircuitStats;
use crate::constraint::{ConstraintReport, SweepResult};
use crate::error::{Error, Result};
use crate::witness::{MetricKind, MetricRecord, MetricValues};

/// `out.json` → `out.csv`.
pub fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArtifact {
    pub schema: u32,
    pub k: usize,
    pub mu: f64,
    pub sweep: SweepResult,
    pub provenance: Provenance,
}

impl SweepArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,V,W_X,W_Y,C_mag\n");
        for p in &self.sweep.points {
            let m = &p.predicted;
            writeln!(
                out,
                "{},{},{},{},{}",
                format_float(p.lambda),
                format_float(m.v),
                format_float(m.w_x),
                format_float(m.w_y),
                format_float(m.c_mag)
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn write_csv(&self, json_path: &Path) -> Result<()> {
        write_text(&csv_sibling(json_path), &self.to_csv())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingRow {
    pub k: usize,
    pub n_qubits: usize,
    pub stats: CircuitStats,
    pub ideal: MetricValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingArtifact {
    pub schema: u32,
    pub k_max: usize,
    pub rows: Vec<ScalingRow>,
    pub provenance: Provenance,
}

impl ScalingArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n_qubits,depth,two_qubit_count,total_gate_count,V,W_X,W_Y,C_mag\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.k,
                r.n_qubits,
                r.stats.depth,
                r.stats.two_qubit_count,
                r.stats.total_gate_count,
                format_float(r.ideal.v),
                format_float(r.ideal.w_x),
                format_float(r.ideal.w_y),
                format_float(r.ideal.c_mag)
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn write_csv(&self, json_path: &Path) -> Result<()> {
        write_text(&csv_sibling(json_path), &self.to_csv())
    }
}

/// Input file that contributed to a merged summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceRef {
    pub file: String,
    pub sha256: String,
    pub mode: String,
}

/// Merged metrics from several result artifacts. Also the format for
/// hand-entered observed values fed to the constraint step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSummary {
    pub schema: u32,
    pub metrics: BTreeMap<MetricKind, MetricRecord>,
    #[serde(default)]
    pub sources: Vec<SourceRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintArtifact {
    pub schema: u32,
    pub sweep: SweepResult,
    pub observed: BTreeMap<MetricKind, MetricRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy_sim: Option<BTreeMap<MetricKind, MetricRecord>>,
    pub report: ConstraintReport,
    pub provenance: Provenance,
}
