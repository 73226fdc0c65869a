use serde::{Deserialize, Serialize};

use super::ReadoutError;
use crate::error::{Error, Result};

/// Per-qubit calibration record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitCalibration {
    pub t1_us: f64,
    pub t2_us: f64,
    pub readout_e01: f64,
    pub readout_e10: f64,
}

/// Average gate error rates by gate size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateErrors {
    pub err_1q: f64,
    pub err_2q: f64,
}

/// Device calibration file contents.
///
/// ```json
/// {"qubits": [{"t1_us": 120.0, "t2_us": 80.0, "readout_e01": 0.01, "readout_e10": 0.02}],
///  "gates": {"err_1q": 0.0003, "err_2q": 0.008}}
/// ```
///
/// Unknown keys are rejected. An optional `"schema": 1` is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSnapshot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub qubits: Vec<QubitCalibration>,
    pub gates: GateErrors,
}

impl CalibrationSnapshot {
    pub fn from_json(text: &str) -> Result<Self> {
        let snap: CalibrationSnapshot =
            serde_json::from_str(text).map_err(|e| Error::parse("calibration snapshot", e.to_string()))?;
        snap.validate()?;
        Ok(snap)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.schema {
            if v != 1 {
                return Err(Error::parse("schema", format!("unsupported schema version {v}")));
            }
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if !(q.t1_us > 0.0) {
                return Err(Error::parse(format!("qubits[{i}].t1_us"), "must be positive"));
            }
            if !(q.t2_us > 0.0) {
                return Err(Error::parse(format!("qubits[{i}].t2_us"), "must be positive"));
            }
            check_rate(&format!("qubits[{i}].readout_e01"), q.readout_e01)?;
            check_rate(&format!("qubits[{i}].readout_e10"), q.readout_e10)?;
        }
        check_rate("gates.err_1q", self.gates.err_1q)?;
        check_rate("gates.err_2q", self.gates.err_2q)
    }
}

fn check_rate(field: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::parse(field, format!("{value} outside [0, 1]")));
    }
    Ok(())
}

/// Depolarizing-plus-readout noise proxy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Depolarizing probability after each one-qubit gate.
    pub p1: f64,
    /// Two-qubit depolarizing probability after each two-qubit gate.
    pub p2: f64,
    /// Indexed by qubit.
    pub readout: Vec<ReadoutError>,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        check_rate("p1", self.p1)?;
        check_rate("p2", self.p2)?;
        for (i, r) in self.readout.iter().enumerate() {
            check_rate(&format!("readout[{i}].e01"), r.e01)?;
            check_rate(&format!("readout[{i}].e10"), r.e10)?;
        }
        Ok(())
    }
}

/// Direct mapping: gate error rates become depolarizing probabilities and
/// readout errors are copied per qubit. T1/T2 are not simulated.
pub fn noise_from_snapshot(snap: &CalibrationSnapshot) -> Result<NoiseSpec> {
    snap.validate()?;
    Ok(NoiseSpec {
        p1: snap.gates.err_1q,
        p2: snap.gates.err_2q,
        readout: snap
            .qubits
            .iter()
            .map(|q| ReadoutError {
                e01: q.readout_e01,
                e10: q.readout_e10,
            })
            .collect(),
    })
}
