use serde::{Deserialize, Serialize};

use crate::config::TOLERANCES;
use crate::error::{Error, Result};

/// Misread probabilities for one qubit: `e01` = P(read 1 | prepared 0),
/// `e10` = P(read 0 | prepared 1).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutError {
    pub e01: f64,
    pub e10: f64,
}

impl ReadoutError {
    pub fn symmetric(e: f64) -> Self {
        ReadoutError { e01: e, e10: e }
    }
}

/// Pushes each measured bit through its confusion matrix
/// `[[1−e01, e10], [e01, 1−e10]]`.
///
/// `probs` is indexed over the measured bits (`measured[0]` most significant);
/// `readout` is indexed by qubit label.
pub fn apply_readout_confusion(probs: &[f64], readout: &[ReadoutError], measured: &[usize]) -> Result<Vec<f64>> {
    let m = measured.len();
    if probs.len() != 1usize << m {
        return Err(Error::Shape(format!(
            "{} probabilities for {m} measured bits",
            probs.len()
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TOLERANCES.renormalize {
        return Err(Error::Validation(format!("probabilities sum to {total}")));
    }
    let mut out = probs.to_vec();
    for (j, &q) in measured.iter().enumerate() {
        let e = readout.get(q).ok_or_else(|| {
            Error::Validation(format!("no readout error entry for qubit {q}"))
        })?;
        if !(0.0..=1.0).contains(&e.e01) || !(0.0..=1.0).contains(&e.e10) {
            return Err(Error::Validation(format!("readout error for qubit {q} outside [0, 1]")));
        }
        let bit = 1usize << (m - 1 - j);
        for i in 0..out.len() {
            if i & bit != 0 {
                continue;
            }
            let (p0, p1) = (out[i], out[i | bit]);
            out[i] = (1.0 - e.e01) * p0 + e.e10 * p1;
            out[i | bit] = e.e01 * p0 + (1.0 - e.e10) * p1;
        }
    }
    Ok(out)
}
