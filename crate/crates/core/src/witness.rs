//! Visibility and Pauli-parity coherence witnesses, estimated from shot
//! counts or evaluated exactly on probability vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::MeasurementMode;
use crate::error::{Error, Result};
use crate::sampler::Counts;

/// Metric identifiers. Serialized names double as artifact keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    V,
    #[serde(rename = "W_X")]
    WX,
    #[serde(rename = "W_Y")]
    WY,
    #[serde(rename = "C_mag")]
    CMag,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [MetricKind::V, MetricKind::WX, MetricKind::WY, MetricKind::CMag];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::V => "V",
            MetricKind::WX => "W_X",
            MetricKind::WY => "W_Y",
            MetricKind::CMag => "C_mag",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse("metric", format!("unknown metric {s:?}")))
    }
}

/// Estimated metric with one standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResult {
    pub kind: MetricKind,
    pub value: f64,
    pub error: f64,
    pub shots_used: u64,
}

/// Serialized form of a metric: `{value, error, shots}`.
///
/// `error` is optional only so that a missing companion field can be caught
/// and reported; every stored metric must carry one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricRecord {
    pub value: f64,
    #[serde(default)]
    pub error: Option<f64>,
    pub shots: u64,
}

impl MetricRecord {
    /// Exact value with zero uncertainty and no shots.
    pub fn exact(value: f64) -> Self {
        MetricRecord {
            value,
            error: Some(0.0),
            shots: 0,
        }
    }
}

impl From<WitnessResult> for MetricRecord {
    fn from(r: WitnessResult) -> Self {
        MetricRecord {
            value: r.value,
            error: Some(r.error),
            shots: r.shots_used,
        }
    }
}

/// Exact values of all four metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W_X")]
    pub w_x: f64,
    #[serde(rename = "W_Y")]
    pub w_y: f64,
    #[serde(rename = "C_mag")]
    pub c_mag: f64,
}

impl MetricValues {
    /// Fills in `C_mag = √(W_X² + W_Y²)`.
    pub fn new(v: f64, w_x: f64, w_y: f64) -> Self {
        MetricValues {
            v,
            w_x,
            w_y,
            c_mag: w_x.hypot(w_y),
        }
    }

    pub fn get(&self, kind: MetricKind) -> f64 {
        match kind {
            MetricKind::V => self.v,
            MetricKind::WX => self.w_x,
            MetricKind::WY => self.w_y,
            MetricKind::CMag => self.c_mag,
        }
    }
}

/// Plug-in binomial standard error of a ±1-valued mean: `√((1 − W²)/N)`.
pub fn parity_error(value: f64, shots: u64) -> f64 {
    ((1.0 - value * value).max(0.0) / shots as f64).sqrt()
}

/// `(N_even − N_odd) / N` over all measured bits.
pub fn parity_witness(counts: &Counts) -> Result<WitnessResult> {
    let total = counts.total_shots();
    if total == 0 {
        return Err(Error::Validation("parity witness needs at least one shot".into()));
    }
    let (even, odd) = counts.table().iter().fold((0u64, 0u64), |(e, o), (key, &n)| {
        if key.bytes().filter(|&b| b == b'1').count() % 2 == 0 {
            (e + n, o)
        } else {
            (e, o + n)
        }
    });
    let value = (even as f64 - odd as f64) / total as f64;
    assert!(value.abs() <= 1.0, "parity estimate {value} escaped [-1, 1]");
    Ok(WitnessResult {
        kind: MetricKind::WX,
        value,
        error: parity_error(value, total),
        shots_used: total,
    })
}

/// `|P(R=0|P=1) − P(R=1|P=1)|` from counts over `(R, P)`, with the
/// conditional-binomial error `2√(p(1−p)/N₁)` on the `P = 1` subsample.
pub fn visibility(counts: &Counts) -> Result<WitnessResult> {
    if counts.bit_order().len() != 2 {
        return Err(Error::Validation(format!(
            "visibility needs counts over (R, P), got {} bits",
            counts.bit_order().len()
        )));
    }
    let n_r0 = counts.get("01");
    let n_r1 = counts.get("11");
    let conditioned = n_r0 + n_r1;
    if conditioned == 0 {
        return Err(Error::UndefinedConditional("no shots with P = 1".into()));
    }
    let p = n_r0 as f64 / conditioned as f64;
    Ok(WitnessResult {
        kind: MetricKind::V,
        value: (2.0 * p - 1.0).abs(),
        error: 2.0 * (p * (1.0 - p) / conditioned as f64).sqrt(),
        shots_used: conditioned,
    })
}

/// `C_mag = √(W_X² + W_Y²)` with first-order error propagation.
///
/// At the origin the propagation is singular and the errors add in quadrature
/// instead. `shots_used` is the smaller of the two inputs' shot counts.
pub fn coherence_magnitude(wx: &WitnessResult, wy: &WitnessResult) -> Result<WitnessResult> {
    if wx.kind != MetricKind::WX || wy.kind != MetricKind::WY {
        return Err(Error::Validation(format!(
            "coherence magnitude needs (W_X, W_Y), got ({}, {})",
            wx.kind, wy.kind
        )));
    }
    let value = wx.value.hypot(wy.value);
    let error = if value > 0.0 {
        (wx.value * wx.error).hypot(wy.value * wy.error) / value
    } else {
        wx.error.hypot(wy.error)
    };
    Ok(WitnessResult {
        kind: MetricKind::CMag,
        value,
        error,
        shots_used: wx.shots_used.min(wy.shots_used),
    })
}

/// Dispatches on the measurement mode and labels the result.
pub fn metrics_from_run(mode: MeasurementMode, counts: &Counts) -> Result<WitnessResult> {
    let bits = counts.bit_order().len();
    match mode {
        MeasurementMode::CoherenceX | MeasurementMode::CoherenceY => {
            if bits < 4 {
                return Err(Error::Validation(format!(
                    "{mode} needs at least 4 measured bits, got {bits}"
                )));
            }
            let mut result = parity_witness(counts)?;
            result.kind = if mode == MeasurementMode::CoherenceX {
                MetricKind::WX
            } else {
                MetricKind::WY
            };
            Ok(result)
        }
        MeasurementMode::RpZ => {
            if bits != 2 {
                return Err(Error::Validation(format!("rp-z needs 2 measured bits, got {bits}")));
            }
            visibility(counts)
        }
    }
}

/// Infinite-shot parity: `Σ_b p_b (−1)^{popcount(b)}`.
pub fn exact_parity(probs: &[f64]) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p })
        .sum()
}

/// Infinite-shot visibility from a distribution over `(R, P)` (index = 2R + P).
pub fn exact_visibility(probs: &[f64]) -> Result<f64> {
    if probs.len() != 4 {
        return Err(Error::Shape(format!(
            "visibility needs a 4-entry (R, P) distribution, got {}",
            probs.len()
        )));
    }
    let (r0, r1) = (probs[0b01], probs[0b11]);
    let conditioned = r0 + r1;
    if conditioned <= 0.0 {
        return Err(Error::UndefinedConditional("P(P = 1) is zero".into()));
    }
    Ok(((r0 - r1) / conditioned).abs())
}
