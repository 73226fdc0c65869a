//! Channel-strength sweeps, uncertainty bands, detectability thresholds and
//! the closed-form dephasing estimate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{build_for_mode, BranchMask, MeasurementMode};
use crate::error::{Error, Result};
use crate::noise::{insert_channel, measured_probabilities, phase_flip, InsertionPoint, KrausChannel, NoiseSpec};
use crate::witness::{exact_parity, exact_visibility, MetricKind, MetricRecord, MetricValues};

pub const DEFAULT_K_SIGMA: f64 = 2.0;

/// Parameterized channel families that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelFamily {
    PhaseFlip,
}

impl ChannelFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelFamily::PhaseFlip => "phase-flip",
        }
    }

    pub fn channel(self, lambda: f64) -> Result<KrausChannel> {
        match self {
            ChannelFamily::PhaseFlip => phase_flip(lambda),
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").to_ascii_lowercase().as_str() {
            "phase-flip" | "dephasing" => Ok(ChannelFamily::PhaseFlip),
            _ => Err(Error::Validation(format!("unknown channel family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub lambda: f64,
    pub predicted: MetricValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepResult {
    pub channel_family_id: ChannelFamily,
    pub insertion: InsertionPoint,
    pub baseline: MetricValues,
    pub points: Vec<SweepPoint>,
    pub k_sigma: f64,
}

impl SweepResult {
    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }
}

/// Exact metrics of the canonical circuit, optionally with one channel inserted.
pub fn exact_metrics(
    k: usize,
    mu: f64,
    channel: Option<(&KrausChannel, InsertionPoint)>,
    noise: Option<&NoiseSpec>,
) -> Result<MetricValues> {
    let mask = BranchMask::all_ones(k);
    let evaluate = |mode: MeasurementMode| -> Result<Vec<f64>> {
        let (mut circuit, _) = build_for_mode(k, mu, &mask, mode)?;
        if let Some((ch, at)) = channel {
            circuit = insert_channel(&circuit, ch, at)?;
        }
        measured_probabilities(&circuit, noise)
    };
    let w_x = exact_parity(&evaluate(MeasurementMode::CoherenceX)?);
    let w_y = exact_parity(&evaluate(MeasurementMode::CoherenceY)?);
    let v = exact_visibility(&evaluate(MeasurementMode::RpZ)?)?;
    Ok(MetricValues::new(v, w_x, w_y))
}

/// Predicted metrics for each grid strength, plus the λ = 0 baseline under
/// the same noise setting.
pub fn deviation_curves(
    k: usize,
    mu: f64,
    family: ChannelFamily,
    at: InsertionPoint,
    lambdas: &[f64],
    noise: Option<&NoiseSpec>,
) -> Result<SweepResult> {
    if lambdas.is_empty() {
        return Err(Error::Validation("lambda grid is empty".into()));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::Validation(format!("lambda {bad} outside [0, 1]")));
    }
    check_increasing(lambdas)?;

    let baseline = exact_metrics(k, mu, None, noise)?;
    let points = lambdas
        .iter()
        .map(|&lambda| {
            let ch = family.channel(lambda)?;
            Ok(SweepPoint {
                lambda,
                predicted: exact_metrics(k, mu, Some((&ch, at)), noise)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        channel_family_id: family,
        insertion: at,
        baseline,
        points,
        k_sigma: DEFAULT_K_SIGMA,
    })
}

fn check_increasing(lambdas: &[f64]) -> Result<()> {
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Validation("lambda grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Parses `START:STOP:STEP` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::parse("lambdas", format!("{s:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(Error::parse("lambdas", "expected START:STOP:STEP"));
    };
    if !(step > 0.0) || stop < start {
        return Err(Error::parse("lambdas", "need STEP > 0 and STOP >= START"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Per-metric combined one-sided half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintyBand {
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W_X")]
    pub w_x: f64,
    #[serde(rename = "W_Y")]
    pub w_y: f64,
    #[serde(rename = "C_mag")]
    pub c_mag: f64,
}

impl UncertaintyBand {
    pub fn uniform(width: f64) -> Self {
        UncertaintyBand {
            v: width,
            w_x: width,
            w_y: width,
            c_mag: width,
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

    pub fn set(&mut self, kind: MetricKind, width: f64) {
        match kind {
            MetricKind::V => self.v = width,
            MetricKind::WX => self.w_x = width,
            MetricKind::WY => self.w_y = width,
            MetricKind::CMag => self.c_mag = width,
        }
    }
}

/// Quadrature sum `√(σ_shot² + δ_device²)`.
pub fn combined_band(shot_sigma: f64, device_delta: f64) -> Result<f64> {
    if !(shot_sigma >= 0.0) || !(device_delta >= 0.0) {
        return Err(Error::Validation(format!(
            "band components must be nonnegative, got ({shot_sigma}, {device_delta})"
        )));
    }
    Ok(shot_sigma.hypot(device_delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Threshold {
    /// `None` stands for +∞: nothing on the grid is detectable.
    pub lambda_max: Option<f64>,
    pub deciding_metric: Option<MetricKind>,
}

/// Smallest grid λ whose predicted deviation from baseline exceeds
/// `k_sigma × band` for some metric.
///
/// When several metrics cross at the same λ the first in `V, W_X, W_Y, C_mag`
/// order is reported.
pub fn detectability_threshold(sweep: &SweepResult, bands: &UncertaintyBand) -> Result<Threshold> {
    threshold_over(sweep, bands, &MetricKind::ALL)
}

fn threshold_over(sweep: &SweepResult, bands: &UncertaintyBand, metrics: &[MetricKind]) -> Result<Threshold> {
    if sweep.points.len() < 2 {
        return Err(Error::Validation("sweep needs at least two points".into()));
    }
    check_increasing(&sweep.lambdas())?;
    if !sweep.points.iter().any(|p| p.lambda == 0.0) {
        return Err(Error::Validation("sweep must include lambda = 0".into()));
    }
    for p in &sweep.points {
        let hit = metrics.iter().copied().find(|&m| {
            (p.predicted.get(m) - sweep.baseline.get(m)).abs() > sweep.k_sigma * bands.get(m)
        });
        if let Some(metric) = hit {
            return Ok(Threshold {
                lambda_max: Some(p.lambda),
                deciding_metric: Some(metric),
            });
        }
    }
    Ok(Threshold {
        lambda_max: None,
        deciding_metric: None,
    })
}

/// Inverts `W(λ) = (1 − 2λ) W(0)`: `(1 − w_hw / w_ideal) / 2`.
pub fn lambda_est(w_hw: f64, w_ideal: f64) -> Result<f64> {
    if w_ideal == 0.0 {
        return Err(Error::Division("ideal witness is zero".into()));
    }
    Ok((1.0 - w_hw / w_ideal) / 2.0)
}

/// `(1 − 2λ) w0`.
pub fn first_order_prediction(w0: f64, lambda: f64) -> f64 {
    (1.0 - 2.0 * lambda) * w0
}

/// Output of the constraint step for one sweep and one set of observed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintReport {
    pub k_sigma: f64,
    pub shot_sigma: UncertaintyBand,
    pub device_delta: UncertaintyBand,
    pub bands: UncertaintyBand,
    pub threshold: Threshold,
    /// Attenuation-law estimate per witness; `V` is not attenuated by the law.
    pub lambda_est: BTreeMap<MetricKind, Option<f64>>,
    pub warnings: Vec<String>,
}

/// Forms bands from observed errors and the observed-vs-noisy-sim discrepancy,
/// then reports the threshold and closed-form strength estimates.
pub fn constrain(
    sweep: &SweepResult,
    observed: &BTreeMap<MetricKind, MetricRecord>,
    noisy_sim: Option<&BTreeMap<MetricKind, MetricRecord>>,
    k_sigma: f64,
) -> Result<ConstraintReport> {
    if !(k_sigma >= 0.0) {
        return Err(Error::Validation(format!("k_sigma = {k_sigma} must be nonnegative")));
    }
    let mut warnings = Vec::new();
    if noisy_sim.is_none() {
        warnings.push("no noisy-simulation reference; device discrepancy set to 0".to_string());
    }
    let mut shot_sigma = UncertaintyBand::uniform(0.0);
    let mut device_delta = UncertaintyBand::uniform(0.0);
    let mut bands = UncertaintyBand::uniform(0.0);
    let mut estimates = BTreeMap::new();

    for m in MetricKind::ALL {
        let Some(obs) = observed.get(&m) else {
            warnings.push(format!("{m} missing from observed values; excluded from the threshold"));
            estimates.insert(m, None);
            continue;
        };
        let sigma = obs.error.ok_or_else(|| Error::Validation(format!("{m} has no error field")))?;
        let delta = match noisy_sim.map(|sim| sim.get(&m)) {
            Some(Some(sim)) => (obs.value - sim.value).abs(),
            Some(None) => {
                warnings.push(format!("{m} missing from noisy-simulation reference; discrepancy set to 0"));
                0.0
            }
            None => 0.0,
        };
        shot_sigma.set(m, sigma);
        device_delta.set(m, delta);
        bands.set(m, combined_band(sigma, delta)?);

        let estimate = match m {
            MetricKind::V => None,
            _ => lambda_est(obs.value, sweep.baseline.get(m)).ok(),
        };
        estimates.insert(m, estimate);
    }

    let mut scaled = sweep.clone();
    scaled.k_sigma = k_sigma;
    let present: Vec<MetricKind> = MetricKind::ALL
        .into_iter()
        .filter(|m| observed.contains_key(m))
        .collect();
    let threshold = threshold_over(&scaled, &bands, &present)?;
    Ok(ConstraintReport {
        k_sigma,
        shot_sigma,
        device_delta,
        bands,
        threshold,
        lambda_est: estimates,
        warnings,
    })
}
