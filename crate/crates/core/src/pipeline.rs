//! End-to-end workflows behind the command-line front end: sampled runs,
//! ideal tables, sweeps, constraints, merged summaries and scaling tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::artifact::{
    read_result_artifact, sha256_hex, to_canonical_string, ConstraintArtifact, MetricsSummary, Provenance,
    ResultArtifact, ScalingArtifact, ScalingRow, SourceRef, SweepArtifact, SCHEMA_VERSION,
};
use crate::circuit::{
    build_branch_transfer, build_for_mode, circuit_stats, ideal_witness_table, BranchMask, MeasurementMode, Register,
};
use crate::constraint::{constrain, deviation_curves, ChannelFamily, SweepResult};
use crate::error::{Error, Result};
use crate::noise::{
    insert_channel, measured_probabilities, noise_from_snapshot, phase_flip, CalibrationSnapshot, InsertionPoint,
    Location, NoiseSpec,
};
use crate::sampler::SeededSampler;
use crate::witness::{coherence_magnitude, metrics_from_run, MetricKind, MetricRecord, WitnessResult};

/// A phase-flip channel inserted on a named register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dephasing {
    pub lambda: f64,
    pub location: Location,
    pub register: Register,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: MeasurementMode,
    pub k: usize,
    pub mu: f64,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    pub dephasing: Option<Dephasing>,
}

impl RunConfig {
    /// Noiseless, undephased run with the default seed.
    pub fn new(mode: MeasurementMode, k: usize, mu: f64, shots: u64) -> Self {
        RunConfig {
            mode,
            k,
            mu,
            shots,
            seed: crate::sampler::DEFAULT_SEED,
            noise: None,
            dephasing: None,
        }
    }
}

pub fn noise_hash(noise: &NoiseSpec) -> Result<String> {
    Ok(sha256_hex(to_canonical_string(noise)?.as_bytes()))
}

/// Loads a calibration snapshot file and maps it onto the noise proxy.
pub fn load_noise(path: &Path) -> Result<NoiseSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    noise_from_snapshot(&CalibrationSnapshot::from_json(&text)?)
}

/// Builds, simulates and samples one circuit, returning the result artifact.
pub fn run_experiment(cfg: &RunConfig) -> Result<ResultArtifact> {
    let (mut circuit, layout) = build_for_mode(cfg.k, cfg.mu, &BranchMask::all_ones(cfg.k), cfg.mode)?;
    if let Some(d) = cfg.dephasing {
        let at = InsertionPoint::new(d.location, layout.index_of(d.register)?);
        circuit = insert_channel(&circuit, &phase_flip(d.lambda)?, at)?;
    }
    let probs = measured_probabilities(&circuit, cfg.noise.as_ref())?;
    let sampler = SeededSampler::new(cfg.seed);
    let counts = sampler.sample_counts(&probs, circuit.measured_qubits(), cfg.shots)?;
    let metric = metrics_from_run(cfg.mode, &counts)?;

    let mut provenance = Provenance::now();
    provenance.circuit_hash = Some(sha256_hex(circuit.canonical_text().as_bytes()));
    provenance.noise_spec_hash = cfg.noise.as_ref().map(noise_hash).transpose()?;
    provenance.sampler = Some(SeededSampler::ALGORITHM_ID.to_string());

    Ok(ResultArtifact {
        schema: SCHEMA_VERSION,
        mode: cfg.mode.as_str().to_string(),
        k: cfg.k,
        mu: cfg.mu,
        shots: cfg.shots,
        seed: cfg.seed,
        counts: Some(counts),
        metrics: BTreeMap::from([(metric.kind, MetricRecord::from(metric))]),
        provenance,
    })
}

/// Exact ideal metrics as an artifact (zero errors, no shots).
pub fn ideal_artifact(k: usize, mu: f64) -> Result<ResultArtifact> {
    let values = ideal_witness_table(k, mu)?;
    let (circuit, _) = build_branch_transfer(k, mu, &BranchMask::all_ones(k))?;
    let mut provenance = Provenance::now();
    provenance.circuit_hash = Some(sha256_hex(circuit.canonical_text().as_bytes()));
    Ok(ResultArtifact {
        schema: SCHEMA_VERSION,
        mode: "ideal".into(),
        k,
        mu,
        shots: 0,
        seed: 0,
        counts: None,
        metrics: MetricKind::ALL
            .into_iter()
            .map(|m| (m, MetricRecord::exact(values.get(m))))
            .collect(),
        provenance,
    })
}

pub fn sweep_artifact(
    k: usize,
    mu: f64,
    family: ChannelFamily,
    location: Location,
    register: Register,
    lambdas: &[f64],
    noise: Option<&NoiseSpec>,
) -> Result<SweepArtifact> {
    let layout = crate::circuit::RegisterLayout::canonical(k);
    let at = InsertionPoint::new(location, layout.index_of(register)?);
    let sweep = deviation_curves(k, mu, family, at, lambdas, noise)?;
    let mut provenance = Provenance::now();
    provenance.noise_spec_hash = noise.map(noise_hash).transpose()?;
    Ok(SweepArtifact {
        schema: SCHEMA_VERSION,
        k,
        mu,
        sweep,
        provenance,
    })
}

pub fn constrain_artifact(
    sweep: &SweepResult,
    observed: BTreeMap<MetricKind, MetricRecord>,
    noisy_sim: Option<BTreeMap<MetricKind, MetricRecord>>,
    k_sigma: f64,
) -> Result<ConstraintArtifact> {
    let report = constrain(sweep, &observed, noisy_sim.as_ref(), k_sigma)?;
    let mut sweep = sweep.clone();
    sweep.k_sigma = k_sigma;
    Ok(ConstraintArtifact {
        schema: SCHEMA_VERSION,
        sweep,
        observed,
        noisy_sim,
        report,
        provenance: Provenance::now(),
    })
}

/// Reads observed metric values from either a metrics summary or a result artifact.
pub fn load_metrics(path: &Path) -> Result<BTreeMap<MetricKind, MetricRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let as_summary = serde_json::from_str::<MetricsSummary>(&text);
    let metrics = match as_summary {
        Ok(summary) => summary.metrics,
        Err(summary_err) => match read_result_artifact(path) {
            Ok(artifact) => artifact.metrics,
            Err(artifact_err) => {
                return Err(Error::parse(
                    path.display().to_string(),
                    format!("neither a metrics summary ({summary_err}) nor a result artifact ({artifact_err})"),
                ))
            }
        },
    };
    for (kind, record) in &metrics {
        if record.error.is_none() {
            return Err(Error::parse(format!("metrics.{kind}.error"), "missing"));
        }
    }
    Ok(metrics)
}

/// Merges result artifacts into one summary, deriving `C_mag` when both
/// witnesses come from separate files.
pub fn analyze(inputs: &[PathBuf]) -> Result<MetricsSummary> {
    if inputs.is_empty() {
        return Err(Error::Validation("analyze needs at least one input".into()));
    }
    let mut metrics: BTreeMap<MetricKind, MetricRecord> = BTreeMap::new();
    let mut sources = Vec::new();
    let mut config: Option<(usize, f64)> = None;
    for path in inputs {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let artifact = read_result_artifact(path)?;
        match config {
            None => config = Some((artifact.k, artifact.mu)),
            Some((k, mu)) if k != artifact.k || mu != artifact.mu => {
                return Err(Error::Validation(format!(
                    "{} has (k, mu) = ({}, {}), expected ({k}, {mu})",
                    path.display(),
                    artifact.k,
                    artifact.mu
                )))
            }
            _ => {}
        }
        for (kind, record) in artifact.metrics {
            if metrics.insert(kind, record).is_some() {
                return Err(Error::Validation(format!(
                    "metric {kind} supplied more than once (again in {})",
                    path.display()
                )));
            }
        }
        sources.push(SourceRef {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_hex(&bytes),
            mode: artifact.mode,
        });
    }
    if !metrics.contains_key(&MetricKind::CMag) {
        if let (Some(wx), Some(wy)) = (metrics.get(&MetricKind::WX), metrics.get(&MetricKind::WY)) {
            let c = coherence_magnitude(&witness(MetricKind::WX, wx), &witness(MetricKind::WY, wy))?;
            metrics.insert(MetricKind::CMag, c.into());
        }
    }
    Ok(MetricsSummary {
        schema: SCHEMA_VERSION,
        metrics,
        sources,
        provenance: Some(Provenance::now()),
    })
}

fn witness(kind: MetricKind, r: &MetricRecord) -> WitnessResult {
    WitnessResult {
        kind,
        value: r.value,
        error: r.error.unwrap_or(0.0),
        shots_used: r.shots,
    }
}

/// Circuit statistics and ideal witnesses for `k = 1..=k_max`, full masks, `μ = 1`.
pub fn scaling_artifact(k_max: usize) -> Result<ScalingArtifact> {
    if k_max == 0 {
        return Err(Error::Validation("k_max must be at least 1".into()));
    }
    let rows = (1..=k_max)
        .map(|k| {
            let (circuit, layout) = build_branch_transfer(k, 1.0, &BranchMask::all_ones(k))?;
            Ok(ScalingRow {
                k,
                n_qubits: layout.n_qubits(),
                stats: circuit_stats(&circuit),
                ideal: ideal_witness_table(k, 1.0)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingArtifact {
        schema: SCHEMA_VERSION,
        k_max,
        rows,
        provenance: Provenance::now(),
    })
}
