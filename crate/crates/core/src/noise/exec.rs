use super::{apply_readout_confusion, depolarizing, KrausChannel, NoiseSpec};
use crate::circuit::{run_statevector, Circuit, OpKind};
use crate::config::MAX_DENSITY_QUBITS;
use crate::error::{Error, Result};
use crate::qsim::{marginal, DensityMatrix, QuantumState, StateVector};

/// Runs the circuit on `|0…0⟩⟨0…0|`, resolving channel markers and, when
/// `noise` is given, depolarizing after every gate. Readout confusion is
/// not applied here.
pub fn run_density(circuit: &Circuit, noise: Option<&NoiseSpec>) -> Result<DensityMatrix> {
    let n = circuit.n_qubits();
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::Size(format!(
            "density-matrix path supports at most {MAX_DENSITY_QUBITS} qubits, circuit has {n}"
        )));
    }
    let gate_noise: Option<(KrausChannel, KrausChannel)> = noise
        .map(|spec| {
            spec.validate()?;
            Ok::<_, Error>((depolarizing(spec.p1, 1)?, depolarizing(spec.p2, 2)?))
        })
        .transpose()?;

    let mut rho = DensityMatrix::from_state(&StateVector::zero(n)?)?;
    for op in circuit.ops() {
        match op.kind {
            OpKind::Gate(g) => {
                rho.apply_unitary_in_place(&g.matrix(), &op.targets)?;
                if let Some((one, two)) = &gate_noise {
                    let ch = if op.targets.len() == 1 { one } else { two };
                    rho.apply_operator_sum(ch.kraus_ops(), &op.targets)?;
                }
            }
            OpKind::ChannelMarker(id) => {
                let ch = circuit.channel(id).ok_or_else(|| {
                    Error::Integrity(format!("marker references unknown channel {}", id.0))
                })?;
                if ch.arity() != op.targets.len() {
                    return Err(Error::Integrity(format!(
                        "marker for {}-qubit channel has {} targets",
                        ch.arity(),
                        op.targets.len()
                    )));
                }
                rho.apply_operator_sum(ch.kraus_ops(), &op.targets)?;
            }
        }
    }
    Ok(rho)
}

/// Outcome distribution over the circuit's measured qubits, including readout
/// confusion when `noise` is given. Uses the statevector path when the circuit
/// is noiseless and marker-free.
pub fn measured_probabilities(circuit: &Circuit, noise: Option<&NoiseSpec>) -> Result<Vec<f64>> {
    let measured = circuit.measured_qubits();
    if measured.is_empty() {
        return Err(Error::Validation("circuit has no measured qubits".into()));
    }
    let n = circuit.n_qubits();
    let full = if noise.is_none() && !circuit.has_channel_markers() {
        run_statevector(circuit)?.probabilities()
    } else {
        run_density(circuit, noise)?.probabilities()
    };
    let probs = marginal(&full, n, measured)?;
    match noise {
        Some(spec) => apply_readout_confusion(&probs, &spec.readout, measured),
        None => Ok(probs),
    }
}
