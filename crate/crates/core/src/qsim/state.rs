use num_complex::Complex64;

use super::{apply_matrix, check_targets, GateMatrix, PauliString, QuantumState};
use crate::config::{MAX_STATEVECTOR_QUBITS, TOLERANCES};
use crate::error::{Error, Result};

/// Pure state over `n_qubits`, stored as `2^n` dense amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// `|0…0⟩` on `n_qubits` qubits (1 to 16).
pub fn new_zero_state(n_qubits: usize) -> Result<StateVector> {
    StateVector::zero(n_qubits)
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps caller-supplied amplitudes after checking length and norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Shape(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let state = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCES.normalization {
            return Err(Error::Validation(format!("state norm² is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Returns the state with `gate` applied to `targets` (first target = most significant gate bit).
    pub fn apply_gate(&self, gate: &GateMatrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_in_place(gate, targets)?;
        Ok(out)
    }

    pub fn apply_gate_in_place(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        check_gate_targets(self.n_qubits, gate, targets)?;
        apply_matrix(&mut self.amplitudes, self.n_qubits, gate.entries(), targets);
        Ok(())
    }
}

pub(super) fn check_gate_targets(n_qubits: usize, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
    if gate.arity() != targets.len() {
        return Err(Error::Index(format!(
            "{}-qubit gate given {} targets",
            gate.arity(),
            targets.len()
        )));
    }
    check_targets(n_qubits, targets)
}

fn check_size(n_qubits: usize) -> Result<()> {
    if !(1..=MAX_STATEVECTOR_QUBITS).contains(&n_qubits) {
        return Err(Error::Size(format!(
            "statevector needs 1..={MAX_STATEVECTOR_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    fn expectation_pauli(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "{}-letter Pauli string on {}-qubit state",
                pauli.n_qubits(),
                self.n_qubits
            )));
        }
        let flip = pauli.flip_mask();
        let value: Complex64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(b, amp)| self.amplitudes[b ^ flip].conj() * pauli.phase(b) * amp)
            .sum();
        real_part(value)
    }
}

pub(super) fn real_part(value: Complex64) -> Result<f64> {
    if value.im.abs() >= TOLERANCES.imaginary_residue {
        return Err(Error::Integrity(format!(
            "Pauli expectation has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}
