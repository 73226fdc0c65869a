//! Dense statevector and density-matrix simulation.
//!
//! Qubit 0 is the most significant bit of every amplitude index and the
//! leftmost character of every bitstring.

mod density;
mod gate;
mod pauli;
mod state;

pub use density::DensityMatrix;
pub use gate::GateMatrix;
pub use pauli::{Pauli, PauliString};
pub use state::{new_zero_state, StateVector};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Common read-only queries over pure and mixed states.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;

    /// Computational-basis outcome probabilities, indexed by amplitude index.
    fn probabilities(&self) -> Vec<f64>;

    /// Real expectation value of a Pauli string.
    fn expectation_pauli(&self, pauli: &PauliString) -> Result<f64>;
}

/// Free-function form of [`QuantumState::probabilities`].
pub fn probabilities<S: QuantumState + ?Sized>(source: &S) -> Vec<f64> {
    source.probabilities()
}

/// Free-function form of [`QuantumState::expectation_pauli`].
pub fn expectation_pauli<S: QuantumState + ?Sized>(source: &S, pauli: &PauliString) -> Result<f64> {
    source.expectation_pauli(pauli)
}

/// Sums a full-register distribution down to the listed qubits.
///
/// The result has `2^measured.len()` entries; `measured[0]` is the most
/// significant bit of the result index.
pub fn marginal(probs: &[f64], n_qubits: usize, measured: &[usize]) -> Result<Vec<f64>> {
    if probs.len() != 1usize << n_qubits {
        return Err(Error::Shape(format!(
            "distribution has {} entries, expected 2^{}",
            probs.len(),
            n_qubits
        )));
    }
    check_targets(n_qubits, measured)?;
    let m = measured.len();
    let mut out = vec![0.0; 1 << m];
    for (index, &p) in probs.iter().enumerate() {
        let mut key = 0usize;
        for &q in measured {
            key = (key << 1) | ((index >> (n_qubits - 1 - q)) & 1);
        }
        out[key] += p;
    }
    Ok(out)
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::Index(format!(
                "qubit {t} out of range for {n_qubits}-qubit register"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::Index(format!("duplicate target qubit {t}")));
        }
    }
    Ok(())
}

/// Applies a `2^k x 2^k` row-major matrix to the listed qubits of a
/// `2^n`-entry buffer in place. No unitarity is assumed.
pub(crate) fn apply_matrix(buf: &mut [Complex64], n: usize, matrix: &[Complex64], targets: &[usize]) {
    let k = targets.len();
    let d = 1usize << k;
    debug_assert_eq!(matrix.len(), d * d);
    debug_assert_eq!(buf.len(), 1usize << n);

    let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (n - 1 - t)).collect();
    let all = masks.iter().fold(0, |acc, m| acc | m);
    let offsets: Vec<usize> = (0..d)
        .map(|j| {
            masks
                .iter()
                .enumerate()
                .filter(|(i, _)| (j >> (k - 1 - i)) & 1 == 1)
                .fold(0, |acc, (_, m)| acc | m)
        })
        .collect();

    let mut scratch = vec![Complex64::new(0.0, 0.0); d];
    for base in 0..buf.len() {
        if base & all != 0 {
            continue;
        }
        for (slot, &off) in scratch.iter_mut().zip(&offsets) {
            *slot = buf[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let coeffs = &matrix[row * d..(row + 1) * d];
            buf[base | off] = coeffs.iter().zip(&scratch).map(|(m, a)| m * a).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marginal_keeps_requested_order() {
        // |q0 q1> = |10> with certainty
        let probs = [0.0, 0.0, 1.0, 0.0];
        assert_eq!(marginal(&probs, 2, &[0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(marginal(&probs, 2, &[1, 0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(marginal(&probs, 2, &[2]), Err(Error::Index(_))));
        assert!(matches!(marginal(&probs, 3, &[0]), Err(Error::Shape(_))));
    }
}
