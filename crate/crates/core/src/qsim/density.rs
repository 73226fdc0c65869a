use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{check_gate_targets, real_part};
use super::{apply_matrix, check_targets, GateMatrix, PauliString, QuantumState, StateVector};
use crate::config::{MAX_DENSITY_QUBITS, TOLERANCES};
use crate::error::{Error, Result};

/// Mixed state on up to 10 qubits, stored row-major as `2^n x 2^n` entries.
///
/// The flat buffer doubles as a `2n`-qubit vector: row bits occupy the high
/// half of the index, column bits the low half. Conjugation `ρ → UρU†` is
/// then `U` on the row qubits followed by `U*` on the column qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|` for a normalized state.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        let n_qubits = state.n_qubits();
        check_size(n_qubits)?;
        let amps = state.amplitudes();
        let entries = amps
            .iter()
            .flat_map(|a| amps.iter().map(move |b| a * b.conj()))
            .collect();
        Ok(DensityMatrix { n_qubits, entries })
    }

    /// Wraps a row-major matrix and checks every density-matrix invariant.
    pub fn from_entries(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} entries for a {dim}x{dim} density matrix",
                entries.len()
            )));
        }
        let dm = DensityMatrix { n_qubits, entries };
        dm.validate()?;
        Ok(dm)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i]).sum()
    }

    /// Max abs entry of `ρ - ρ†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, c| {
            (self.entry(r, c) + self.entry(c, r).conj()) * 0.5
        });
        m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |r, c| {
            (self.entry(r, c) + self.entry(c, r).conj()) * 0.5
        });
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > TOLERANCES.hermiticity {
            return Err(Error::Validation(format!("density matrix not Hermitian ({herm:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOLERANCES.normalization || tr.im.abs() > TOLERANCES.normalization {
            return Err(Error::Validation(format!("density matrix trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -TOLERANCES.psd {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// `UρU†` as a new value.
    pub fn apply_unitary(&self, gate: &GateMatrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_in_place(gate, targets)?;
        Ok(out)
    }

    pub fn apply_unitary_in_place(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        check_gate_targets(self.n_qubits, gate, targets)?;
        self.conjugate_by(gate.entries(), &gate.conj_entries(), targets);
        Ok(())
    }

    /// `Σ K ρ K†` over the given row-major operators, all of the same arity as `targets`.
    pub(crate) fn apply_operator_sum(&mut self, ops: &[Vec<Complex64>], targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        let d = 1usize << targets.len();
        if ops.iter().any(|k| k.len() != d * d) {
            return Err(Error::Shape(format!(
                "operators do not act on {} qubits",
                targets.len()
            )));
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        for op in ops {
            let mut term = self.clone();
            let conj: Vec<Complex64> = op.iter().map(|z| z.conj()).collect();
            term.conjugate_by(op, &conj, targets);
            for (a, t) in acc.iter_mut().zip(&term.entries) {
                *a += t;
            }
        }
        self.entries = acc;
        Ok(())
    }

    fn conjugate_by(&mut self, op: &[Complex64], op_conj: &[Complex64], targets: &[usize]) {
        let n = self.n_qubits;
        apply_matrix(&mut self.entries, 2 * n, op, targets);
        let col_targets: Vec<usize> = targets.iter().map(|t| t + n).collect();
        apply_matrix(&mut self.entries, 2 * n, op_conj, &col_targets);
    }
}

fn check_size(n_qubits: usize) -> Result<()> {
    if !(1..=MAX_DENSITY_QUBITS).contains(&n_qubits) {
        return Err(Error::Size(format!(
            "density matrix needs 1..={MAX_DENSITY_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probabilities(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i].re).collect()
    }

    fn expectation_pauli(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::Shape(format!(
                "{}-letter Pauli string on {}-qubit density matrix",
                pauli.n_qubits(),
                self.n_qubits
            )));
        }
        // Tr(ρP) = Σ_b ρ[b, b^x] · phase(b)
        let flip = pauli.flip_mask();
        let value: Complex64 = (0..self.dim())
            .map(|b| self.entry(b, b ^ flip) * pauli.phase(b))
            .sum();
        real_part(value)
    }
}
