//! Numerical tolerances shared by every module.

/// Tolerance constants, gathered in one place so validation thresholds stay consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Unitarity check on gate matrices, per entry of `U†U - I`.
    pub unitarity: f64,
    /// Statevector norm and density-matrix trace.
    pub normalization: f64,
    /// Max abs deviation of `ρ - ρ†`.
    pub hermiticity: f64,
    /// Smallest eigenvalue allowed for a density matrix.
    pub psd: f64,
    /// Kraus completeness, per entry of `Σ K†K - I`.
    pub completeness: f64,
    /// Imaginary residue tolerated on a Pauli expectation value.
    pub imaginary_residue: f64,
    /// Probability vectors within this distance of unit mass are silently renormalized.
    pub renormalize: f64,
    /// Negative probabilities above `-negative_probability` are clamped to zero.
    pub negative_probability: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    unitarity: 1e-12,
    normalization: 1e-10,
    hermiticity: 1e-10,
    psd: 1e-8,
    completeness: 1e-10,
    imaginary_residue: 1e-10,
    renormalize: 1e-8,
    negative_probability: 1e-10,
};

/// Largest register a statevector may hold.
pub const MAX_STATEVECTOR_QUBITS: usize = 16;

/// Largest register the density-matrix path accepts (1024 x 1024 entries).
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Largest friend register accepted by the circuit constructor.
pub const MAX_FRIEND_QUBITS: usize = 12;
