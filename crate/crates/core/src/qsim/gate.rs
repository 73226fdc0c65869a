use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use crate::config::TOLERANCES;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A validated unitary acting on one or two qubits.
///
/// Entries are row-major; for two-qubit gates the first target is the more
/// significant bit of the row/column index.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    arity: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    /// Builds a gate, rejecting wrong dimensions and non-unitary matrices.
    pub fn new(arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::Validation(format!("gate arity {arity} not in {{1, 2}}")));
        }
        let d = 1usize << arity;
        if entries.len() != d * d {
            return Err(Error::Shape(format!(
                "{arity}-qubit gate needs {} entries, got {}",
                d * d,
                entries.len()
            )));
        }
        let gate = GateMatrix { arity, entries };
        let deviation = gate.unitarity_deviation();
        if deviation > TOLERANCES.unitarity {
            return Err(Error::Validation(format!(
                "gate is not unitary (max |U†U - I| = {deviation:e})"
            )));
        }
        Ok(gate)
    }

    fn known(arity: usize, entries: Vec<Complex64>) -> Self {
        GateMatrix { arity, entries }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn identity(arity: usize) -> Result<Self> {
        let d = 1usize << arity;
        let entries = (0..d * d)
            .map(|i| if i / d == i % d { ONE } else { ZERO })
            .collect();
        Self::new(arity, entries)
    }

    pub fn h() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::known(1, vec![s, s, s, -s])
    }

    pub fn x() -> Self {
        Self::known(1, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> Self {
        Self::known(1, vec![ZERO, -I, I, ZERO])
    }

    pub fn z() -> Self {
        Self::known(1, vec![ONE, ZERO, ZERO, -ONE])
    }

    pub fn s() -> Self {
        Self::known(1, vec![ONE, ZERO, ZERO, I])
    }

    /// Inverse phase gate, diag(1, -i).
    pub fn sdg() -> Self {
        Self::known(1, vec![ONE, ZERO, ZERO, -I])
    }

    /// `X^μ = e^{iμπ/2} Rx(μπ)`: identity at μ = 0, exactly X at μ = 1.
    pub fn x_pow(mu: f64) -> Self {
        if mu == 0.0 {
            return Self::known(1, vec![ONE, ZERO, ZERO, ONE]);
        }
        if mu == 1.0 {
            return Self::x();
        }
        let half = mu * FRAC_PI_2;
        let global = Complex64::from_polar(1.0, half);
        let c = Complex64::new(half.cos(), 0.0);
        let s = Complex64::new(0.0, -half.sin());
        Self::known(1, vec![global * c, global * s, global * s, global * c])
    }

    /// CNOT with the first target as control.
    pub fn cx() -> Self {
        Self::controlled(&Self::x())
    }

    /// Controlled `X^μ`; see [`GateMatrix::x_pow`].
    pub fn cx_pow(mu: f64) -> Self {
        Self::controlled(&Self::x_pow(mu))
    }

    fn controlled(u: &GateMatrix) -> Self {
        debug_assert_eq!(u.arity, 1);
        let mut entries = vec![ZERO; 16];
        entries[0] = ONE;
        entries[5] = ONE;
        entries[10] = u.entries[0];
        entries[11] = u.entries[1];
        entries[14] = u.entries[2];
        entries[15] = u.entries[3];
        Self::known(2, entries)
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub(crate) fn conj_entries(&self) -> Vec<Complex64> {
        self.entries.iter().map(|z| z.conj()).collect()
    }

    fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let dot: Complex64 = (0..d)
                    .map(|k| self.entries[k * d + r].conj() * self.entries[k * d + c])
                    .sum();
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}
