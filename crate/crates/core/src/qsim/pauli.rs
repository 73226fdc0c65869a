use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, one letter per qubit (qubit 0 first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString::new(vec![Pauli::I; n_qubits])
    }

    /// `letter` on each listed qubit, identity elsewhere.
    pub fn on_qubits(n_qubits: usize, letter: Pauli, qubits: &[usize]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n_qubits];
        for &q in qubits {
            let slot = letters
                .get_mut(q)
                .ok_or_else(|| Error::Index(format!("qubit {q} out of range for {n_qubits} qubits")))?;
            *slot = letter;
        }
        Ok(PauliString { letters })
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Bit mask of qubits flipped by the string (X or Y), in amplitude-index bit positions.
    pub(crate) fn flip_mask(&self) -> usize {
        let n = self.letters.len();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |acc, (q, _)| acc | (1 << (n - 1 - q)))
    }

    /// Phase `c` with `P|b⟩ = c |b ^ flip_mask⟩`.
    pub(crate) fn phase(&self, basis_index: usize) -> Complex64 {
        let n = self.letters.len();
        let mut phase = Complex64::new(1.0, 0.0);
        for (q, p) in self.letters.iter().enumerate() {
            let bit = (basis_index >> (n - 1 - q)) & 1;
            match (p, bit) {
                (Pauli::Y, 0) => phase *= Complex64::new(0.0, 1.0),
                (Pauli::Y, _) => phase *= Complex64::new(0.0, -1.0),
                (Pauli::Z, 1) => phase = -phase,
                _ => {}
            }
        }
        phase
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::parse("pauli", format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString { letters })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}
