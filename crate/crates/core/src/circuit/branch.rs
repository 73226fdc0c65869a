use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{run_statevector, Circuit, GateKind, Stage};
use crate::config::MAX_FRIEND_QUBITS;
use crate::error::{Error, Result};
use crate::qsim::{marginal, Pauli, PauliString, QuantumState};
use crate::witness::{exact_visibility, MetricValues};

/// Qubit assignment for the branch-transfer circuit: `(Q, R, F₁..F_k, P, A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub q: usize,
    pub r: usize,
    pub f: Vec<usize>,
    pub p: usize,
    pub aux: usize,
}

impl RegisterLayout {
    pub fn canonical(k: usize) -> Self {
        RegisterLayout {
            q: 0,
            r: 1,
            f: (2..2 + k).collect(),
            p: 2 + k,
            aux: 3 + k,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.f.len() + 4
    }

    /// Qubits carrying the coherence witnesses: `(Q, R, F…, P)`.
    pub fn witness_qubits(&self) -> Vec<usize> {
        let mut qubits = vec![self.q, self.r];
        qubits.extend(&self.f);
        qubits.push(self.p);
        qubits
    }

    /// Qubits recorded by the visibility protocol: `(R, P)`.
    pub fn visibility_qubits(&self) -> Vec<usize> {
        vec![self.r, self.p]
    }

    pub fn index_of(&self, register: Register) -> Result<usize> {
        match register {
            Register::Q => Ok(self.q),
            Register::R => Ok(self.r),
            Register::P => Ok(self.p),
            Register::Aux => Ok(self.aux),
            Register::F(i) => self.f.get(i).copied().ok_or_else(|| {
                Error::Index(format!("friend qubit {i} out of range for k = {}", self.f.len()))
            }),
        }
    }
}

/// Named register of the canonical layout. `F(i)` is the i-th friend qubit (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Register {
    Q,
    R,
    F(usize),
    P,
    Aux,
}

impl FromStr for Register {
    type Err = Error;

    /// Accepts `q`, `r`, `p`, `a`/`aux`, `f` (first friend qubit) or `fN` (1-based).
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" => Ok(Register::Q),
            "r" => Ok(Register::R),
            "p" => Ok(Register::P),
            "a" | "aux" => Ok(Register::Aux),
            "f" => Ok(Register::F(0)),
            other => other
                .strip_prefix('f')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(|n| Register::F(n - 1))
                .ok_or_else(|| Error::parse("register", format!("unknown register {s:?}"))),
        }
    }
}

/// Which friend qubits receive the controlled transfer. Bit `i` ↔ `F_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchMask(Vec<bool>);

impl BranchMask {
    pub fn all_ones(k: usize) -> Self {
        BranchMask(vec![true; k])
    }

    pub fn new(bits: Vec<bool>) -> Self {
        BranchMask(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl FromStr for BranchMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse("mask", format!("invalid mask character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BranchMask)
    }
}

impl fmt::Display for BranchMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

/// Builds the canonical branch-transfer circuit on `(Q, R, F₁..F_k, P, A)`:
///
/// 1. `H(Q)`
/// 2. `CX(Q→R)`
/// 3. `X(P); CX(Q→P)`
/// 4. `CX(Q→A)`; `CX^μ(A→F_i)` for each set mask bit; `CX(Q→A)`
///
/// The auxiliary qubit is uncomputed and never measured. Measured qubits are
/// left empty; pick a mode with [`build_for_mode`] or [`append_basis_rotation`].
pub fn build_branch_transfer(k: usize, mu: f64, mask: &BranchMask) -> Result<(Circuit, RegisterLayout)> {
    if k == 0 {
        return Err(Error::Validation("friend register needs k >= 1".into()));
    }
    if k > MAX_FRIEND_QUBITS {
        return Err(Error::Size(format!(
            "friend register k = {k} exceeds {MAX_FRIEND_QUBITS}"
        )));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Validation(format!("mu = {mu} outside [0, 1]")));
    }
    if mask.len() != k {
        return Err(Error::Validation(format!(
            "mask has {} bits for k = {k}",
            mask.len()
        )));
    }
    if mask.count_ones() == 0 {
        return Err(Error::Validation("mask has no set bit".into()));
    }

    let layout = RegisterLayout::canonical(k);
    let mut c = Circuit::new(layout.n_qubits());
    let (q, r, p, a) = (layout.q, layout.r, layout.p, layout.aux);

    c.push_staged(GateKind::H, &[q], Some(Stage::BranchSplit))?;
    c.push_staged(GateKind::Cx, &[q, r], Some(Stage::Encode))?;
    c.push_staged(GateKind::X, &[p], Some(Stage::Probe))?;
    c.push_staged(GateKind::Cx, &[q, p], Some(Stage::Probe))?;
    c.push_staged(GateKind::Cx, &[q, a], Some(Stage::Transfer))?;
    for (&f, _) in layout.f.iter().zip(mask.bits()).filter(|(_, &set)| set) {
        c.push_staged(GateKind::CxPow(mu), &[a, f], Some(Stage::Transfer))?;
    }
    c.push_staged(GateKind::Cx, &[q, a], Some(Stage::Transfer))?;

    c.layout = Some(layout.clone());
    Ok((c, layout))
}

/// Pauli basis realized by a pre-measurement rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementBasis {
    X,
    Y,
}

/// Appends the rotation mapping `basis` onto Z for each listed qubit
/// (`H` for X, `S†` then `H` for Y) and sets the measured qubits to the list.
pub fn append_basis_rotation(circuit: &Circuit, basis: MeasurementBasis, qubits: &[usize]) -> Result<Circuit> {
    let mut out = circuit.clone();
    for &q in qubits {
        if basis == MeasurementBasis::Y {
            out.push_staged(GateKind::Sdg, &[q], Some(Stage::Rotation))?;
        }
        out.push_staged(GateKind::H, &[q], Some(Stage::Rotation))?;
    }
    out.set_measured(qubits)?;
    Ok(out)
}

/// Measurement protocol: parity witnesses in X or Y, or Z-basis visibility on `(R, P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementMode {
    CoherenceX,
    CoherenceY,
    RpZ,
}

impl MeasurementMode {
    pub const ALL: [MeasurementMode; 3] = [
        MeasurementMode::CoherenceX,
        MeasurementMode::CoherenceY,
        MeasurementMode::RpZ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasurementMode::CoherenceX => "coherence-x",
            MeasurementMode::CoherenceY => "coherence-y",
            MeasurementMode::RpZ => "rp-z",
        }
    }
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasurementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").to_ascii_lowercase().as_str() {
            "coherence-x" => Ok(MeasurementMode::CoherenceX),
            "coherence-y" => Ok(MeasurementMode::CoherenceY),
            "rp-z" => Ok(MeasurementMode::RpZ),
            _ => Err(Error::parse("mode", format!("unknown measurement mode {s:?}"))),
        }
    }
}

/// Canonical circuit with the rotations and measured qubits for `mode`.
pub fn build_for_mode(k: usize, mu: f64, mask: &BranchMask, mode: MeasurementMode) -> Result<(Circuit, RegisterLayout)> {
    let (base, layout) = build_branch_transfer(k, mu, mask)?;
    let circuit = match mode {
        MeasurementMode::CoherenceX => {
            append_basis_rotation(&base, MeasurementBasis::X, &layout.witness_qubits())?
        }
        MeasurementMode::CoherenceY => {
            append_basis_rotation(&base, MeasurementBasis::Y, &layout.witness_qubits())?
        }
        MeasurementMode::RpZ => {
            let mut c = base;
            c.set_measured(&layout.visibility_qubits())?;
            c
        }
    };
    Ok((circuit, layout))
}

/// Exact ideal metrics for the full-mask circuit, from the statevector.
pub fn ideal_witness_table(k: usize, mu: f64) -> Result<MetricValues> {
    let (circuit, layout) = build_branch_transfer(k, mu, &BranchMask::all_ones(k))?;
    let state = run_statevector(&circuit)?;
    let n = layout.n_qubits();
    let witness = layout.witness_qubits();
    let w_x = state.expectation_pauli(&PauliString::on_qubits(n, Pauli::X, &witness)?)?;
    let w_y = state.expectation_pauli(&PauliString::on_qubits(n, Pauli::Y, &witness)?)?;
    let rp = marginal(&state.probabilities(), n, &layout.visibility_qubits())?;
    let v = exact_visibility(&rp)?;
    Ok(MetricValues::new(v, w_x, w_y))
}
