//! Gate-level circuit representation, the canonical branch-transfer
//! constructor, basis rotations and circuit statistics.

mod branch;
mod stats;

pub use branch::{
    append_basis_rotation, build_branch_transfer, build_for_mode, ideal_witness_table,
    BranchMask, MeasurementBasis, MeasurementMode, Register, RegisterLayout,
};
pub use stats::{circuit_stats, CircuitStats};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::noise::KrausChannel;
use crate::qsim::{check_targets, GateMatrix, StateVector};

/// Unitary gate kinds the circuit IR understands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Sdg,
    Cx,
    /// Controlled `X^μ`.
    CxPow(f64),
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Sdg => 1,
            GateKind::Cx | GateKind::CxPow(_) => 2,
        }
    }

    pub fn matrix(self) -> GateMatrix {
        match self {
            GateKind::H => GateMatrix::h(),
            GateKind::X => GateMatrix::x(),
            GateKind::Sdg => GateMatrix::sdg(),
            GateKind::Cx => GateMatrix::cx(),
            GateKind::CxPow(mu) => GateMatrix::cx_pow(mu),
        }
    }

    fn mnemonic(self) -> String {
        match self {
            GateKind::H => "H".into(),
            GateKind::X => "X".into(),
            GateKind::Sdg => "SDG".into(),
            GateKind::Cx => "CX".into(),
            GateKind::CxPow(mu) => format!("CXPOW({mu:.16e})"),
        }
    }
}

/// Index into a circuit's channel table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelId(pub usize);

/// Position of an op within the canonical sequence. Ordered by execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    BranchSplit,
    Encode,
    Probe,
    Transfer,
    PreMeasure,
    Rotation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpKind {
    Gate(GateKind),
    ChannelMarker(ChannelId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub kind: OpKind,
    pub targets: Vec<usize>,
    /// Set for ops emitted by the canonical constructor and its appenders.
    pub stage: Option<Stage>,
}

/// Ordered gate list plus channel markers and the measured-qubit record.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Op>,
    measured: Vec<usize>,
    layout: Option<RegisterLayout>,
    channels: Vec<KrausChannel>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            measured: Vec::new(),
            layout: None,
            channels: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    pub fn layout(&self) -> Option<&RegisterLayout> {
        self.layout.as_ref()
    }

    pub fn channel(&self, id: ChannelId) -> Option<&KrausChannel> {
        self.channels.get(id.0)
    }

    pub fn has_channel_markers(&self) -> bool {
        self.ops
            .iter()
            .any(|op| matches!(op.kind, OpKind::ChannelMarker(_)))
    }

    /// Appends a gate with no stage tag.
    pub fn push(&mut self, gate: GateKind, targets: &[usize]) -> Result<()> {
        self.push_staged(gate, targets, None)
    }

    pub(crate) fn push_staged(&mut self, gate: GateKind, targets: &[usize], stage: Option<Stage>) -> Result<()> {
        if gate.arity() != targets.len() {
            return Err(Error::Index(format!(
                "{} needs {} targets, got {}",
                gate.mnemonic(),
                gate.arity(),
                targets.len()
            )));
        }
        check_targets(self.n_qubits, targets)?;
        self.ops.push(Op {
            kind: OpKind::Gate(gate),
            targets: targets.to_vec(),
            stage,
        });
        Ok(())
    }

    /// Registers a channel and returns the identifier markers use to refer to it.
    pub fn add_channel(&mut self, channel: KrausChannel) -> ChannelId {
        self.channels.push(channel);
        ChannelId(self.channels.len() - 1)
    }

    /// Appends a raw channel marker. The id is not checked here; unresolved ids
    /// surface as integrity errors at execution time.
    pub fn push_channel_marker(&mut self, id: ChannelId, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        self.ops.push(Op {
            kind: OpKind::ChannelMarker(id),
            targets: targets.to_vec(),
            stage: None,
        });
        Ok(())
    }

    pub(crate) fn insert_op(&mut self, position: usize, op: Op) {
        self.ops.insert(position, op);
    }

    pub fn set_measured(&mut self, qubits: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, qubits)?;
        self.measured = qubits.to_vec();
        Ok(())
    }

    /// Line-oriented text form hashed into artifact provenance.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        for op in &self.ops {
            let targets = join(&op.targets);
            match &op.kind {
                OpKind::Gate(g) => writeln!(out, "{} {targets}", g.mnemonic()),
                OpKind::ChannelMarker(id) => {
                    let label = self.channel(*id).map(|c| c.label()).unwrap_or("?");
                    writeln!(out, "CHANNEL {} {label} {targets}", id.0)
                }
            }
            .expect("writing to a String cannot fail");
        }
        writeln!(out, "measure {}", join(&self.measured)).expect("writing to a String cannot fail");
        out
    }
}

fn join(qubits: &[usize]) -> String {
    qubits
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the circuit on `|0…0⟩`. Circuits carrying channel markers must go
/// through the density-matrix path instead.
pub fn run_statevector(circuit: &Circuit) -> Result<StateVector> {
    if circuit.has_channel_markers() {
        return Err(Error::UnsupportedPath(
            "circuit contains channel markers; use the density-matrix path".into(),
        ));
    }
    let mut state = StateVector::zero(circuit.n_qubits)?;
    for op in &circuit.ops {
        if let OpKind::Gate(g) = op.kind {
            state.apply_gate_in_place(&g.matrix(), &op.targets)?;
        }
    }
    Ok(state)
}
