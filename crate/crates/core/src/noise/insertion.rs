use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KrausChannel;
use crate::circuit::{Circuit, Op, OpKind, Stage};
use crate::error::{Error, Result};

/// Named position in the canonical branch-transfer sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Location {
    /// After `H(Q)`.
    PostBranch,
    /// After the controlled transfer (step 4).
    PostTransfer,
    /// After all state preparation and any post-transfer markers, immediately
    /// before the measurement-basis rotations.
    PreMeasure,
}

impl Location {
    pub const ALL: [Location; 3] = [Location::PostBranch, Location::PostTransfer, Location::PreMeasure];

    pub fn as_str(self) -> &'static str {
        match self {
            Location::PostBranch => "post-branch",
            Location::PostTransfer => "post-transfer",
            Location::PreMeasure => "pre-measure",
        }
    }

    fn stage(self) -> Stage {
        match self {
            Location::PostBranch => Stage::BranchSplit,
            Location::PostTransfer => Stage::Transfer,
            Location::PreMeasure => Stage::PreMeasure,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Location {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").to_ascii_lowercase().as_str() {
            "post-branch" | "post-branch-split" => Ok(Location::PostBranch),
            "post-transfer" => Ok(Location::PostTransfer),
            "pre-measure" | "pre-measurement" => Ok(Location::PreMeasure),
            _ => Err(Error::Validation(format!("unknown insertion location {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsertionPoint {
    pub location: Location,
    pub target_qubit: usize,
}

impl InsertionPoint {
    pub fn new(location: Location, target_qubit: usize) -> Self {
        InsertionPoint {
            location,
            target_qubit,
        }
    }
}

/// Returns a copy of `circuit` with a marker for `ch` at the named position.
///
/// Markers at the same position keep their insertion order. Only circuits
/// built by the canonical constructor carry the stage tags this relies on.
pub fn insert_channel(circuit: &Circuit, ch: &KrausChannel, at: InsertionPoint) -> Result<Circuit> {
    if circuit.layout().is_none() {
        return Err(Error::Validation(
            "named insertion points need a canonical branch-transfer circuit".into(),
        ));
    }
    if ch.arity() != 1 {
        return Err(Error::Validation(format!(
            "insertion points take single-qubit channels, got arity {}",
            ch.arity()
        )));
    }
    if at.target_qubit >= circuit.n_qubits() {
        return Err(Error::Index(format!(
            "insertion target {} out of range for {} qubits",
            at.target_qubit,
            circuit.n_qubits()
        )));
    }
    let stage = at.location.stage();
    let position = circuit
        .ops()
        .iter()
        .rposition(|op| op.stage.is_some_and(|s| s <= stage))
        .map_or(0, |i| i + 1);

    let mut out = circuit.clone();
    let id = out.add_channel(ch.clone());
    out.insert_op(
        position,
        Op {
            kind: OpKind::ChannelMarker(id),
            targets: vec![at.target_qubit],
            stage: Some(stage),
        },
    );
    Ok(out)
}
