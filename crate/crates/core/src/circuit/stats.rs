use serde::{Deserialize, Serialize};

use super::{Circuit, OpKind};

/// Gate counts and depth, ignoring channel markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircuitStats {
    pub depth: usize,
    pub two_qubit_count: usize,
    pub total_gate_count: usize,
}

/// Depth is the longest chain of gates linked by shared qubits.
pub fn circuit_stats(circuit: &Circuit) -> CircuitStats {
    let mut level = vec![0usize; circuit.n_qubits()];
    let mut stats = CircuitStats::default();
    for op in circuit.ops() {
        if let OpKind::Gate(_) = op.kind {
            let next = op.targets.iter().map(|&t| level[t]).max().unwrap_or(0) + 1;
            for &t in &op.targets {
                level[t] = next;
            }
            stats.total_gate_count += 1;
            if op.targets.len() == 2 {
                stats.two_qubit_count += 1;
            }
        }
    }
    stats.depth = level.into_iter().max().unwrap_or(0);
    stats
}
