use num_complex::Complex64;

use crate::config::TOLERANCES;
use crate::error::{Error, Result};
use crate::qsim::{DensityMatrix, GateMatrix, QuantumState};

/// Completely positive trace-preserving map in operator-sum form.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    arity: usize,
    ops: Vec<Vec<Complex64>>,
    label: String,
}

impl KrausChannel {
    /// Validates dimensions and completeness `Σ K†K = I`.
    pub fn new(arity: usize, ops: Vec<Vec<Complex64>>, label: impl Into<String>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::Validation(format!("channel arity {arity} not in {{1, 2}}")));
        }
        let d = 1usize << arity;
        if ops.is_empty() || ops.iter().any(|k| k.len() != d * d) {
            return Err(Error::Shape(format!(
                "Kraus operators must be {d}x{d} and nonempty"
            )));
        }
        let channel = KrausChannel {
            arity,
            ops,
            label: label.into(),
        };
        let deviation = channel.completeness_deviation();
        if deviation > TOLERANCES.completeness {
            return Err(Error::Validation(format!(
                "Kraus operators are not complete (max |ΣK†K - I| = {deviation:e})"
            )));
        }
        Ok(channel)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus_ops(&self) -> &[Vec<Complex64>] {
        &self.ops
    }

    /// Human-readable identifier, also hashed into circuit provenance.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Max entry of `|Σ K†K − I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let d = 1usize << self.arity;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let sum: Complex64 = self
                    .ops
                    .iter()
                    .flat_map(|k| (0..d).map(move |m| k[m * d + r].conj() * k[m * d + c]))
                    .sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((sum - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn check_probability(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Validation(format!("{name} = {value} outside [0, 1]")));
    }
    Ok(())
}

fn scaled(gate: &GateMatrix, factor: f64) -> Vec<Complex64> {
    gate.entries().iter().map(|z| z * factor).collect()
}

/// `ρ → (1 − λ)ρ + λ ZρZ`.
pub fn phase_flip(lambda: f64) -> Result<KrausChannel> {
    check_probability("lambda", lambda)?;
    let id = GateMatrix::identity(1)?;
    KrausChannel::new(
        1,
        vec![scaled(&id, (1.0 - lambda).sqrt()), scaled(&GateMatrix::z(), lambda.sqrt())],
        format!("phase_flip(lambda={lambda:.16e})"),
    )
}

/// `ρ → (1 − p)ρ + p · mean over non-identity Paulis of PρP`.
///
/// For one qubit the Bloch vector shrinks by `1 − 4p/3`, reaching the
/// maximally mixed state at `p = 3/4`. The two-qubit channel averages over
/// the 15 non-identity two-qubit Paulis.
pub fn depolarizing(p: f64, arity: usize) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let paulis = [GateMatrix::identity(1)?, GateMatrix::x(), GateMatrix::y(), GateMatrix::z()];
    let ops = match arity {
        1 => {
            let w = (p / 3.0).sqrt();
            let mut ops = vec![scaled(&paulis[0], (1.0 - p).sqrt())];
            ops.extend(paulis[1..].iter().map(|g| scaled(g, w)));
            ops
        }
        2 => {
            let w = (p / 15.0).sqrt();
            let mut ops = Vec::with_capacity(16);
            for (i, a) in paulis.iter().enumerate() {
                for (j, b) in paulis.iter().enumerate() {
                    let weight = if i == 0 && j == 0 { (1.0 - p).sqrt() } else { w };
                    ops.push(kron(a.entries(), b.entries(), weight));
                }
            }
            ops
        }
        _ => {
            return Err(Error::Validation(format!(
                "depolarizing arity {arity} not in {{1, 2}}"
            )))
        }
    };
    KrausChannel::new(arity, ops, format!("depolarizing{arity}(p={p:.16e})"))
}

fn kron(a: &[Complex64], b: &[Complex64], weight: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 16];
    for ar in 0..2 {
        for ac in 0..2 {
            for br in 0..2 {
                for bc in 0..2 {
                    out[(ar * 2 + br) * 4 + ac * 2 + bc] = a[ar * 2 + ac] * b[br * 2 + bc] * weight;
                }
            }
        }
    }
    out
}

/// `ρ → Σ K ρ K†` on the listed qubits.
pub fn apply_channel(dm: &DensityMatrix, ch: &KrausChannel, targets: &[usize]) -> Result<DensityMatrix> {
    if targets.len() != ch.arity {
        return Err(Error::Shape(format!(
            "{}-qubit channel given {} targets",
            ch.arity,
            targets.len()
        )));
    }
    if targets.iter().any(|&t| t >= dm.n_qubits()) {
        return Err(Error::Index(format!("channel target out of range in {targets:?}")));
    }
    let mut out = dm.clone();
    out.apply_operator_sum(&ch.ops, targets)?;
    Ok(out)
}
