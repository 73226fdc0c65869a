// Readout confusion applied to the ideal (R, P) distribution.

use branchlab::circuit::{build_for_mode, BranchMask, MeasurementMode};
use branchlab::noise::{apply_readout_confusion, measured_probabilities, ReadoutError};
use branchlab::witness::exact_visibility;

pub fn run() -> branchlab::Result<()> {
    let (circuit, layout) = build_for_mode(1, 1.0, &BranchMask::all_ones(1), MeasurementMode::RpZ)?;
    let measured = circuit.measured_qubits().to_vec();
    let ideal = measured_probabilities(&circuit, None)?;
    println!("measured {measured:?} (R = {}, P = {})", layout.r, layout.p);
    println!("ideal {ideal:?}  V = {:.4}", exact_visibility(&ideal)?);

    for e in [0.01, 0.02, 0.05] {
        let readout = vec![ReadoutError::symmetric(e); layout.n_qubits()];
        let noisy = apply_readout_confusion(&ideal, &readout, &measured)?;
        println!("e = {e:.2}: V = {:.4}", exact_visibility(&noisy)?);
    }
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
