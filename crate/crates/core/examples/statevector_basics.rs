// Dense statevector and density-matrix kernels on a Bell pair.

use branchlab::noise::{apply_channel, phase_flip};
use branchlab::qsim::{new_zero_state, DensityMatrix, GateMatrix, PauliString, QuantumState};

pub fn run() -> branchlab::Result<()> {
    let bell = new_zero_state(2)?
        .apply_gate(&GateMatrix::h(), &[0])?
        .apply_gate(&GateMatrix::cx(), &[0, 1])?;
    println!("probabilities {:?}", bell.probabilities());
    for p in ["XX", "YY", "ZZ", "ZI"] {
        println!("<{p}> = {:+.4}", bell.expectation_pauli(&p.parse::<PauliString>()?)?);
    }

    let rho = DensityMatrix::from_state(&bell)?;
    let dephased = apply_channel(&rho, &phase_flip(0.25)?, &[1])?;
    println!("after phase_flip(0.25) on qubit 1:");
    for p in ["XX", "ZZ"] {
        println!("<{p}> = {:+.4}", dephased.expectation_pauli(&p.parse::<PauliString>()?)?);
    }
    println!("eigenvalues {:?}", dephased.eigenvalues());
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
