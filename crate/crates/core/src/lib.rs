//! Simulation and analysis toolkit for the branch-transfer circuit primitive.
//!
//! The crate builds the canonical five-qubit (in general `k + 4`-qubit)
//! branch-transfer circuit, simulates it as a statevector or density matrix,
//! inserts parameterized dephasing channels, samples seeded shot counts,
//! estimates visibility and Pauli-parity coherence witnesses with standard
//! errors, and sweeps channel strength to find detectability thresholds.
//!
//! ```
//! use branchlab::circuit::ideal_witness_table;
//!
//! let ideal = ideal_witness_table(1, 1.0).unwrap();
//! assert!((ideal.w_x - 1.0).abs() < 1e-12);
//! assert!((ideal.w_y + 1.0).abs() < 1e-12);
//! assert!((ideal.c_mag - 2f64.sqrt()).abs() < 1e-12);
//! ```

pub mod artifact;
pub mod circuit;
pub mod config;
pub mod constraint;
pub mod error;
pub mod noise;
pub mod pipeline;
pub mod qsim;
pub mod sampler;
pub mod witness;

pub use error::{Error, Result};
