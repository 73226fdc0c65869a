//! Kraus channels, channel insertion, the depolarizing + readout noise
//! proxy, and the noisy density-matrix execution path.

mod channel;
mod exec;
mod insertion;
mod readout;
mod snapshot;

pub use channel::{apply_channel, depolarizing, phase_flip, KrausChannel};
pub use exec::{measured_probabilities, run_density};
pub use insertion::{insert_channel, InsertionPoint, Location};
pub use readout::{apply_readout_confusion, ReadoutError};
pub use snapshot::{noise_from_snapshot, CalibrationSnapshot, GateErrors, NoiseSpec, QubitCalibration};
