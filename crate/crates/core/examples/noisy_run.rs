// Sampled runs under a calibration-snapshot noise proxy.

use branchlab::circuit::MeasurementMode;
use branchlab::noise::{noise_from_snapshot, CalibrationSnapshot};
use branchlab::pipeline::{run_experiment, RunConfig};

const SNAPSHOT: &str = r#"{
  "qubits": [
    {"t1_us": 140.0, "t2_us": 95.0, "readout_e01": 0.012, "readout_e10": 0.021},
    {"t1_us": 120.0, "t2_us": 80.0, "readout_e01": 0.010, "readout_e10": 0.018},
    {"t1_us": 150.0, "t2_us": 110.0, "readout_e01": 0.008, "readout_e10": 0.015},
    {"t1_us": 110.0, "t2_us": 70.0, "readout_e01": 0.014, "readout_e10": 0.025},
    {"t1_us": 130.0, "t2_us": 90.0, "readout_e01": 0.011, "readout_e10": 0.019}
  ],
  "gates": {"err_1q": 0.0003, "err_2q": 0.008}
}"#;

pub fn run() -> branchlab::Result<()> {
    let noise = noise_from_snapshot(&CalibrationSnapshot::from_json(SNAPSHOT)?)?;
    println!("p1 = {}, p2 = {}", noise.p1, noise.p2);
    for mode in [MeasurementMode::RpZ, MeasurementMode::CoherenceX, MeasurementMode::CoherenceY] {
        let mut cfg = RunConfig::new(mode, 1, 1.0, 20_000);
        cfg.noise = Some(noise.clone());
        let artifact = run_experiment(&cfg)?;
        for (kind, m) in &artifact.metrics {
            println!("{:<12} {kind:<4} = {:+.4} ± {:.4}", mode.as_str(), m.value, m.error.unwrap_or(0.0));
        }
    }
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
