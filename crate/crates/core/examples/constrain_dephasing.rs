// Detectability threshold and closed-form dephasing estimate from
// hardware-style observed values.

use std::collections::BTreeMap;

use branchlab::constraint::{constrain, deviation_curves, parse_grid, ChannelFamily, DEFAULT_K_SIGMA};
use branchlab::noise::{InsertionPoint, Location};
use branchlab::witness::{MetricKind, MetricRecord};

fn observed(v: f64, wx: f64, wy: f64, err: [f64; 3]) -> BTreeMap<MetricKind, MetricRecord> {
    let rec = |value, e| MetricRecord {
        value,
        error: Some(e),
        shots: 20_000,
    };
    BTreeMap::from([
        (MetricKind::V, rec(v, err[0])),
        (MetricKind::WX, rec(wx, err[1])),
        (MetricKind::WY, rec(wy, err[2])),
    ])
}

pub fn run() -> branchlab::Result<()> {
    let grid = parse_grid("0:0.2:0.005")?;
    let sweep = deviation_curves(1, 1.0, ChannelFamily::PhaseFlip, InsertionPoint::new(Location::PreMeasure, 2), &grid, None)?;

    let hardware = observed(0.8771, 0.8398, -0.8107, [0.0034, 0.0038, 0.0041]);
    let noisy_sim = observed(0.9381, 0.8984, -0.8972, [0.0, 0.0031, 0.0031]);
    let report = constrain(&sweep, &hardware, Some(&noisy_sim), DEFAULT_K_SIGMA)?;

    for m in [MetricKind::V, MetricKind::WX, MetricKind::WY] {
        println!(
            "{m:<4} shot {:.4}  device {:.4}  band {:.4}",
            report.shot_sigma.get(m),
            report.device_delta.get(m),
            report.bands.get(m)
        );
    }
    match report.threshold.lambda_max {
        Some(l) => println!("lambda_max = {l:.3} ({:?})", report.threshold.deciding_metric),
        None => println!("lambda_max = inf"),
    }
    for (m, est) in &report.lambda_est {
        if let Some(e) = est {
            println!("lambda_est[{m}] = {e:.4}");
        }
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
