// Phase-flip sweeps at each insertion point on the friend qubit.

use branchlab::circuit::Register;
use branchlab::constraint::{parse_grid, ChannelFamily};
use branchlab::noise::Location;
use branchlab::pipeline::sweep_artifact;

pub fn run() -> branchlab::Result<()> {
    let grid = parse_grid("0:0.5:0.1")?;
    for location in [Location::PostBranch, Location::PostTransfer, Location::PreMeasure] {
        let a = sweep_artifact(1, 1.0, ChannelFamily::PhaseFlip, location, Register::F(0), &grid, None)?;
        println!("{}", location.as_str());
        for p in &a.sweep.points {
            let m = p.predicted;
            println!("  lambda {:.2}: V {:.4}  W_X {:+.4}  W_Y {:+.4}", p.lambda, m.v, m.w_x, m.w_y);
        }
    }
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
