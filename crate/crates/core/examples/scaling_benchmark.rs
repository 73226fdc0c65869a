// Gate counts, depth and ideal witnesses as the friend register grows.

use std::time::Instant;

use branchlab::pipeline::scaling_artifact;

pub fn run() -> branchlab::Result<()> {
    let start = Instant::now();
    let a = scaling_artifact(8)?;
    println!(" k  qubits  depth  2q  total    W_X    W_Y");
    for r in &a.rows {
        println!(
            "{:2} {:7} {:6} {:3} {:6} {:+6.3} {:+6.3}",
            r.k, r.n_qubits, r.stats.depth, r.stats.two_qubit_count, r.stats.total_gate_count, r.ideal.w_x, r.ideal.w_y
        );
    }
    println!("{:.2?}", start.elapsed());
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
