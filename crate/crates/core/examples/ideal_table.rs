// Exact witness table for the branch-transfer circuit.

use branchlab::circuit::{build_branch_transfer, circuit_stats, ideal_witness_table, BranchMask};

pub fn run() -> branchlab::Result<()> {
    let (circuit, _) = build_branch_transfer(1, 1.0, &BranchMask::all_ones(1))?;
    print!("{}", circuit.canonical_text());

    let t = ideal_witness_table(1, 1.0)?;
    println!("V = {:.4}  W_X = {:+.4}  W_Y = {:+.4}  C_mag = {:.4}", t.v, t.w_x, t.w_y, t.c_mag);

    println!("\n  mu      V     W_X     W_Y   C_mag");
    for i in 0..=4 {
        let mu = i as f64 / 4.0;
        let t = ideal_witness_table(1, mu)?;
        println!("{mu:4.2} {:6.3} {:+7.3} {:+7.3} {:7.3}", t.v, t.w_x, t.w_y, t.c_mag);
    }

    println!("\n k  depth  2q    W_X    W_Y");
    for k in 1..=4 {
        let (c, _) = build_branch_transfer(k, 1.0, &BranchMask::all_ones(k))?;
        let s = circuit_stats(&c);
        let t = ideal_witness_table(k, 1.0)?;
        println!("{k:2} {:6} {:3} {:+6.3} {:+6.3}", s.depth, s.two_qubit_count, t.w_x, t.w_y);
    }
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
