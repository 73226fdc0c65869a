use num_complex::Complex64;
use proptest::prelude::*;

use branchlab::artifact::{build_manifest, verify_manifest};
use branchlab::circuit::{
    append_basis_rotation, build_branch_transfer, circuit_stats, run_statevector, BranchMask, Circuit, GateKind,
    MeasurementBasis,
};
use branchlab::constraint::{
    detectability_threshold, first_order_prediction, lambda_est, ChannelFamily, SweepPoint, SweepResult,
    UncertaintyBand,
};
use branchlab::noise::{apply_channel, depolarizing, phase_flip, run_density, InsertionPoint, Location};
use branchlab::qsim::{DensityMatrix, Pauli, PauliString, QuantumState, StateVector};
use branchlab::sampler::{marginalize, SeededSampler};
use branchlab::witness::{coherence_magnitude, parity_witness, MetricKind, MetricValues, WitnessResult};

fn gate_strategy(n: usize) -> impl Strategy<Value = (GateKind, Vec<usize>)> {
    (0..5usize, 0..n, 0..n.max(2) - 1, 0.0..=1.0f64).prop_filter_map("two-qubit gate on one qubit", move |(g, a, b, mu)| {
        let b = if b >= a { b + 1 } else { b };
        match g {
            0 => Some((GateKind::H, vec![a])),
            1 => Some((GateKind::X, vec![a])),
            2 => Some((GateKind::Sdg, vec![a])),
            3 if n > 1 => Some((GateKind::Cx, vec![a, b])),
            4 if n > 1 => Some((GateKind::CxPow(mu), vec![a, b])),
            _ => None,
        }
    })
}

fn circuit_strategy(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec(gate_strategy(n), 0..=max_gates).prop_map(move |gates| {
            let mut c = Circuit::new(n);
            for (g, t) in gates {
                c.push(g, &t).unwrap();
            }
            c
        })
    })
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(prop::sample::select(vec![Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]), n)
        .prop_map(PauliString::new)
}

fn qubit_state() -> impl Strategy<Value = DensityMatrix> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(theta, phi)| {
        let amps = vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ];
        DensityMatrix::from_state(&StateVector::from_amplitudes(1, amps).unwrap()).unwrap()
    })
}

fn purity(dm: &DensityMatrix) -> f64 {
    let d = dm.dim();
    (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (dm.entry(i, j) * dm.entry(j, i)).re)
        .sum()
}

fn bloch(dm: &DensityMatrix, letter: &str) -> f64 {
    dm.expectation_pauli(&letter.parse().unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(c in circuit_strategy(6, 30)) {
        let sv = run_statevector(&c).unwrap();
        prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitary_evolution_stays_pure(c in circuit_strategy(4, 20)) {
        let dm = run_density(&c, None).unwrap();
        prop_assert!((purity(&dm) - 1.0).abs() < 1e-9);
        prop_assert!((dm.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn identity_expectation_is_one(c in circuit_strategy(5, 20)) {
        let sv = run_statevector(&c).unwrap();
        let id = PauliString::identity(c.n_qubits());
        prop_assert!((sv.expectation_pauli(&id).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_path_agrees_with_statevector(
        (c, p) in circuit_strategy(4, 20).prop_flat_map(|c| { let n = c.n_qubits(); (Just(c), pauli_strategy(n)) })
    ) {
        let sv = run_statevector(&c).unwrap();
        let dm = run_density(&c, None).unwrap();
        let a = sv.expectation_pauli(&p).unwrap();
        let b = dm.expectation_pauli(&p).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn basis_rotation_maps_parity_to_z(c in circuit_strategy(3, 15), use_y in any::<bool>()) {
        let n = c.n_qubits();
        let qubits: Vec<usize> = (0..n).collect();
        let (basis, letter) = if use_y { (MeasurementBasis::Y, Pauli::Y) } else { (MeasurementBasis::X, Pauli::X) };
        let before = run_statevector(&c).unwrap()
            .expectation_pauli(&PauliString::on_qubits(n, letter, &qubits).unwrap()).unwrap();
        let rotated = append_basis_rotation(&c, basis, &qubits).unwrap();
        let after = run_statevector(&rotated).unwrap()
            .expectation_pauli(&PauliString::on_qubits(n, Pauli::Z, &qubits).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn depth_invariant_under_relabeling(c in circuit_strategy(5, 25), shift in 0usize..5) {
        let n = c.n_qubits();
        let mut relabeled = Circuit::new(n);
        for op in c.ops() {
            if let branchlab::circuit::OpKind::Gate(g) = op.kind {
                let t: Vec<usize> = op.targets.iter().map(|q| (q + shift) % n).collect();
                relabeled.push(g, &t).unwrap();
            }
        }
        prop_assert_eq!(circuit_stats(&c), circuit_stats(&relabeled));
    }

    #[test]
    fn channels_preserve_trace(rho in qubit_state(), l in 0.0..=1.0f64, p in 0.0..=1.0f64) {
        for ch in [phase_flip(l).unwrap(), depolarizing(p, 1).unwrap()] {
            let out = apply_channel(&rho, &ch, &[0]).unwrap();
            prop_assert!((out.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(out.min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn phase_flip_attenuates_transverse_components(rho in qubit_state(), l in 0.0..=1.0f64) {
        let out = apply_channel(&rho, &phase_flip(l).unwrap(), &[0]).unwrap();
        for axis in ["X", "Y"] {
            prop_assert!((bloch(&out, axis) - (1.0 - 2.0 * l) * bloch(&rho, axis)).abs() < 1e-12);
        }
        prop_assert!((bloch(&out, "Z") - bloch(&rho, "Z")).abs() < 1e-12);
    }

    #[test]
    fn full_dephasing_reflects_witness(l in 0.0..=1.0f64) {
        // λ and 1 − λ give opposite witnesses at the pre-measurement insertion
        let at = InsertionPoint::new(Location::PreMeasure, 2);
        let w = |x: f64| branchlab::constraint::exact_metrics(1, 1.0, Some((&phase_flip(x).unwrap(), at)), None).unwrap().w_x;
        prop_assert!((w(l) + w(1.0 - l)).abs() < 1e-9);
    }

    #[test]
    fn lambda_estimate_inverts_prediction(w0 in prop_oneof![-1.0..-0.05f64, 0.05..1.0f64], l in 0.0..=1.0f64) {
        let w = first_order_prediction(w0, l);
        prop_assert!((lambda_est(w, w0).unwrap() - l).abs() < 1e-12);
    }

    #[test]
    fn threshold_monotone_in_band(small in 0.0..0.2f64, extra in 0.0..0.2f64) {
        let sweep = linear_sweep();
        let t_small = detectability_threshold(&sweep, &UncertaintyBand::uniform(small)).unwrap();
        let t_large = detectability_threshold(&sweep, &UncertaintyBand::uniform(small + extra)).unwrap();
        let key = |t: Option<f64>| t.unwrap_or(f64::INFINITY);
        prop_assert!(key(t_small.lambda_max) <= key(t_large.lambda_max));
    }

    #[test]
    fn parity_bounded(tallies in prop::collection::vec(0u64..1000, 4).prop_filter("no shots", |v| v.iter().sum::<u64>() > 0)) {
        let keys = ["00", "01", "10", "11"];
        let counts = branchlab::sampler::Counts::from_entries(
            vec![0, 1],
            keys.iter().map(|k| k.to_string()).zip(tallies.iter().copied()),
        ).unwrap();
        let w = parity_witness(&counts).unwrap();
        prop_assert!(w.value.abs() <= 1.0);
        prop_assert!(w.error >= 0.0);
    }

    #[test]
    fn magnitude_symmetric_and_nonnegative(x in -1.0..=1.0f64, y in -1.0..=1.0f64, ex in 0.0..0.1f64, ey in 0.0..0.1f64) {
        let wx = WitnessResult { kind: MetricKind::WX, value: x, error: ex, shots_used: 100 };
        let wy = WitnessResult { kind: MetricKind::WY, value: y, error: ey, shots_used: 100 };
        let c = coherence_magnitude(&wx, &wy).unwrap();
        let flipped = coherence_magnitude(
            &WitnessResult { value: -x, ..wx },
            &WitnessResult { value: -y, ..wy },
        ).unwrap();
        prop_assert!(c.value >= 0.0 && c.value <= 2f64.sqrt() + 1e-12);
        prop_assert!((c.value - flipped.value).abs() < 1e-15);
        prop_assert!((c.error - flipped.error).abs() < 1e-15);
    }

    #[test]
    fn marginalize_conserves_shots(seed in any::<u64>(), shots in 1u64..5000) {
        let probs = [0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.15, 0.05];
        let counts = SeededSampler::new(seed).sample_counts(&probs, &[0, 1, 2], shots).unwrap();
        for keep in [vec![0], vec![2, 0], vec![1, 2]] {
            let m = marginalize(&counts, &keep).unwrap();
            prop_assert_eq!(m.total_shots(), shots);
            prop_assert_eq!(m.table().values().sum::<u64>(), shots);
        }
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>()) {
        let probs = [0.25, 0.25, 0.5, 0.0];
        let a = SeededSampler::new(seed).sample_counts(&probs, &[3, 4], 500).unwrap();
        let b = SeededSampler::new(seed).sample_counts(&probs, &[3, 4], 500).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn manifest_verifies_freshly_written_files(
        files in prop::collection::btree_map("[a-z]{1,8}", prop::collection::vec(any::<u8>(), 0..64), 1..6)
    ) {
        let dir = tempfile::tempdir().unwrap();
        for (name, bytes) in &files {
            std::fs::write(dir.path().join(format!("{name}.bin")), bytes).unwrap();
        }
        let m = build_manifest(dir.path()).unwrap();
        prop_assert_eq!(m.entries.len(), files.len());
        prop_assert!(verify_manifest(dir.path(), &m).unwrap().ok);
    }

    #[test]
    fn deviation_grows_with_strength(a in 0.0..0.5f64, b in 0.0..0.5f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at = InsertionPoint::new(Location::PostTransfer, 2);
        let dev = |l: f64| {
            let m = branchlab::constraint::exact_metrics(1, 1.0, Some((&phase_flip(l).unwrap(), at)), None).unwrap();
            (1.0 - m.w_x).abs()
        };
        prop_assert!(dev(lo) <= dev(hi) + 1e-12);
    }

    #[test]
    fn mask_controls_two_qubit_count(bits in prop::collection::vec(any::<bool>(), 1..=6)) {
        prop_assume!(bits.iter().any(|&b| b));
        let ones = bits.iter().filter(|&&b| b).count();
        let (c, _) = build_branch_transfer(bits.len(), 1.0, &BranchMask::new(bits)).unwrap();
        prop_assert_eq!(circuit_stats(&c).two_qubit_count, ones + 4);
    }
}

fn linear_sweep() -> SweepResult {
    let baseline = MetricValues::new(1.0, 1.0, -1.0);
    SweepResult {
        channel_family_id: ChannelFamily::PhaseFlip,
        insertion: InsertionPoint::new(Location::PreMeasure, 2),
        baseline,
        points: (0..=10)
            .map(|i| {
                let lambda = i as f64 / 20.0;
                let f = 1.0 - 2.0 * lambda;
                SweepPoint {
                    lambda,
                    predicted: MetricValues::new(1.0, f, -f),
                }
            })
            .collect(),
        k_sigma: 2.0,
    }
}

#[test]
fn threshold_is_infinite_when_band_covers_everything() {
    let t = detectability_threshold(&linear_sweep(), &UncertaintyBand::uniform(10.0)).unwrap();
    assert_eq!(t.lambda_max, None);
}
