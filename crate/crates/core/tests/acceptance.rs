//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fail.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use branchlab::artifact::{
    mask_timestamps, read_document, read_result_artifact, ConstraintArtifact, MetricsSummary, ScalingArtifact,
    SCHEMA_VERSION,
};
use branchlab::circuit::{run_statevector, Circuit, GateKind, MeasurementMode, Register};
use branchlab::constraint::{deviation_curves, exact_metrics, lambda_est, parse_grid, ChannelFamily};
use branchlab::noise::{
    apply_channel, depolarizing, phase_flip, run_density, InsertionPoint, Location,
};
use branchlab::pipeline::{run_experiment, sweep_artifact, Dephasing, RunConfig};
use branchlab::qsim::{DensityMatrix, Pauli, PauliString, QuantumState, StateVector};
use branchlab::witness::{coherence_magnitude, parity_error, MetricKind, MetricRecord, WitnessResult};

use num_complex::Complex64;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || format!("{label}: got {got}, want {want} (tol {tol})"))
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn branchlab(args: &[&str]) -> std::result::Result<Output, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_branchlab"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    Ok(out)
}

fn branchlab_ok(args: &[&str]) -> std::result::Result<Output, String> {
    let out = branchlab(args)?;
    ensure(out.status.success(), || {
        format!(
            "`branchlab {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out)
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Check {
    ensure(elapsed < limit, || format!("{label} took {elapsed:?}, limit {limit:?}"))
}

// 1
fn ideal_column(tmp: &Path) -> Check {
    let out = tmp.join("ideal.json");
    let start = Instant::now();
    branchlab_ok(&["ideal", "--k", "1", "--mu", "1", "--out", path_str(&out)])?;
    within("ideal", start.elapsed(), Duration::from_secs(1))?;
    let artifact = ok(read_result_artifact(&out))?;
    let want = [
        (MetricKind::V, 1.0),
        (MetricKind::WX, 1.0),
        (MetricKind::WY, -1.0),
        (MetricKind::CMag, 2f64.sqrt()),
    ];
    for (kind, value) in want {
        let got = artifact.metrics.get(&kind).ok_or_else(|| format!("{kind} missing"))?;
        close(kind.as_str(), got.value, value, 1e-9)?;
        ensure(format!("{:.4}", got.value.abs()) == format!("{:.4}", value.abs()), || {
            format!("{kind} prints as {:.4}", got.value)
        })?;
    }
    Ok(())
}

// 2
fn error_formulas(_: &Path) -> Check {
    let n = 20_000;
    let ex = parity_error(0.8398, n);
    let ey = parity_error(-0.8107, n);
    ensure(format!("{ex:.4}") == "0.0038", || format!("W_X error {ex}"))?;
    ensure(format!("{ey:.4}") == "0.0041", || format!("W_Y error {ey}"))?;
    let wx = WitnessResult {
        kind: MetricKind::WX,
        value: 0.8398,
        error: ex,
        shots_used: n,
    };
    let wy = WitnessResult {
        kind: MetricKind::WY,
        value: -0.8107,
        error: ey,
        shots_used: n,
    };
    let c = ok(coherence_magnitude(&wx, &wy))?;
    ensure(format!("{:.4}", c.value) == "1.1673", || format!("C_mag {}", c.value))?;
    ensure(format!("{:.4}", c.error) == "0.0040", || format!("C_mag error {}", c.error))
}

// 3
fn worked_dephasing_estimate(tmp: &Path) -> Check {
    let sweep = tmp.join("sweep_pre.json");
    branchlab_ok(&[
        "sweep", "--family", "phase-flip", "--at", "pre-measure", "--on", "f", "--lambdas", "0:0.5:0.05", "--k", "1",
        "--mu", "1", "--out", path_str(&sweep),
    ])?;
    let hardware = tmp.join("hardware.json");
    let summary = MetricsSummary {
        schema: SCHEMA_VERSION,
        metrics: BTreeMap::from([
            (MetricKind::V, record(0.8771, 0.0034)),
            (MetricKind::WX, record(0.8398, 0.0038)),
            (MetricKind::WY, record(-0.8107, 0.0041)),
            (MetricKind::CMag, record(1.1673, 0.0040)),
        ]),
        sources: Vec::new(),
        provenance: None,
    };
    ok(branchlab::artifact::write_document(&summary, &hardware))?;
    let out = tmp.join("constraint.json");
    branchlab_ok(&[
        "constrain", "--sweep", path_str(&sweep), "--hardware", path_str(&hardware), "--k-sigma", "2", "--out",
        path_str(&out),
    ])?;
    let artifact: ConstraintArtifact = ok(read_document(&out, "constraint artifact"))?;
    let est = artifact
        .report
        .lambda_est
        .get(&MetricKind::WX)
        .copied()
        .flatten()
        .ok_or("no W_X estimate")?;
    close("lambda_est", est, 0.0801, 1e-4)?;
    ensure(format!("{est:.3}") == "0.080", || format!("lambda_est prints as {est:.3}"))?;
    close("direct lambda_est", ok(lambda_est(0.8398, 1.0))?, 0.0801, 1e-4)
}

fn record(value: f64, error: f64) -> MetricRecord {
    MetricRecord {
        value,
        error: Some(error),
        shots: 20_000,
    }
}

// 4
fn attenuation_law(_: &Path) -> Check {
    let start = Instant::now();
    let grid = ok(parse_grid("0:0.5:0.05"))?;
    ensure(grid.len() == 11, || format!("grid has {} points", grid.len()))?;
    let artifact = ok(sweep_artifact(1, 1.0, ChannelFamily::PhaseFlip, Location::PreMeasure, Register::F(0), &grid, None))?;
    let w0 = artifact.sweep.baseline.w_x;
    for p in &artifact.sweep.points {
        close(&format!("W_X({})", p.lambda), p.predicted.w_x, (1.0 - 2.0 * p.lambda) * w0, 1e-9)?;
    }
    within("sweep", start.elapsed(), Duration::from_secs(10))
}

// 5
fn visibility_insensitive(_: &Path) -> Check {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let at = InsertionPoint::new(Location::PostBranch, 2);
    let sweep = ok(deviation_curves(1, 1.0, ChannelFamily::PhaseFlip, at, &grid, None))?;
    for p in &sweep.points {
        close(&format!("V({})", p.lambda), p.predicted.v, 1.0, 1e-9)?;
    }
    Ok(())
}

// 6
fn sampling_consistency(_: &Path) -> Check {
    let shots = 20_000;
    let wx = ok(run_experiment(&RunConfig::new(MeasurementMode::CoherenceX, 1, 1.0, shots)))?;
    let v = ok(run_experiment(&RunConfig::new(MeasurementMode::RpZ, 1, 1.0, shots)))?;
    ensure(wx.metrics[&MetricKind::WX].value == 1.0, || "sampled ideal W_X != 1".into())?;
    ensure(v.metrics[&MetricKind::V].value == 1.0, || "sampled ideal V != 1".into())?;

    let dephasing = Dephasing {
        lambda: 0.1,
        location: Location::PreMeasure,
        register: Register::F(0),
    };
    let ch = ok(phase_flip(0.1))?;
    let exact = ok(exact_metrics(1, 1.0, Some((&ch, InsertionPoint::new(Location::PreMeasure, 2))), None))?.w_x;
    let sigma = parity_error(exact, shots);
    for i in 0..100u64 {
        let mut cfg = RunConfig::new(MeasurementMode::CoherenceX, 1, 1.0, shots);
        cfg.seed = 1_000 + i;
        cfg.dephasing = Some(dephasing);
        let got = ok(run_experiment(&cfg))?.metrics[&MetricKind::WX].value;
        ensure((got - exact).abs() <= 5.0 * sigma, || {
            format!("seed {}: W_X {got} vs exact {exact} (sigma {sigma})", cfg.seed)
        })?;
    }
    Ok(())
}

// 7
fn oracle_equivalence(_: &Path) -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    for trial in 0..50 {
        let n = rng.random_range(1..=5);
        let mut c = Circuit::new(n);
        for _ in 0..rng.random_range(0..=30) {
            let gate = match rng.random_range(0..4) {
                0 => GateKind::H,
                1 => GateKind::X,
                2 => GateKind::Sdg,
                _ => GateKind::Cx,
            };
            if gate == GateKind::Cx && n < 2 {
                continue;
            }
            let a = rng.random_range(0..n);
            let targets = if gate == GateKind::Cx {
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                vec![a, b]
            } else {
                vec![a]
            };
            ok(c.push(gate, &targets))?;
        }
        let sv = ok(run_statevector(&c))?;
        let dm = ok(run_density(&c, None))?;
        let projector = ok(DensityMatrix::from_state(&sv))?;
        for (i, (a, b)) in dm.entries().iter().zip(projector.entries()).enumerate() {
            ensure((a - b).norm() <= 1e-9, || format!("circuit {trial}: entry {i} differs by {}", (a - b).norm()))?;
        }
        for _ in 0..5 {
            let p = PauliString::new((0..n).map(|_| letters[rng.random_range(0..4)]).collect());
            let es = ok(sv.expectation_pauli(&p))?;
            let ed = ok(dm.expectation_pauli(&p))?;
            close(&format!("circuit {trial}: <{p}>"), es, ed, 1e-9)?;
        }
    }
    Ok(())
}

fn random_qubit(rng: &mut StdRng) -> std::result::Result<DensityMatrix, String> {
    let mut amps: Vec<Complex64> = (0..2)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    ok(DensityMatrix::from_state(&ok(StateVector::from_amplitudes(1, amps))?))
}

// 8
fn channel_algebra(_: &Path) -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..100 {
        let lambda: f64 = rng.random_range(0.0..=1.0);
        let p: f64 = rng.random_range(0.0..=1.0);
        for ch in [ok(phase_flip(lambda))?, ok(depolarizing(p, 1))?, ok(depolarizing(p, 2))?] {
            ensure(ch.completeness_deviation() <= 1e-10, || {
                format!("{}: completeness off by {}", ch.label(), ch.completeness_deviation())
            })?;
        }
    }
    for _ in 0..100 {
        let a: f64 = rng.random_range(0.0..=1.0);
        let b: f64 = rng.random_range(0.0..=1.0);
        let rho = random_qubit(&mut rng)?;
        let twice = ok(apply_channel(&ok(apply_channel(&rho, &ok(phase_flip(a))?, &[0]))?, &ok(phase_flip(b))?, &[0]))?;
        let once = ok(apply_channel(&rho, &ok(phase_flip(a + b - 2.0 * a * b))?, &[0]))?;
        for (x, y) in twice.entries().iter().zip(once.entries()) {
            ensure((x - y).norm() <= 1e-9, || format!("composition fails for ({a}, {b})"))?;
        }
    }
    Ok(())
}

// 9
fn scaling_benchmark(tmp: &Path) -> Check {
    let out = tmp.join("scaling.json");
    let start = Instant::now();
    branchlab_ok(&["scaling", "--k-max", "6", "--out", path_str(&out)])?;
    within("scaling", start.elapsed(), Duration::from_secs(30))?;
    let artifact: ScalingArtifact = ok(read_document(&out, "scaling artifact"))?;
    ensure(artifact.rows.len() == 6, || format!("{} rows", artifact.rows.len()))?;
    for row in &artifact.rows {
        ensure(row.stats.two_qubit_count == row.k + 4, || {
            format!("k={}: two_qubit_count {}", row.k, row.stats.two_qubit_count)
        })?;
        close(&format!("k={} W_X", row.k), row.ideal.w_x, 1.0, 1e-9)?;
    }
    ensure(out.with_extension("csv").exists(), || "CSV sibling missing".into())
}

fn pipeline(dir: &Path) -> Check {
    fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for mode in ["coherence-x", "coherence-y", "rp-z"] {
        let out = dir.join(format!("run_{mode}.json"));
        branchlab_ok(&[
            "run", "--mode", mode, "--k", "1", "--mu", "1", "--shots", "20000", "--seed", "20000", "--dephase", "0.08",
            "--at", "pre-measure", "--on", "f", "--out", path_str(&out),
        ])?;
        runs.push(out);
    }
    let mut args = vec!["analyze", "--inputs"];
    args.extend(runs.iter().map(|p| path_str(p)));
    let summary = dir.join("summary.json");
    args.extend(["--out", path_str(&summary)]);
    branchlab_ok(&args)?;
    branchlab_ok(&["manifest", "build", "--dir", path_str(dir)])?;
    branchlab_ok(&["manifest", "verify", "--dir", path_str(dir)])?;
    Ok(())
}

fn files(dir: &Path) -> std::result::Result<Vec<PathBuf>, String> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    v.sort();
    Ok(v)
}

// 10
fn reproducibility(tmp: &Path) -> Check {
    let (a, b) = (tmp.join("repro_a"), tmp.join("repro_b"));
    pipeline(&a)?;
    pipeline(&b)?;
    let (fa, fb) = (files(&a)?, files(&b)?);
    ensure(fa.iter().map(|p| p.file_name()).eq(fb.iter().map(|p| p.file_name())), || {
        "artifact sets differ".into()
    })?;
    for (pa, pb) in fa.iter().zip(&fb) {
        let ta = fs::read_to_string(pa).map_err(|e| e.to_string())?;
        let tb = fs::read_to_string(pb).map_err(|e| e.to_string())?;
        if pa.extension().is_some_and(|e| e == "json") {
            ensure(ok(mask_timestamps(&ta))? == ok(mask_timestamps(&tb))?, || {
                format!("{} differs between runs", pa.display())
            })?;
        }
        ensure(ta == tb, || format!("{} not byte-identical", pa.display()))?;
    }

    let target = a.join("run_rp-z.json");
    let mut bytes = fs::read(&target).map_err(|e| e.to_string())?;
    let i = bytes.iter().position(|&c| c == b'5').ok_or("no byte to mutate")?;
    bytes[i] = b'6';
    fs::write(&target, bytes).map_err(|e| e.to_string())?;
    let out = branchlab(&["manifest", "verify", "--dir", path_str(&a)])?;
    ensure(!out.status.success(), || "verification passed after mutation".into())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(stdout.contains("run_rp-z.json"), || format!("failure does not name the file: {stdout}"))
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let criteria: [(&str, fn(&Path) -> Check); 10] = [
        ("ideal column reproduced", ideal_column),
        ("error formulas match reported uncertainties", error_formulas),
        ("worked dephasing estimate", worked_dephasing_estimate),
        ("exact attenuation law before measurement", attenuation_law),
        ("visibility blind to post-branch dephasing", visibility_insensitive),
        ("sampling consistency", sampling_consistency),
        ("density matrix matches statevector oracle", oracle_equivalence),
        ("channel completeness and composition", channel_algebra),
        ("scaling benchmark", scaling_benchmark),
        ("pipeline reproducibility and tamper detection", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check(tmp.path()) {
            Ok(()) => println!("PASS {:>2} {name} ({:.2?})", i + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
