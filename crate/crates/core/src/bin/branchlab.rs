//! Command-line front end. Every subcommand writes a canonical JSON document.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use branchlab::artifact::{
    build_manifest_excluding, read_document, verify_manifest_excluding, write_document, write_result_artifact,
    Manifest, SweepArtifact, MANIFEST_FILE_NAME,
};
use branchlab::circuit::{MeasurementMode, Register};
use branchlab::constraint::{parse_grid, ChannelFamily, DEFAULT_K_SIGMA};
use branchlab::noise::Location;
use branchlab::pipeline::{self, Dephasing, RunConfig};
use branchlab::sampler::DEFAULT_SEED;
use branchlab::{Error, Result};

#[derive(Parser)]
#[command(name = "branchlab", version, about = "Branch-transfer circuit simulation and witness analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate and sample one measurement mode.
    Run(RunArgs),
    /// Exact ideal metrics (no sampling).
    Ideal {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predicted metric curves over a grid of channel strengths.
    Sweep(SweepArgs),
    /// Uncertainty bands, detectability threshold and closed-form estimates.
    Constrain {
        #[arg(long)]
        sweep: PathBuf,
        #[arg(long)]
        hardware: PathBuf,
        #[arg(long)]
        noisy_sim: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_K_SIGMA)]
        k_sigma: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Merge result artifacts into a metrics summary.
    Analyze {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Circuit statistics and ideal witnesses for k = 1..=k-max.
    Scaling {
        #[arg(long)]
        k_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build or verify a SHA256 manifest.
    Manifest {
        #[command(subcommand)]
        action: ManifestAction,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse::<MeasurementMode>)]
    mode: MeasurementMode,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 20_000)]
    shots: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Calibration snapshot file.
    #[arg(long)]
    noise: Option<PathBuf>,
    /// Phase-flip strength inserted at --at on --on.
    #[arg(long, requires_all = ["at", "on"])]
    dephase: Option<f64>,
    #[arg(long, value_parser = parse::<Location>)]
    at: Option<Location>,
    #[arg(long, value_parser = parse::<Register>)]
    on: Option<Register>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse::<ChannelFamily>, default_value = "phase-flip")]
    family: ChannelFamily,
    #[arg(long, value_parser = parse::<Location>)]
    at: Location,
    #[arg(long, value_parser = parse::<Register>)]
    on: Register,
    /// START:STOP:STEP, inclusive.
    #[arg(long)]
    lambdas: String,
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ManifestAction {
    Build {
        #[arg(long)]
        dir: PathBuf,
        /// Defaults to DIR/MANIFEST.json.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => {
            let noise = args.noise.as_deref().map(pipeline::load_noise).transpose()?;
            let dephasing = match (args.dephase, args.at, args.on) {
                (Some(lambda), Some(location), Some(register)) => Some(Dephasing {
                    lambda,
                    location,
                    register,
                }),
                _ => None,
            };
            let cfg = RunConfig {
                mode: args.mode,
                k: args.k,
                mu: args.mu,
                shots: args.shots,
                seed: args.seed,
                noise,
                dephasing,
            };
            let artifact = pipeline::run_experiment(&cfg)?;
            write_result_artifact(&artifact, &args.out)?;
            for (kind, m) in &artifact.metrics {
                println!("{kind} = {:.4} ± {:.4} ({} shots)", m.value, m.error.unwrap_or(0.0), m.shots);
            }
        }
        Command::Ideal { k, mu, out } => {
            let artifact = pipeline::ideal_artifact(k, mu)?;
            write_result_artifact(&artifact, &out)?;
            for (kind, m) in &artifact.metrics {
                println!("{kind} = {:.4}", m.value);
            }
        }
        Command::Sweep(args) => {
            let noise = args.noise.as_deref().map(pipeline::load_noise).transpose()?;
            let grid = parse_grid(&args.lambdas)?;
            let artifact =
                pipeline::sweep_artifact(args.k, args.mu, args.family, args.at, args.on, &grid, noise.as_ref())?;
            write_document(&artifact, &args.out)?;
            artifact.write_csv(&args.out)?;
            println!("{} points written to {}", artifact.sweep.points.len(), args.out.display());
        }
        Command::Constrain {
            sweep,
            hardware,
            noisy_sim,
            k_sigma,
            out,
        } => {
            let sweep: SweepArtifact = read_document(&sweep, "sweep artifact")?;
            let observed = pipeline::load_metrics(&hardware)?;
            let sim = noisy_sim.as_deref().map(pipeline::load_metrics).transpose()?;
            let artifact = pipeline::constrain_artifact(&sweep.sweep, observed, sim, k_sigma)?;
            write_document(&artifact, &out)?;
            let report = &artifact.report;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            match (report.threshold.lambda_max, report.threshold.deciding_metric) {
                (Some(l), Some(m)) => println!("lambda_max = {l} (decided by {m})"),
                _ => println!("lambda_max = inf (nothing detectable on the grid)"),
            }
            for (kind, est) in &report.lambda_est {
                if let Some(e) = est {
                    println!("lambda_est[{kind}] = {e:.4}");
                }
            }
        }
        Command::Analyze { inputs, out } => {
            let summary = pipeline::analyze(&inputs)?;
            write_document(&summary, &out)?;
            for (kind, m) in &summary.metrics {
                println!("{kind} = {:.4} ± {:.4}", m.value, m.error.unwrap_or(0.0));
            }
        }
        Command::Scaling { k_max, out } => {
            let artifact = pipeline::scaling_artifact(k_max)?;
            write_document(&artifact, &out)?;
            artifact.write_csv(&out)?;
            for r in &artifact.rows {
                println!(
                    "k={} depth={} 2q={} W_X={:.4} W_Y={:.4}",
                    r.k, r.stats.depth, r.stats.two_qubit_count, r.ideal.w_x, r.ideal.w_y
                );
            }
        }
        Command::Manifest { action } => return manifest(action),
    }
    Ok(ExitCode::SUCCESS)
}

fn manifest_path(dir: &Path, manifest: Option<PathBuf>) -> PathBuf {
    manifest.unwrap_or_else(|| dir.join(MANIFEST_FILE_NAME))
}

fn manifest(action: ManifestAction) -> Result<ExitCode> {
    match action {
        ManifestAction::Build { dir, manifest } => {
            let path = manifest_path(&dir, manifest);
            let m = build_manifest_excluding(&dir, Some(&path))?;
            m.write(&path)?;
            println!("{} entries written to {}", m.entries.len(), path.display());
            Ok(ExitCode::SUCCESS)
        }
        ManifestAction::Verify { dir, manifest } => {
            let path = manifest_path(&dir, manifest);
            let m = Manifest::read(&path)?;
            let report = verify_manifest_excluding(&dir, &m, Some(&path))?;
            for p in &report.mismatches {
                println!("mismatch: {p}");
            }
            for p in &report.missing {
                println!("missing: {p}");
            }
            for p in &report.extra {
                println!("extra: {p}");
            }
            if report.ok {
                println!("ok: {} entries verified", m.entries.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
