// Write result artifacts, hash them into a manifest, then detect tampering.

use branchlab::artifact::{build_manifest, verify_manifest, write_result_artifact, MANIFEST_FILE_NAME};
use branchlab::circuit::MeasurementMode;
use branchlab::pipeline::{run_experiment, RunConfig};

pub fn run() -> branchlab::Result<()> {
    let dir = std::env::temp_dir().join(format!("branchlab-manifest-{}", std::process::id()));
    for mode in [MeasurementMode::CoherenceX, MeasurementMode::RpZ] {
        let a = run_experiment(&RunConfig::new(mode, 1, 1.0, 2_000))?;
        write_result_artifact(&a, &dir.join(format!("{}.json", mode.as_str())))?;
    }
    let manifest = build_manifest(&dir)?;
    manifest.write(&dir.join(MANIFEST_FILE_NAME))?;
    for (path, digest) in &manifest.entries {
        println!("{digest}  {path}");
    }
    println!("verify: {:?}", verify_manifest(&dir, &manifest)?);

    let target = dir.join("rp-z.json");
    let mut text = std::fs::read_to_string(&target).map_err(|e| branchlab::Error::Validation(e.to_string()))?;
    text.push('\n');
    std::fs::write(&target, text).map_err(|e| branchlab::Error::Validation(e.to_string()))?;
    let report = verify_manifest(&dir, &manifest)?;
    println!("after edit: ok = {}, mismatches = {:?}", report.ok, report.mismatches);

    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}

fn main() -> branchlab::Result<()> {
    run()
}
