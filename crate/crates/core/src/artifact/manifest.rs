use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::canonical::{read_document, write_document};
use super::result::{is_digest, sha256_hex, timestamp_utc, SCHEMA_VERSION};
use crate::error::{Error, Result};

/// Default manifest file name; skipped when it sits at the top of the hashed directory.
pub const MANIFEST_FILE_NAME: &str = "MANIFEST.json";

/// SHA256 digests of every file under a directory, keyed by
/// forward-slash relative path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: u32,
    pub created_utc: String,
    pub entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::parse("schema", format!("unsupported version {}", self.schema)));
        }
        for (path, digest) in &self.entries {
            if !is_digest(digest) {
                return Err(Error::parse(format!("entries.{path}"), "not a lowercase SHA256 hex digest"));
            }
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        self.validate()?;
        write_document(self, path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let m: Manifest = read_document(path, "manifest")?;
        m.validate()?;
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub mismatches: Vec<String>,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

/// Hashes every file under `dir` except a top-level `MANIFEST.json`.
pub fn build_manifest(dir: &Path) -> Result<Manifest> {
    build_manifest_excluding(dir, Some(&dir.join(MANIFEST_FILE_NAME)))
}

/// Like [`build_manifest`], skipping `exclude` instead of the default name.
pub fn build_manifest_excluding(dir: &Path, exclude: Option<&Path>) -> Result<Manifest> {
    Ok(Manifest {
        schema: SCHEMA_VERSION,
        created_utc: timestamp_utc(),
        entries: hash_tree(dir, exclude)?,
    })
}

fn hash_tree(dir: &Path, exclude: Option<&Path>) -> Result<BTreeMap<String, String>> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let exclude = exclude.and_then(|p| fs::canonicalize(p).ok());
    let mut entries = BTreeMap::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| dir.to_path_buf());
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        if let Some(skip) = &exclude {
            if fs::canonicalize(entry.path()).ok().as_ref() == Some(skip) {
                continue;
            }
        }
        let bytes = fs::read(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        entries.insert(relative_key(dir, entry.path()), sha256_hex(&bytes));
    }
    Ok(entries)
}

fn relative_key(root: &Path, path: &Path) -> String {
    let rel: PathBuf = path.strip_prefix(root).unwrap_or(path).to_path_buf();
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

/// Compares `dir` against `manifest`, skipping a top-level `MANIFEST.json`.
pub fn verify_manifest(dir: &Path, manifest: &Manifest) -> Result<VerifyReport> {
    verify_manifest_excluding(dir, manifest, Some(&dir.join(MANIFEST_FILE_NAME)))
}

pub fn verify_manifest_excluding(dir: &Path, manifest: &Manifest, exclude: Option<&Path>) -> Result<VerifyReport> {
    let current = hash_tree(dir, exclude)?;
    let mut report = VerifyReport::default();
    for (path, digest) in &manifest.entries {
        match current.get(path) {
            None => report.missing.push(path.clone()),
            Some(d) if d != digest => report.mismatches.push(path.clone()),
            Some(_) => {}
        }
    }
    report.extra = current
        .keys()
        .filter(|p| !manifest.entries.contains_key(*p))
        .cloned()
        .collect();
    report.ok = report.mismatches.is_empty() && report.missing.is_empty() && report.extra.is_empty();
    Ok(report)
}
