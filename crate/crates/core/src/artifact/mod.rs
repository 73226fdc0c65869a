//! Result artifacts with provenance, auxiliary documents, and SHA256 manifests.

mod canonical;
mod documents;
mod manifest;
mod result;

pub use canonical::{format_float, read_document, to_canonical_string, write_document};
pub use documents::{
    csv_sibling, ConstraintArtifact, MetricsSummary, ScalingArtifact, ScalingRow, SourceRef, SweepArtifact,
};
pub use manifest::{
    build_manifest, build_manifest_excluding, verify_manifest, verify_manifest_excluding, Manifest, VerifyReport,
    MANIFEST_FILE_NAME,
};
pub use result::{
    mask_timestamps, read_result_artifact, sha256_hex, timestamp_utc, write_result_artifact, Provenance,
    ResultArtifact, ARTIFACT_MODES, MASKED_TIMESTAMP, SCHEMA_VERSION, TOOL_VERSION,
};
