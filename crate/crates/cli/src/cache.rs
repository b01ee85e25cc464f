//! Content-addressed file cache for build artifacts: keyed by the sha256
//! of the canonical experiment-spec JSON, with the stored graph protected
//! by its own content hash. Any mismatch or parse failure is a miss with
//! a warning, never an error.

use crate::commands::ExperimentSpec;
use anyhow::{Context, Result};
use ruliad_core::export::{self, ExportGraph};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    format: String,
    spec: ExperimentSpec,
    content_sha256: String,
    graph: ExportGraph,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn key(spec: &ExperimentSpec) -> String {
    let canonical = serde_json::to_string(spec).expect("spec serializes");
    hex(&Sha256::digest(canonical.as_bytes()))
}

fn path_for(dir: &Path, spec: &ExperimentSpec) -> PathBuf {
    dir.join(format!("{}.json", key(spec)))
}

pub fn get(dir: &Path, spec: &ExperimentSpec) -> Option<ExportGraph> {
    let path = path_for(dir, spec);
    let data = std::fs::read_to_string(&path).ok()?;
    let entry: CacheEntry = match serde_json::from_str(&data) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("warning: ignoring corrupt cache file {}: {err}", path.display());
            return None;
        }
    };
    if entry.spec != *spec {
        eprintln!("warning: cache key collision at {}; recomputing", path.display());
        return None;
    }
    let content = export::to_json(&entry.graph);
    if hex(&Sha256::digest(content.as_bytes())) != entry.content_sha256 {
        eprintln!("warning: cache content hash mismatch at {}; recomputing", path.display());
        return None;
    }
    Some(entry.graph)
}

pub fn put(dir: &Path, spec: &ExperimentSpec, graph: &ExportGraph) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating cache dir {}", dir.display()))?;
    let content = export::to_json(graph);
    let entry = CacheEntry {
        format: export::FORMAT_VERSION.into(),
        spec: spec.clone(),
        content_sha256: hex(&Sha256::digest(content.as_bytes())),
        graph: graph.clone(),
    };
    let path = path_for(dir, spec);
    let data = serde_json::to_string_pretty(&entry)?;
    std::fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
