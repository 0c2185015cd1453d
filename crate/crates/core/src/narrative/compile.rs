//! Narrative runtime file: a versioned, engine-neutral JSON document.
//!
//! The file embeds the whole graph (nodes, edges, triggers, knowledge
//! items, guidance paths) under a `schema_version` and is byte-identical
//! across runs for the same graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{has_errors, Diagnostic};

use super::{validate_graph, NarrativeGraph};

/// Version of the narrative runtime schema.
pub const NARRATIVE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum NarrativeCompileError {
    #[error("narrative graph has {} error diagnostic(s); refusing to compile", .0.iter().filter(|d| d.is_error()).count())]
    Invalid(Vec<Diagnostic>),
    #[error("malformed narrative file: {0}")]
    Malformed(String),
    #[error("unsupported narrative schema version {0}")]
    UnsupportedVersion(u32),
}

#[derive(Serialize)]
struct NarrativeFileRef<'a> {
    schema_version: u32,
    graph: &'a NarrativeGraph,
}

#[derive(Deserialize)]
struct NarrativeFileOwned {
    schema_version: u32,
    graph: NarrativeGraph,
}

/// Serialize a validated graph to runtime-file bytes. Graphs carrying any
/// `Error` diagnostic are refused with those diagnostics attached.
pub fn compile_narrative(g: &NarrativeGraph) -> Result<Vec<u8>, NarrativeCompileError> {
    let diags = validate_graph(g);
    if has_errors(&diags) {
        return Err(NarrativeCompileError::Invalid(diags));
    }
    let file = NarrativeFileRef { schema_version: NARRATIVE_SCHEMA_VERSION, graph: g };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("narrative graph serializes");
    bytes.push(b'\n');
    Ok(bytes)
}

/// Load a runtime file back into a graph.
pub fn load_narrative(bytes: &[u8]) -> Result<NarrativeGraph, NarrativeCompileError> {
    let file: NarrativeFileOwned = serde_json::from_slice(bytes)
        .map_err(|e| NarrativeCompileError::Malformed(e.to_string()))?;
    if file.schema_version != NARRATIVE_SCHEMA_VERSION {
        return Err(NarrativeCompileError::UnsupportedVersion(file.schema_version));
    }
    Ok(file.graph)
}
