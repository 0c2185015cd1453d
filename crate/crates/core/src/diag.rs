//! Compiler diagnostics: severity, stable codes, and source locations.
//!
//! Diagnostics are values, not errors. Parsing and validation return them in
//! lists; an `Error` severity anywhere in the list means the manifest is not
//! compilable and no outputs may be written.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Severity of a [`Diagnostic`]. `Error` aborts compilation before emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => write!(f, "WARNING"),
            Severity::Error => write!(f, "ERROR"),
        }
    }
}

/// Position inside a manifest document. Line and column are 1-based;
/// the column counts bytes from the start of the line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub path: String,
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.path, self.line, self.column)
    }
}

/// One finding from parsing or validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: code.to_string(),
            message: message.into(),
            location: None,
        }
    }

    pub fn warning(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code: code.to_string(),
            message: message.into(),
            location: None,
        }
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn at_opt(mut self, location: Option<Location>) -> Self {
        self.location = location;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Line-oriented, machine-greppable form: `LEVEL CODE path:line:col message`.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{} {} {} {}", self.severity, self.code, loc, self.message),
            None => write!(f, "{} {} {}", self.severity, self.code, self.message),
        }
    }
}

/// True if any diagnostic in the slice is an error.
pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Stable diagnostic codes emitted by the compiler.
pub mod codes {
    pub const SYNTAX: &str = "SYNTAX";
    pub const UNKNOWN_FIELD: &str = "UNKNOWN_FIELD";
    pub const MISSING_FIELD: &str = "MISSING_FIELD";
    pub const INVALID_VALUE: &str = "INVALID_VALUE";
    pub const UNSUPPORTED_SCHEMA_VERSION: &str = "UNSUPPORTED_SCHEMA_VERSION";

    pub const DUPLICATE_ID: &str = "DUPLICATE_ID";
    pub const UNRESOLVED_SOURCE: &str = "UNRESOLVED_SOURCE";
    pub const MASK_OUT_OF_BOUNDS: &str = "MASK_OUT_OF_BOUNDS";
    pub const MASK_NOT_SIMPLE: &str = "MASK_NOT_SIMPLE";
    pub const MASK_DEGENERATE: &str = "MASK_DEGENERATE";
    pub const EFFECTS_ON_SKYBAND: &str = "EFFECTS_ON_SKYBAND";
    pub const SKYBOX_ON_PANORAMA: &str = "SKYBOX_ON_PANORAMA";
    pub const MISSING_SKYBOX: &str = "MISSING_SKYBOX";
    pub const MISSING_PANORAMA: &str = "MISSING_PANORAMA";
    pub const SOURCE_SIZE_MISMATCH: &str = "SOURCE_SIZE_MISMATCH";

    pub const DEGENERATE_MASK: &str = "DEGENERATE_MASK";
    pub const CLIP_TOO_LARGE: &str = "CLIP_TOO_LARGE";

    pub const DEGENERATE_VIEW: &str = "DEGENERATE_VIEW";
    pub const BEHIND_CAMERA: &str = "BEHIND_CAMERA";
    pub const MISSING_HORIZON: &str = "MISSING_HORIZON";
    pub const PROJECTION_MISMATCH: &str = "PROJECTION_MISMATCH";

    pub const MISSING_START: &str = "MISSING_START";
    pub const MISSING_TERMINAL: &str = "MISSING_TERMINAL";
    pub const DANGLING_EDGE_ENDPOINT: &str = "DANGLING_EDGE_ENDPOINT";
    pub const DANGLING_TRIGGER_TARGET: &str = "DANGLING_TRIGGER_TARGET";
    pub const TRIGGER_KIND_MISMATCH: &str = "TRIGGER_KIND_MISMATCH";
    pub const INVALID_EDGE_TRIGGER: &str = "INVALID_EDGE_TRIGGER";
    pub const UNREACHABLE_NODE: &str = "UNREACHABLE_NODE";
    pub const NO_TERMINAL_PATH: &str = "NO_TERMINAL_PATH";
    pub const ITEM_NEVER_DELIVERED: &str = "ITEM_NEVER_DELIVERED";
    pub const GUIDANCE_GAP: &str = "GUIDANCE_GAP";

    pub const UNBOUND_TARGET: &str = "UNBOUND_TARGET";
    pub const UNRESOLVED_SPEAKER: &str = "UNRESOLVED_SPEAKER";

    pub const MINMAX_MISMATCH: &str = "MINMAX_MISMATCH";
    pub const INDEX_OUT_OF_BOUNDS: &str = "INDEX_OUT_OF_BOUNDS";
    pub const UV_OUT_OF_RANGE: &str = "UV_OUT_OF_RANGE";
    pub const BUFFER_SIZE_MISMATCH: &str = "BUFFER_SIZE_MISMATCH";
    pub const MISSING_IMAGE: &str = "MISSING_IMAGE";
    pub const MALFORMED_GLTF: &str = "MALFORMED_GLTF";
}
