//! Manifest front end: TOML text to [`SceneManifest`] plus source locations.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::diag::{codes, Diagnostic, Location};
use crate::narrative::{Edge, KnowledgeItem, NarrativeNode, Trigger};

use super::{
    ArchitectureSpec, DynamicEffect, MuralSource, SceneKind, SceneManifest, SliceSpec,
    SkyboxSpec, SCHEMA_VERSION,
};

/// A successfully parsed manifest together with the byte-span table needed
/// to point later diagnostics back into the document.
#[derive(Debug, Clone)]
pub struct ParsedManifest {
    pub manifest: SceneManifest,
    pub locations: LocationTable,
}

/// Maps entity ids back to their defining table's position in the document.
#[derive(Debug, Clone, Default)]
pub struct LocationTable {
    source_name: String,
    line_starts: Vec<usize>,
    sources: BTreeMap<String, usize>,
    slices: BTreeMap<String, usize>,
    architectures: BTreeMap<String, usize>,
    nodes: BTreeMap<String, usize>,
    edges: Vec<usize>,
    items: BTreeMap<String, usize>,
}

impl LocationTable {
    fn new(source_name: &str, text: &str) -> Self {
        let mut line_starts = vec![0usize];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        LocationTable { source_name: source_name.to_string(), line_starts, ..Default::default() }
    }

    fn locate(&self, offset: usize) -> Location {
        let line_idx = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Location {
            path: self.source_name.clone(),
            line: (line_idx + 1) as u32,
            column: (offset - self.line_starts[line_idx] + 1) as u32,
        }
    }

    /// Location of the whole document (line 1).
    pub fn document(&self) -> Location {
        self.locate(0)
    }

    pub fn source(&self, id: &str) -> Option<Location> {
        self.sources.get(id).map(|&o| self.locate(o))
    }
    pub fn slice(&self, id: &str) -> Option<Location> {
        self.slices.get(id).map(|&o| self.locate(o))
    }
    pub fn architecture(&self, id: &str) -> Option<Location> {
        self.architectures.get(id).map(|&o| self.locate(o))
    }
    pub fn node(&self, id: &str) -> Option<Location> {
        self.nodes.get(id).map(|&o| self.locate(o))
    }
    pub fn edge(&self, index: usize) -> Option<Location> {
        self.edges.get(index).map(|&o| self.locate(o))
    }
    pub fn knowledge_item(&self, id: &str) -> Option<Location> {
        self.items.get(id).map(|&o| self.locate(o))
    }

    /// Best-effort location for an id of unknown kind.
    pub fn any(&self, id: &str) -> Option<Location> {
        self.slice(id)
            .or_else(|| self.architecture(id))
            .or_else(|| self.node(id))
            .or_else(|| self.source(id))
            .or_else(|| self.knowledge_item(id))
    }
}

// Mirror of the document schema with spans recorded on each list element.
// The element types are the domain types themselves, so the schema is
// defined exactly once.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    schema_version: u32,
    scene_id: String,
    scene_kind: SceneKind,
    #[serde(default)]
    panorama_image: Option<String>,
    #[serde(default)]
    units: Option<Spanned<String>>,
    #[serde(default)]
    up_axis: Option<Spanned<String>>,
    #[serde(default)]
    sources: Vec<Spanned<MuralSource>>,
    #[serde(default)]
    slices: Vec<Spanned<SliceSpec>>,
    #[serde(default)]
    architectures: Vec<Spanned<ArchitectureSpec>>,
    #[serde(default)]
    skybox: Option<SkyboxSpec>,
    narrative: RawNarrative,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNarrative {
    start_node: String,
    terminal_nodes: Vec<String>,
    #[serde(default)]
    nodes: Vec<Spanned<NarrativeNode>>,
    #[serde(default)]
    edges: Vec<Spanned<Edge>>,
    #[serde(default)]
    knowledge_items: Vec<Spanned<KnowledgeItem>>,
    #[serde(default)]
    guidance: Option<crate::narrative::GuidanceConfig>,
}

/// Parse a manifest document. Returns the manifest or at least one `Error`
/// diagnostic, never both. The document is reported as `<manifest>`.
pub fn parse_manifest(text: &str) -> Result<ParsedManifest, Vec<Diagnostic>> {
    parse_manifest_named(text, "<manifest>")
}

/// [`parse_manifest`] with an explicit document name (normally the file
/// path) used in diagnostic locations.
pub fn parse_manifest_named(
    text: &str,
    source_name: &str,
) -> Result<ParsedManifest, Vec<Diagnostic>> {
    let mut table = LocationTable::new(source_name, text);

    let raw: RawManifest = match toml::from_str(text) {
        Ok(raw) => raw,
        Err(err) => return Err(vec![toml_error_to_diag(&err, &table)]),
    };

    let mut diags = Vec::new();
    let manifest = lower_raw(raw, &mut table, &mut diags);
    check_structural(&manifest, &table, &mut diags);

    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        let mut manifest = manifest;
        manifest.normalize();
        Ok(ParsedManifest { manifest, locations: table })
    }
}

/// Byte-level entry point used by fuzzing and the CLI: any input, valid
/// UTF-8 or not, yields a manifest or diagnostics.
pub fn parse_manifest_bytes(
    bytes: &[u8],
    source_name: &str,
) -> Result<ParsedManifest, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_manifest_named(text, source_name),
        Err(err) => Err(vec![Diagnostic::error(
            codes::SYNTAX,
            format!("manifest is not valid UTF-8: {err}"),
        )
        .at(Location { path: source_name.to_string(), line: 1, column: 1 })]),
    }
}

fn toml_error_to_diag(err: &toml::de::Error, table: &LocationTable) -> Diagnostic {
    let message = err.message().to_string();
    let code = if message.contains("unknown field") || message.contains("unexpected keys") {
        codes::UNKNOWN_FIELD
    } else if message.contains("missing field") {
        codes::MISSING_FIELD
    } else {
        codes::SYNTAX
    };
    let location = err
        .span()
        .map(|span: Range<usize>| table.locate(span.start))
        .unwrap_or_else(|| table.document());
    Diagnostic::error(code, message).at(location)
}

fn lower_raw(
    raw: RawManifest,
    table: &mut LocationTable,
    diags: &mut Vec<Diagnostic>,
) -> SceneManifest {
    if let Some(units) = &raw.units {
        if units.get_ref() != "meters" {
            diags.push(
                Diagnostic::error(codes::INVALID_VALUE, "units are fixed to \"meters\"")
                    .at(table.locate(units.span().start)),
            );
        }
    }
    if let Some(up) = &raw.up_axis {
        if up.get_ref() != "y_up_right_handed" {
            diags.push(
                Diagnostic::error(
                    codes::INVALID_VALUE,
                    "up_axis is fixed to \"y_up_right_handed\"",
                )
                .at(table.locate(up.span().start)),
            );
        }
    }

    let take = |span: Range<usize>| span.start;

    let sources = raw
        .sources
        .into_iter()
        .map(|s| {
            let offset = take(s.span());
            let s = s.into_inner();
            table.sources.insert(s.source_id.clone(), offset);
            s
        })
        .collect();
    let slices = raw
        .slices
        .into_iter()
        .map(|s| {
            let offset = take(s.span());
            let s = s.into_inner();
            table.slices.insert(s.slice_id.clone(), offset);
            s
        })
        .collect();
    let architectures = raw
        .architectures
        .into_iter()
        .map(|a| {
            let offset = take(a.span());
            let a = a.into_inner();
            table.architectures.insert(a.arch_id.clone(), offset);
            a
        })
        .collect();
    let nodes = raw
        .narrative
        .nodes
        .into_iter()
        .map(|n| {
            let offset = take(n.span());
            let n = n.into_inner();
            table.nodes.insert(n.node_id.clone(), offset);
            n
        })
        .collect();
    let edges = raw
        .narrative
        .edges
        .into_iter()
        .map(|e| {
            table.edges.push(take(e.span()));
            e.into_inner()
        })
        .collect();
    let items = raw
        .narrative
        .knowledge_items
        .into_iter()
        .map(|k| {
            let offset = take(k.span());
            let k = k.into_inner();
            table.items.insert(k.item_id.clone(), offset);
            k
        })
        .collect();

    SceneManifest {
        schema_version: raw.schema_version,
        scene_id: raw.scene_id,
        scene_kind: raw.scene_kind,
        panorama_image: raw.panorama_image,
        sources,
        slices,
        architectures,
        skybox: raw.skybox,
        narrative: crate::narrative::NarrativeGraph {
            start_node: raw.narrative.start_node,
            terminal_nodes: raw.narrative.terminal_nodes,
            nodes,
            edges,
            knowledge_items: items,
            guidance: raw.narrative.guidance,
        },
    }
}

/// Per-entity structural (non-cross-referential) invariants, reported with
/// document locations.
fn check_structural(m: &SceneManifest, table: &LocationTable, diags: &mut Vec<Diagnostic>) {
    fn push_err(
        diags: &mut Vec<Diagnostic>,
        table: &LocationTable,
        code: &str,
        msg: String,
        loc: Option<Location>,
    ) {
        diags.push(Diagnostic::error(code, msg).at_opt(loc.or_else(|| Some(table.document()))));
    }
    macro_rules! err {
        ($code:expr, $msg:expr, $loc:expr $(,)?) => {
            push_err(diags, table, $code, $msg, $loc)
        };
    }

    if m.schema_version != SCHEMA_VERSION {
        err!(
            codes::UNSUPPORTED_SCHEMA_VERSION,
            format!("schema_version {} is not supported (expected {})", m.schema_version, SCHEMA_VERSION),
            None,
        );
    }
    if m.scene_id.is_empty() {
        err!(codes::INVALID_VALUE, "scene_id must be nonempty".into(), None);
    }

    for s in &m.sources {
        let loc = table.source(&s.source_id);
        if !(s.physical_width_m > 0.0 && s.physical_width_m.is_finite())
            || !(s.physical_height_m > 0.0 && s.physical_height_m.is_finite())
        {
            err!(
                codes::INVALID_VALUE,
                format!("source \"{}\": physical dimensions must be positive", s.source_id),
                loc.clone(),
            );
        }
        if s.dpi == 0 {
            err!(codes::INVALID_VALUE, format!("source \"{}\": dpi must be positive", s.source_id), loc.clone());
        }
        if s.image_path.is_empty() {
            err!(codes::INVALID_VALUE, format!("source \"{}\": image_path must be nonempty", s.source_id), loc);
        }
    }

    for s in &m.slices {
        let loc = table.slice(&s.slice_id);
        if s.mask.len() < 3 {
            err!(
                codes::INVALID_VALUE,
                format!("slice \"{}\": mask needs at least 3 vertices", s.slice_id),
                loc.clone(),
            );
        }
        if s.mask.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            err!(
                codes::INVALID_VALUE,
                format!("slice \"{}\": mask coordinates must be finite", s.slice_id),
                loc.clone(),
            );
        }
        check_placement(&s.placement, &format!("slice \"{}\"", s.slice_id), loc.clone(), diags);
        for e in &s.effects {
            if let Some(msg) = effect_problem(e) {
                err!(codes::INVALID_VALUE, format!("slice \"{}\": {msg}", s.slice_id), loc.clone());
            }
        }
    }

    for a in &m.architectures {
        let loc = table.architecture(&a.arch_id);
        if !(a.footprint.width_m > 0.0) || !(a.footprint.depth_m > 0.0) {
            err!(
                codes::INVALID_VALUE,
                format!("architecture \"{}\": footprint dimensions must be positive", a.arch_id),
                loc.clone(),
            );
        }
        if a.storeys.is_empty() {
            err!(
                codes::INVALID_VALUE,
                format!("architecture \"{}\": at least one storey required", a.arch_id),
                loc.clone(),
            );
        }
        for (i, st) in a.storeys.iter().enumerate() {
            if !(st.height_m > 0.0) {
                err!(
                    codes::INVALID_VALUE,
                    format!("architecture \"{}\" storey {i}: height must be positive", a.arch_id),
                    loc.clone(),
                );
            }
            if st.roof.overhang_m < 0.0 || st.roof.rise_m < 0.0 {
                err!(
                    codes::INVALID_VALUE,
                    format!("architecture \"{}\" storey {i}: roof overhang and rise must be nonnegative", a.arch_id),
                    loc.clone(),
                );
            }
        }
        check_placement(&a.placement, &format!("architecture \"{}\"", a.arch_id), loc.clone(), diags);
        if let Some(cal) = &a.calibration {
            if cal.eye == cal.look_at {
                err!(
                    codes::INVALID_VALUE,
                    format!("architecture \"{}\": calibration eye and look_at coincide", a.arch_id),
                    loc.clone(),
                );
            }
            if !(cal.vertical_fov > 0.0 && cal.vertical_fov < std::f64::consts::PI) {
                err!(
                    codes::INVALID_VALUE,
                    format!("architecture \"{}\": vertical_fov must be in (0, pi)", a.arch_id),
                    loc.clone(),
                );
            }
            if !(cal.image_rect.width() > 0.0 && cal.image_rect.height() > 0.0) {
                err!(
                    codes::INVALID_VALUE,
                    format!("architecture \"{}\": image_rect must have positive extent", a.arch_id),
                    loc,
                );
            }
        }
    }

    if let Some(sky) = &m.skybox {
        if sky.face_size_px == 0 || !sky.face_size_px.is_power_of_two() {
            err!(codes::INVALID_VALUE, "skybox face_size_px must be a power of two".into(), None);
        }
        if !(sky.band_height_frac > 0.0 && sky.band_height_frac < 1.0) {
            err!(codes::INVALID_VALUE, "skybox band_height_frac must be in (0, 1)".into(), None);
        }
        if !(sky.scale_jitter.min > 0.0 && sky.scale_jitter.min <= sky.scale_jitter.max) {
            err!(
                codes::INVALID_VALUE,
                "skybox scale_jitter must satisfy 0 < min <= max".into(),
                None,
            );
        }
    }

    for n in &m.narrative.nodes {
        let loc = table.node(&n.node_id);
        match &n.kind {
            crate::narrative::NodeKind::Dialogue { lines, .. } => {
                if lines.is_empty() {
                    err!(
                        codes::INVALID_VALUE,
                        format!("node \"{}\": dialogue needs at least one line", n.node_id),
                        loc,
                    );
                }
            }
            crate::narrative::NodeKind::Task { spot_count, target_ids, .. } => {
                if *spot_count == 0 {
                    err!(
                        codes::INVALID_VALUE,
                        format!("node \"{}\": clean spot_count must be at least 1", n.node_id),
                        loc.clone(),
                    );
                }
                if (target_ids.len() as u32) < *spot_count {
                    err!(
                        codes::INVALID_VALUE,
                        format!("node \"{}\": fewer target_ids than spot_count", n.node_id),
                        loc,
                    );
                }
            }
            crate::narrative::NodeKind::Media { duration_s } => {
                if !(*duration_s > 0.0) {
                    err!(
                        codes::INVALID_VALUE,
                        format!("node \"{}\": media duration must be positive", n.node_id),
                        loc,
                    );
                }
            }
            crate::narrative::NodeKind::Teleport { spawn, .. } => {
                check_placement(spawn, &format!("node \"{}\" spawn", n.node_id), loc, diags);
            }
        }
    }

    for (i, e) in m.narrative.edges.iter().enumerate() {
        let loc = table.edge(i);
        match &e.trigger {
            Trigger::GazeDwell { dwell_s, .. } if !(*dwell_s > 0.0) => {
                err!(codes::INVALID_VALUE, format!("edge {i}: gaze dwell_s must be positive"), loc);
            }
            Trigger::Proximity { radius_m, .. } if !(*radius_m > 0.0) => {
                err!(codes::INVALID_VALUE, format!("edge {i}: proximity radius_m must be positive"), loc);
            }
            Trigger::ResetDialogue => {
                err!(
                    codes::INVALID_EDGE_TRIGGER,
                    format!("edge {i}: reset_dialogue is a script event, not an edge trigger"),
                    loc,
                );
            }
            _ => {}
        }
    }
}

fn check_placement(
    p: &crate::manifest::Placement,
    what: &str,
    loc: Option<Location>,
    diags: &mut Vec<Diagnostic>,
) {
    let finite = p.position.iter().all(|c| c.is_finite()) && p.yaw.is_finite() && p.scale.is_finite();
    if !finite || !(p.scale > 0.0) {
        diags.push(
            Diagnostic::error(
                codes::INVALID_VALUE,
                format!("{what}: placement must be finite with scale > 0"),
            )
            .at_opt(loc),
        );
    }
}

fn effect_problem(e: &DynamicEffect) -> Option<&'static str> {
    match e {
        DynamicEffect::Flip { period_s } if !(*period_s > 0.0) => Some("flip period must be positive"),
        DynamicEffect::Bob { amplitude_m, period_s }
            if !(*period_s > 0.0) || !amplitude_m.is_finite() =>
        {
            Some("bob requires finite amplitude and positive period")
        }
        DynamicEffect::Pulse { min_scale, max_scale, period_s }
            if !(*period_s > 0.0) || !(*min_scale > 0.0) || !(min_scale <= max_scale) =>
        {
            Some("pulse requires 0 < min_scale <= max_scale and positive period")
        }
        _ => None,
    }
}
