//! The scene-manifest DSL: domain types, parser, serializer, and validator.
//!
//! A manifest is a TOML document (conventionally `*.scene`) with a
//! `schema_version` field. It names mural sources, the 2D slices matted out
//! of them, the transfer each slice undergoes, placed architectures, a skybox
//! recipe, and the narrative graph. See the repository README for the full
//! schema reference.
//!
//! All types here are plain immutable values; parsing, validation, and
//! serialization are pure functions safe to call concurrently.

mod parse;
mod serialize;
#[cfg(test)]
mod tests;
mod validate;

pub use parse::{parse_manifest, parse_manifest_bytes, parse_manifest_named, LocationTable, ParsedManifest};
pub use serialize::serialize_manifest;
pub use validate::{validate_manifest, validate_manifest_located};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::narrative::NarrativeGraph;

/// Current manifest schema version. Parsers reject any other value.
pub const SCHEMA_VERSION: u32 = 1;

/// Meters per inch, used to convert pixel extents at a given DPI to meters.
pub const METERS_PER_INCH: f64 = 0.0254;

/// Root description of one scene. Units are meters; the world is
/// right-handed with +Y up and -Z forward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneManifest {
    pub schema_version: u32,
    pub scene_id: String,
    pub scene_kind: SceneKind,
    /// Captured panorama image, relative to the manifest. Panorama scenes
    /// name one of these instead of carrying a skybox recipe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panorama_image: Option<String>,
    #[serde(default)]
    pub sources: Vec<MuralSource>,
    #[serde(default)]
    pub slices: Vec<SliceSpec>,
    #[serde(default)]
    pub architectures: Vec<ArchitectureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skybox: Option<SkyboxSpec>,
    pub narrative: NarrativeGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    /// A captured real-environment panorama (the cave scene).
    Panorama,
    /// A scene rebuilt from mural slices (the temple scene).
    Reconstructed,
}

/// One scanned mural image with its physical extent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuralSource {
    pub source_id: String,
    /// Image path relative to the manifest file. PNG or JPEG.
    pub image_path: String,
    pub physical_width_m: f64,
    pub physical_height_m: f64,
    pub dpi: u32,
}

impl MuralSource {
    /// Pixel dimensions implied by the declared physical size and DPI.
    pub fn declared_pixel_size(&self) -> (f64, f64) {
        (
            self.physical_width_m / METERS_PER_INCH * self.dpi as f64,
            self.physical_height_m / METERS_PER_INCH * self.dpi as f64,
        )
    }
}

/// A matted 2D clip cut from a mural plus its transfer assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub slice_id: String,
    pub source_id: String,
    /// Closed simple polygon in source-image pixel coordinates (>= 3 vertices).
    pub mask: Vec<[f64; 2]>,
    pub transfer: TransferKind,
    /// Placement in world meters. Texture-only slices (architecture textures,
    /// skybox band material) may omit it; it defaults to the identity.
    #[serde(default)]
    pub placement: Placement,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub effects: Vec<DynamicEffect>,
}

/// How a slice becomes part of the 3D scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferKind {
    /// Billboard quad kept facing the viewer at runtime.
    FaceToEye { axis_lock: AxisLock },
    /// Two orthogonal copies of the quad sharing a vertical axis.
    Cross,
    /// The slice textures an architecture instead of standing on its own.
    ArchitectureRef { arch_id: String },
    /// The slice is tiled into the skybox horizon band.
    SkyboxBand,
}

impl TransferKind {
    /// Whether a slice with this transfer becomes a placed scene entity.
    pub fn is_placed(&self) -> bool {
        matches!(self, TransferKind::FaceToEye { .. } | TransferKind::Cross)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisLock {
    /// Rotate about the vertical axis only; upright figures never pitch.
    Cylindrical,
    /// Rotate freely toward the viewer; used for clouds and other floaters.
    Spherical,
}

/// World-space placement: position in meters, yaw about +Y, uniform scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub position: [f64; 3],
    /// Radians, normalized to [-pi, pi) on parse.
    pub yaw: f64,
    /// World meters per slice meter.
    pub scale: f64,
}

impl Default for Placement {
    fn default() -> Self {
        Placement { position: [0.0, 0.0, 0.0], yaw: 0.0, scale: 1.0 }
    }
}

/// Wrap an angle into [-pi, pi).
pub fn normalize_yaw(yaw: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let wrapped = (yaw + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if wrapped >= std::f64::consts::PI {
        -std::f64::consts::PI
    } else {
        wrapped
    }
}

/// Declarative animation metadata attached to a placed slice. The compiler
/// never executes these; they ride through to the emitted node extras.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicEffect {
    Flip { period_s: f64 },
    Bob { amplitude_m: f64, period_s: f64 },
    Pulse { min_scale: f64, max_scale: f64, period_s: f64 },
}

/// An extruded building: stacked prism storeys with truncated-pyramid roofs,
/// the same mural texture planar-projected onto all four faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureSpec {
    pub arch_id: String,
    pub footprint: Footprint,
    pub storeys: Vec<Storey>,
    #[serde(default)]
    pub placement: Placement,
    /// Authored camera for the projection-match check; optional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<ViewCalibration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Footprint {
    pub width_m: f64,
    pub depth_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Storey {
    pub height_m: f64,
    pub wall_slice_id: String,
    pub roof: RoofSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoofSpec {
    /// How far the roof base extends past the footprint on each side.
    pub overhang_m: f64,
    /// Vertical rise from the roof base ring back to the footprint.
    pub rise_m: f64,
    pub roof_slice_id: String,
}

/// Authored pinhole view used to score how well generated geometry matches
/// the mural painting.
///
/// Coordinates are in the architecture's local frame. Projected points are
/// expressed in tangent units on the plane one unit in front of the eye:
/// `x' = x_cam / z_cam`, `y' = y_cam / z_cam`. `image_rect` is the slice's
/// rectangle in those units; `vertical_fov` bounds the visible window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewCalibration {
    pub eye: [f64; 3],
    pub look_at: [f64; 3],
    pub vertical_fov: f64,
    pub image_rect: ImageRect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageRect {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl ImageRect {
    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }
    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }
    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }
}

/// Recipe for the synthesized six-face skybox.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkyboxSpec {
    /// Side length of each face in pixels; must be a power of two.
    pub face_size_px: u32,
    /// Mountain clips tiled along the horizon, by slice id.
    #[serde(default)]
    pub horizon_slices: Vec<String>,
    /// Fraction of the face height the horizon band occupies, in (0, 1).
    pub band_height_frac: f64,
    pub sky_gradient: SkyGradient,
    pub ground_color: [u8; 3],
    pub rhythm_seed: u64,
    pub scale_jitter: ScaleJitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkyGradient {
    pub top: [u8; 3],
    pub horizon: [u8; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleJitter {
    pub min: f64,
    pub max: f64,
}

impl SceneManifest {
    /// Look up a source by id.
    pub fn source(&self, id: &str) -> Option<&MuralSource> {
        self.sources.iter().find(|s| s.source_id == id)
    }

    /// Look up a slice by id.
    pub fn slice(&self, id: &str) -> Option<&SliceSpec> {
        self.slices.iter().find(|s| s.slice_id == id)
    }

    /// Look up an architecture by id.
    pub fn architecture(&self, id: &str) -> Option<&ArchitectureSpec> {
        self.architectures.iter().find(|a| a.arch_id == id)
    }

    /// Ids of every entity that can be bound by the narrative (slices and
    /// architectures), mapped to a human-readable role.
    pub fn entity_ids(&self) -> BTreeMap<&str, &'static str> {
        let mut ids = BTreeMap::new();
        for s in &self.slices {
            ids.insert(s.slice_id.as_str(), "slice");
        }
        for a in &self.architectures {
            ids.insert(a.arch_id.as_str(), "architecture");
        }
        ids
    }

    /// Normalize in place everything the parser promises to normalize
    /// (currently yaw wrapping on all placements).
    pub(crate) fn normalize(&mut self) {
        for s in &mut self.slices {
            s.placement.yaw = normalize_yaw(s.placement.yaw);
        }
        for a in &mut self.architectures {
            a.placement.yaw = normalize_yaw(a.placement.yaw);
        }
        for n in &mut self.narrative.nodes {
            if let crate::narrative::NodeKind::Teleport { spawn, .. } = &mut n.kind {
                spawn.yaw = normalize_yaw(spawn.yaw);
            }
        }
    }
}

/// Shoelace area of a polygon (positive for counter-clockwise winding).
pub fn polygon_signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc / 2.0
}

/// True if no two non-adjacent edges of the closed polygon intersect and no
/// adjacent edges overlap. Polygons with repeated vertices are not simple.
pub fn polygon_is_simple(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i] == poly[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        for j in (i + 1)..n {
            let c = poly[j];
            let d = poly[(j + 1) % n];
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared endpoint is fine; collinear overlap is not.
                if segments_overlap_collinear(a, b, c, d) {
                    return false;
                }
            } else if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    orient(a, b, p) == 0.0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) && o1 != 0.0 && o2 != 0.0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

fn segments_overlap_collinear(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    if orient(a, b, c) != 0.0 || orient(a, b, d) != 0.0 {
        return false;
    }
    // Project onto the dominant axis and test interval overlap beyond the
    // shared endpoint.
    let axis = if (b[0] - a[0]).abs() >= (b[1] - a[1]).abs() { 0 } else { 1 };
    let (a0, b0) = (a[axis].min(b[axis]), a[axis].max(b[axis]));
    let (c0, d0) = (c[axis].min(d[axis]), c[axis].max(d[axis]));
    let lo = a0.max(c0);
    let hi = b0.min(d0);
    hi > lo
}
