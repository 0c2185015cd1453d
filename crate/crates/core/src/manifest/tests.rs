use super::*;
use crate::diag::{codes, Severity};
use crate::narrative::{NarrativeGraph, NodeKind, Trigger};

fn minimal_panorama_text() -> &'static str {
    r#"
schema_version = 1
scene_id = "cave61"
scene_kind = "panorama"
panorama_image = "cave_pano.png"

[[sources]]
source_id = "wutai"
image_path = "wutai.png"
physical_width_m = 13.0
physical_height_m = 3.6
dpi = 4

[narrative]
start_node = "lobby"
terminal_nodes = ["lobby"]

[[narrative.nodes]]
node_id = "lobby"
kind = { media = { duration_s = 10.0 } }
"#
}

#[test]
fn parses_minimal_panorama() {
    let parsed = parse_manifest(minimal_panorama_text()).expect("parses");
    let m = parsed.manifest;
    assert_eq!(m.scene_kind, SceneKind::Panorama);
    assert_eq!(m.scene_id, "cave61");
    assert_eq!(m.sources.len(), 1);
    assert!(m.slices.is_empty());
    assert!(validate_manifest(&m).is_empty());
}

#[test]
fn unresolved_source_reported_at_slice_location() {
    let text = r#"
schema_version = 1
scene_id = "s"
scene_kind = "panorama"
panorama_image = "p.png"

[[sources]]
source_id = "m1"
image_path = "m1.png"
physical_width_m = 1.0
physical_height_m = 1.0
dpi = 100

[[slices]]
slice_id = "monk"
source_id = "m9"
mask = [[0.0, 0.0], [10.0, 0.0], [10.0, 10.0]]
transfer = "cross"

[narrative]
start_node = "a"
terminal_nodes = ["a"]

[[narrative.nodes]]
node_id = "a"
kind = { media = { duration_s = 1.0 } }
"#;
    let parsed = parse_manifest_named(text, "test.scene").expect("parses");
    let diags = validate_manifest_located(&parsed.manifest, Some(&parsed.locations));
    let unresolved: Vec<_> = diags.iter().filter(|d| d.code == codes::UNRESOLVED_SOURCE).collect();
    assert_eq!(unresolved.len(), 1, "diags: {diags:?}");
    assert_eq!(unresolved[0].severity, Severity::Error);
    let loc = unresolved[0].location.as_ref().expect("has location");
    assert_eq!(loc.path, "test.scene");
    // The [[slices]] table starts on line 14.
    assert_eq!(loc.line, 14);
}

#[test]
fn syntax_error_has_line_and_column() {
    let text = "schema_version = 1\nscene_id = \"x\"\nscene_kind = !!!\n";
    let errs = parse_manifest(text).unwrap_err();
    assert!(!errs.is_empty());
    let loc = errs[0].location.as_ref().expect("location");
    assert_eq!(loc.line, 3);
    assert!(loc.column >= 1);
}

#[test]
fn unknown_field_rejected() {
    let text = format!("{}\nbogus_field = 3\n", minimal_panorama_text());
    let errs = parse_manifest(&text).unwrap_err();
    assert!(errs.iter().any(|d| d.code == codes::UNKNOWN_FIELD), "{errs:?}");
}

#[test]
fn unknown_field_inside_transfer_rejected() {
    let text = minimal_panorama_text().replace(
        "[narrative]",
        r#"[[slices]]
slice_id = "a"
source_id = "wutai"
mask = [[0.0,0.0],[1.0,0.0],[1.0,1.0]]
transfer = { cross = { bogus = 1 } }

[narrative]"#,
    );
    let errs = parse_manifest(&text).unwrap_err();
    assert!(
        errs.iter().any(|d| d.code == codes::UNKNOWN_FIELD || d.code == codes::SYNTAX),
        "{errs:?}"
    );
}

#[test]
fn missing_required_field_rejected() {
    let text = "schema_version = 1\nscene_kind = \"panorama\"\n[narrative]\nstart_node = \"a\"\nterminal_nodes = [\"a\"]\n";
    let errs = parse_manifest(text).unwrap_err();
    assert!(errs.iter().any(|d| d.code == codes::MISSING_FIELD), "{errs:?}");
}

#[test]
fn duplicate_slice_id_reported() {
    let mut m = fixture_manifest();
    let dup = m.slices[0].clone();
    m.slices.push(dup);
    let diags = validate_manifest(&m);
    assert!(diags.iter().any(|d| d.code == codes::DUPLICATE_ID), "{diags:?}");
}

#[test]
fn mask_out_of_bounds_reported() {
    let mut m = fixture_manifest();
    m.slices[0].mask[0] = [-3.0, 10.0];
    let diags = validate_manifest(&m);
    assert!(diags.iter().any(|d| d.code == codes::MASK_OUT_OF_BOUNDS), "{diags:?}");
}

#[test]
fn self_intersecting_mask_reported() {
    let mut m = fixture_manifest();
    m.slices[0].mask = vec![[0.0, 0.0], [40.0, 40.0], [40.0, 0.0], [0.0, 40.0]];
    let diags = validate_manifest(&m);
    assert!(diags.iter().any(|d| d.code == codes::MASK_NOT_SIMPLE), "{diags:?}");
}

#[test]
fn roundtrip_identity_minimal() {
    let parsed = parse_manifest(minimal_panorama_text()).expect("parses");
    let doc = serialize_manifest(&parsed.manifest);
    let reparsed = parse_manifest(&doc).expect("reparses");
    assert_eq!(parsed.manifest, reparsed.manifest);
}

#[test]
fn roundtrip_preserves_negative_pi_yaw() {
    let mut m = fixture_manifest();
    m.slices[0].placement.yaw = -std::f64::consts::PI;
    let doc = serialize_manifest(&m);
    let reparsed = parse_manifest(&doc).expect("reparses");
    assert_eq!(reparsed.manifest.slices[0].placement.yaw, -std::f64::consts::PI);
    assert_eq!(m, reparsed.manifest);
}

#[test]
fn roundtrip_identity_full_fixture() {
    let m = fixture_manifest();
    let doc = serialize_manifest(&m);
    let reparsed = parse_manifest(&doc).expect("reparses");
    assert_eq!(m, reparsed.manifest);
}

#[test]
fn parse_rejects_non_utf8_bytes() {
    let err = parse_manifest_bytes(&[0xff, 0xfe, 0x00, 0x41], "bin.scene").unwrap_err();
    assert_eq!(err[0].code, codes::SYNTAX);
}

#[test]
fn fixed_units_enforced() {
    let text = minimal_panorama_text().replace(
        "scene_kind = \"panorama\"",
        "scene_kind = \"panorama\"\nunits = \"feet\"",
    );
    let errs = parse_manifest(&text).unwrap_err();
    assert!(errs.iter().any(|d| d.code == codes::INVALID_VALUE), "{errs:?}");
}

/// A small but fully cross-referenced manifest used by the unit tests.
pub(crate) fn fixture_manifest() -> SceneManifest {
    SceneManifest {
        schema_version: SCHEMA_VERSION,
        scene_id: "unit_fixture".into(),
        scene_kind: SceneKind::Reconstructed,
        panorama_image: None,
        sources: vec![MuralSource {
            source_id: "mural".into(),
            image_path: "mural.png".into(),
            physical_width_m: 2.0,
            physical_height_m: 1.0,
            dpi: 100,
        }],
        slices: vec![
            SliceSpec {
                slice_id: "figure".into(),
                source_id: "mural".into(),
                mask: vec![[10.0, 10.0], [60.0, 12.0], [55.0, 80.0], [12.0, 75.0]],
                transfer: TransferKind::FaceToEye { axis_lock: AxisLock::Cylindrical },
                placement: Placement { position: [1.0, 0.0, -2.0], yaw: 0.25, scale: 1.5 },
                effects: vec![DynamicEffect::Bob { amplitude_m: 0.1, period_s: 3.0 }],
            },
            SliceSpec {
                slice_id: "ridge".into(),
                source_id: "mural".into(),
                mask: vec![[100.0, 20.0], [180.0, 25.0], [140.0, 70.0]],
                transfer: TransferKind::SkyboxBand,
                placement: Placement::default(),
                effects: vec![],
            },
        ],
        architectures: vec![],
        skybox: Some(SkyboxSpec {
            face_size_px: 64,
            horizon_slices: vec!["ridge".into()],
            band_height_frac: 0.35,
            sky_gradient: SkyGradient { top: [120, 200, 120], horizon: [240, 160, 80] },
            ground_color: [120, 90, 60],
            rhythm_seed: 42,
            scale_jitter: ScaleJitter { min: 0.7, max: 1.3 },
        }),
        narrative: NarrativeGraph {
            start_node: "greet".into(),
            terminal_nodes: vec!["done".into()],
            nodes: vec![
                crate::narrative::NarrativeNode {
                    node_id: "greet".into(),
                    kind: NodeKind::Dialogue {
                        speaker_slice_id: "figure".into(),
                        lines: vec!["hello".into()],
                    },
                    delivers: vec!["k1".into()],
                },
                crate::narrative::NarrativeNode {
                    node_id: "done".into(),
                    kind: NodeKind::Teleport {
                        target_scene_id: "cave61".into(),
                        spawn: Placement::default(),
                    },
                    delivers: vec![],
                },
            ],
            edges: vec![crate::narrative::Edge {
                from_node: "greet".into(),
                to_node: "done".into(),
                trigger: Trigger::DialogueEnd { dialogue_node_id: "greet".into() },
            }],
            knowledge_items: vec![crate::narrative::KnowledgeItem {
                item_id: "k1".into(),
                summary: "a fact".into(),
                source: crate::narrative::KnowledgeSource::DialogueLine,
            }],
            guidance: None,
        },
    }
}

#[test]
fn fixture_manifest_validates_clean() {
    let diags = validate_manifest(&fixture_manifest());
    assert!(diags.is_empty(), "{diags:?}");
}

#[test]
fn yaw_normalization_wraps_into_range() {
    let pi = std::f64::consts::PI;
    assert_eq!(normalize_yaw(0.0), 0.0);
    assert_eq!(normalize_yaw(-pi), -pi);
    assert_eq!(normalize_yaw(pi), -pi);
    assert!((normalize_yaw(3.0 * pi / 2.0) + pi / 2.0).abs() < 1e-12);
    assert!((normalize_yaw(-5.0 * pi / 2.0) + pi / 2.0).abs() < 1e-12);
    let y = normalize_yaw(123.456);
    assert!((-pi..pi).contains(&y));
}

#[test]
fn simple_polygon_checks() {
    let square = [[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0]];
    assert!(polygon_is_simple(&square));
    assert!(polygon_signed_area(&square) > 0.0);

    let bowtie = [[0.0, 0.0], [4.0, 4.0], [4.0, 0.0], [0.0, 4.0]];
    assert!(!polygon_is_simple(&bowtie));

    let repeated = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [2.0, 0.0]];
    assert!(!polygon_is_simple(&repeated));

    let degenerate = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]];
    assert_eq!(polygon_signed_area(&degenerate), 0.0);
}

#[test]
fn concave_polygon_is_simple() {
    let l_shape = [
        [0.0, 0.0],
        [6.0, 0.0],
        [6.0, 2.0],
        [2.0, 2.0],
        [2.0, 6.0],
        [0.0, 6.0],
    ];
    assert!(polygon_is_simple(&l_shape));
}
