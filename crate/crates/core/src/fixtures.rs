//! Built-in demo scene: a temple courtyard reconstructed from a synthetic
//! painted mural, with the guided six-stage visit narrative.
//!
//! The fixture is fully self-contained: [`write_demo_scene`] paints the
//! mural image deterministically and writes it next to a generated manifest
//! and replay script, so the whole pipeline can run without any external
//! assets. The same values back the test suites.

use std::path::Path;

use crate::manifest::{
    ArchitectureSpec, AxisLock, DynamicEffect, Footprint, ImageRect, MuralSource, Placement,
    RoofSpec, ScaleJitter, SceneKind, SceneManifest, SkyGradient, SkyboxSpec, SliceSpec, Storey,
    TransferKind, ViewCalibration, SCHEMA_VERSION,
};
use crate::narrative::{
    Edge, GuidanceConfig, GuidanceToggle, KnowledgeItem, KnowledgeSource, NarrativeGraph,
    NarrativeNode, NodeKind, Trigger,
};

/// Dimensions of the generated mural image in pixels.
pub const MURAL_WIDTH_PX: u32 = 2048;
pub const MURAL_HEIGHT_PX: u32 = 567;

/// The guided visit: cave prologue, official, monk, a three-spot clean
/// task, a documentary, a farewell, and the teleport home.
pub fn temple_graph() -> NarrativeGraph {
    let dialogue = |speaker: &str, lines: &[&str]| NodeKind::Dialogue {
        speaker_slice_id: speaker.to_string(),
        lines: lines.iter().map(|l| l.to_string()).collect(),
    };
    let items: Vec<KnowledgeItem> = [
        ("k01", "The mural spans the west wall at thirteen by nearly four meters", KnowledgeSource::DialogueLine),
        ("k02", "It maps a pilgrimage route across Mt. Wutai", KnowledgeSource::DialogueLine),
        ("k03", "The temple was founded in the Northern Wei period", KnowledgeSource::DialogueLine),
        ("k04", "Its halls burned and were rebuilt in the Tang dynasty", KnowledgeSource::DialogueLine),
        ("k05", "Officials once escorted pilgrims through the gate", KnowledgeSource::DialogueLine),
        ("k06", "The East Hall keeps its original timber bracket sets", KnowledgeSource::DialogueLine),
        ("k07", "Monks maintained the hall by sweeping it daily", KnowledgeSource::DialogueLine),
        ("k08", "Two architects surveyed the hall and dated its beams", KnowledgeSource::MediaNode),
        ("k09", "Their report proved a surviving Tang-period structure", KnowledgeSource::MediaNode),
        ("k10", "The painted temple still matches the standing one", KnowledgeSource::DialogueLine),
    ]
    .into_iter()
    .map(|(id, summary, source)| KnowledgeItem {
        item_id: id.to_string(),
        summary: summary.to_string(),
        source,
    })
    .collect();

    let nodes = vec![
        NarrativeNode {
            node_id: "cave_prologue".into(),
            kind: dialogue("guide", &[
                "Welcome to the cave of the great mural.",
                "Look at the glowing aperture over the temple to step inside the painting.",
            ]),
            delivers: vec!["k01".into(), "k02".into()],
        },
        NarrativeNode {
            node_id: "official_talk".into(),
            kind: dialogue("official", &[
                "Greetings, traveler. This gate has stood since the Northern Wei.",
                "Fire took the halls once; the Tang rebuilt them finer.",
                "Go in, the monk expects you.",
            ]),
            delivers: vec!["k03".into(), "k04".into(), "k05".into()],
        },
        NarrativeNode {
            node_id: "monk_talk".into(),
            kind: dialogue("monk", &[
                "The East Hall is in disrepair; dust gathers on its beams.",
                "Take the broom by the corner and clean the three fallen patches.",
            ]),
            delivers: vec!["k06".into(), "k07".into()],
        },
        NarrativeNode {
            node_id: "east_hall_clean".into(),
            kind: NodeKind::Task {
                task_kind: crate::narrative::TaskKind::Clean,
                spot_count: 3,
                target_ids: vec!["dust_1".into(), "dust_2".into(), "dust_3".into()],
            },
            delivers: vec![],
        },
        NarrativeNode {
            node_id: "documentary".into(),
            kind: NodeKind::Media { duration_s: 180.0 },
            delivers: vec!["k08".into(), "k09".into()],
        },
        NarrativeNode {
            node_id: "monk_farewell".into(),
            kind: dialogue("monk", &[
                "You have seen what the surveyors saw. The painting and the hall agree.",
            ]),
            delivers: vec!["k10".into()],
        },
        NarrativeNode {
            node_id: "cave_return".into(),
            kind: NodeKind::Teleport {
                target_scene_id: "cave61".into(),
                spawn: Placement { position: [0.0, 0.0, 2.0], yaw: 0.0, scale: 1.0 },
            },
            delivers: vec![],
        },
    ];

    let edges = vec![
        Edge {
            from_node: "cave_prologue".into(),
            to_node: "official_talk".into(),
            trigger: Trigger::GazeDwell { target_id: "aperture".into(), dwell_s: 2.0 },
        },
        Edge {
            from_node: "official_talk".into(),
            to_node: "monk_talk".into(),
            trigger: Trigger::DialogueEnd { dialogue_node_id: "official_talk".into() },
        },
        Edge {
            from_node: "monk_talk".into(),
            to_node: "east_hall_clean".into(),
            trigger: Trigger::Grab { target_id: "broom".into() },
        },
        Edge {
            from_node: "east_hall_clean".into(),
            to_node: "documentary".into(),
            trigger: Trigger::CleanComplete { task_node_id: "east_hall_clean".into() },
        },
        Edge {
            from_node: "documentary".into(),
            to_node: "monk_farewell".into(),
            trigger: Trigger::MediaEnd { media_node_id: "documentary".into() },
        },
        Edge {
            from_node: "monk_farewell".into(),
            to_node: "cave_return".into(),
            trigger: Trigger::DialogueEnd { dialogue_node_id: "monk_farewell".into() },
        },
    ];

    let waypoints = [
        ("cave_prologue", vec![[0.0, 1.6, -1.0], [0.0, 1.6, -3.0]]),
        ("official_talk", vec![[0.5, 1.0, -4.0], [1.5, 1.0, -8.0]]),
        ("monk_talk", vec![[0.0, 1.0, -10.0], [-2.0, 1.0, -13.0]]),
        ("east_hall_clean", vec![[-2.5, 1.0, -14.0], [-3.0, 1.0, -15.0]]),
        ("documentary", vec![[-2.0, 1.0, -14.0]]),
        ("monk_farewell", vec![[0.0, 1.0, -10.0], [0.0, 1.0, -6.0]]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    NarrativeGraph {
        start_node: "cave_prologue".into(),
        terminal_nodes: vec!["cave_return".into()],
        nodes,
        edges,
        knowledge_items: items,
        guidance: Some(GuidanceConfig {
            enabled_by: GuidanceToggle::ControllerButton,
            waypoints,
        }),
    }
}

/// The canonical replay script that walks [`temple_graph`] start to finish.
pub fn temple_script() -> Vec<Trigger> {
    vec![
        Trigger::GazeDwell { target_id: "aperture".into(), dwell_s: 2.0 },
        Trigger::RayClick { target_id: "official".into() },
        Trigger::DialogueEnd { dialogue_node_id: "official_talk".into() },
        Trigger::RayClick { target_id: "monk".into() },
        Trigger::DialogueEnd { dialogue_node_id: "monk_talk".into() },
        Trigger::Grab { target_id: "broom".into() },
        Trigger::Grab { target_id: "dust_1".into() },
        Trigger::Grab { target_id: "dust_2".into() },
        Trigger::Grab { target_id: "dust_3".into() },
        Trigger::MediaEnd { media_node_id: "documentary".into() },
        Trigger::DialogueEnd { dialogue_node_id: "monk_farewell".into() },
    ]
}

/// The demo manifest. Mask polygons are laid out against the synthetic
/// mural painted by [`paint_mural`].
pub fn temple_manifest() -> SceneManifest {
    let slice = |id: &str, mask: Vec<[f64; 2]>, transfer: TransferKind, placement: Placement| {
        SliceSpec {
            slice_id: id.to_string(),
            source_id: "wutai_mural".into(),
            mask,
            transfer,
            placement,
            effects: vec![],
        }
    };
    let face = TransferKind::FaceToEye { axis_lock: AxisLock::Cylindrical };
    let rect = |x0: f64, y0: f64, x1: f64, y1: f64| vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
    let at = |x: f64, y: f64, z: f64, yaw: f64, scale: f64| Placement { position: [x, y, z], yaw, scale };

    let mut slices = vec![
        slice("guide", rect(40.0, 120.0, 140.0, 380.0), face.clone(), at(-1.2, 0.0, -3.0, 0.0, 1.0)),
        slice("official", rect(180.0, 120.0, 300.0, 400.0), face.clone(), at(1.5, 0.0, -8.0, 0.0, 1.0)),
        slice("monk", rect(340.0, 140.0, 440.0, 400.0), face.clone(), at(-2.0, 0.0, -13.0, 0.3, 1.0)),
        slice(
            "aperture",
            vec![[480.0, 160.0], [560.0, 120.0], [640.0, 160.0], [560.0, 200.0]],
            face.clone(),
            at(0.0, 1.6, -5.0, 0.0, 1.0),
        ),
        slice("broom", rect(660.0, 200.0, 700.0, 380.0), face.clone(), at(-3.2, 0.0, -14.5, 0.0, 1.0)),
        slice("dust_1", rect(720.0, 320.0, 780.0, 380.0), face.clone(), at(-2.8, 0.0, -15.5, 0.0, 1.0)),
        slice("dust_2", rect(800.0, 320.0, 860.0, 380.0), face.clone(), at(-3.6, 0.0, -16.0, 0.0, 1.0)),
        slice("dust_3", rect(880.0, 320.0, 940.0, 380.0), face.clone(), at(-4.2, 0.0, -15.2, 0.0, 1.0)),
        slice(
            "cloud_west",
            vec![[1000.0, 60.0], [1120.0, 40.0], [1180.0, 90.0], [1080.0, 120.0], [1010.0, 100.0]],
            TransferKind::FaceToEye { axis_lock: AxisLock::Spherical },
            at(4.0, 6.0, -12.0, 0.0, 2.0),
        ),
        slice(
            "rock_gate",
            vec![[1220.0, 200.0], [1320.0, 160.0], [1400.0, 240.0], [1340.0, 380.0], [1240.0, 360.0]],
            TransferKind::Cross,
            at(5.0, 0.0, -10.0, 0.6, 1.8),
        ),
    ];
    slices[0].effects = vec![DynamicEffect::Bob { amplitude_m: 0.05, period_s: 4.0 }];
    slices[8].effects = vec![DynamicEffect::Pulse { min_scale: 0.9, max_scale: 1.1, period_s: 6.0 }];

    // Texture-only slices: building faces and horizon mountains.
    slices.push(slice(
        "wall_main",
        rect(1420.0, 180.0, 1720.0, 420.0),
        TransferKind::ArchitectureRef { arch_id: "east_hall".into() },
        Placement::default(),
    ));
    slices.push(slice(
        "roof_main",
        rect(1420.0, 60.0, 1720.0, 170.0),
        TransferKind::ArchitectureRef { arch_id: "east_hall".into() },
        Placement::default(),
    ));
    slices.push(slice(
        "mountain_a",
        vec![[1740.0, 120.0], [1840.0, 40.0], [1940.0, 120.0], [1940.0, 140.0], [1740.0, 140.0]],
        TransferKind::SkyboxBand,
        Placement::default(),
    ));
    slices.push(slice(
        "mountain_b",
        vec![[1740.0, 260.0], [1820.0, 180.0], [1900.0, 220.0], [1980.0, 170.0], [2030.0, 260.0]],
        TransferKind::SkyboxBand,
        Placement::default(),
    ));

    SceneManifest {
        schema_version: SCHEMA_VERSION,
        scene_id: "foguang_temple".into(),
        scene_kind: SceneKind::Reconstructed,
        panorama_image: None,
        sources: vec![MuralSource {
            source_id: "wutai_mural".into(),
            image_path: "wutai_mural.png".into(),
            physical_width_m: 13.0,
            physical_height_m: 3.6,
            dpi: 4,
        }],
        slices,
        architectures: vec![east_hall_spec()],
        skybox: Some(SkyboxSpec {
            face_size_px: 256,
            horizon_slices: vec!["mountain_a".into(), "mountain_b".into()],
            band_height_frac: 0.35,
            sky_gradient: SkyGradient { top: [150, 210, 130], horizon: [235, 160, 80] },
            ground_color: [120, 90, 60],
            rhythm_seed: 42,
            scale_jitter: ScaleJitter { min: 0.7, max: 1.3 },
        }),
        narrative: temple_graph(),
    }
}

/// The demo building: one storey, ten meters wide, with a hipped roof.
/// The calibration frames the front face dead on; its image rectangle is
/// sized so the raster and analytic projection scores coincide.
pub fn east_hall_spec() -> ArchitectureSpec {
    ArchitectureSpec {
        arch_id: "east_hall".into(),
        footprint: Footprint { width_m: 10.0, depth_m: 8.0 },
        storeys: vec![Storey {
            height_m: 6.0,
            wall_slice_id: "wall_main".into(),
            roof: RoofSpec { overhang_m: 1.0, rise_m: 2.0, roof_slice_id: "roof_main".into() },
        }],
        placement: Placement { position: [0.0, 0.0, -20.0], yaw: 0.0, scale: 1.0 },
        calibration: Some(ViewCalibration {
            eye: [0.0, 3.0, 14.0],
            look_at: [0.0, 3.0, 4.0],
            vertical_fov: std::f64::consts::FRAC_PI_3,
            image_rect: ImageRect { min: [-0.512, -0.3072], max: [0.512, 0.3072] },
        }),
    }
}
