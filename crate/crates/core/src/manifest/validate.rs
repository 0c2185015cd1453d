//! Cross-entity manifest validation.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{codes, Diagnostic};
use crate::narrative::{validate_graph, NodeKind};

use super::parse::LocationTable;
use super::{polygon_is_simple, polygon_signed_area, SceneKind, SceneManifest, TransferKind};

/// Validate every cross-entity invariant of a parsed manifest.
///
/// An empty result means the manifest is compilable. Mask bounds are checked
/// against the pixel size implied by each source's declared physical size
/// and DPI; agreement of the image file itself with that declaration is an
/// I/O concern checked when sources are loaded.
pub fn validate_manifest(m: &SceneManifest) -> Vec<Diagnostic> {
    validate_manifest_located(m, None)
}

/// [`validate_manifest`] with document locations attached where available.
pub fn validate_manifest_located(
    m: &SceneManifest,
    locations: Option<&LocationTable>,
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let locate = |id: &str| locations.and_then(|t| t.any(id));

    check_duplicate_ids(m, &mut diags, &locate);
    check_slices(m, &mut diags, &locate);
    check_architectures(m, &mut diags, &locate);
    check_scene_kind(m, &mut diags);
    check_skybox(m, &mut diags, &locate);
    check_narrative_bindings(m, &mut diags, &locate);

    for d in validate_graph(&m.narrative) {
        let d = match (&d.location, locations) {
            (None, Some(_)) => {
                let loc = d
                    .message
                    .split('"')
                    .nth(1)
                    .and_then(|id| locations.unwrap().any(id));
                d.at_opt(loc)
            }
            _ => d,
        };
        diags.push(d);
    }
    diags
}

fn check_duplicate_ids(
    m: &SceneManifest,
    diags: &mut Vec<Diagnostic>,
    locate: &dyn Fn(&str) -> Option<crate::diag::Location>,
) {
    // Slices, architectures, and narrative nodes share one id namespace.
    let named = m
        .slices
        .iter()
        .map(|s| (s.slice_id.as_str(), "slice"))
        .chain(m.architectures.iter().map(|a| (a.arch_id.as_str(), "architecture")))
        .chain(m.narrative.nodes.iter().map(|n| (n.node_id.as_str(), "narrative node")));
    let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
    for (id, role) in named {
        if let Some(prev) = seen.insert(id, role) {
            diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_ID,
                    format!("id \"{id}\" already used by a {prev}"),
                )
                .at_opt(locate(id)),
            );
        }
    }

    let mut source_ids = BTreeSet::new();
    for s in &m.sources {
        if !source_ids.insert(s.source_id.as_str()) {
            diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_ID,
                    format!("duplicate source id \"{}\"", s.source_id),
                )
                .at_opt(locate(&s.source_id)),
            );
        }
    }
    let mut item_ids = BTreeSet::new();
    for k in &m.narrative.knowledge_items {
        if !item_ids.insert(k.item_id.as_str()) {
            diags.push(
                Diagnostic::error(
                    codes::DUPLICATE_ID,
                    format!("duplicate knowledge item id \"{}\"", k.item_id),
                )
                .at_opt(locate(&k.item_id)),
            );
        }
    }
}

fn check_slices(
    m: &SceneManifest,
    diags: &mut Vec<Diagnostic>,
    locate: &dyn Fn(&str) -> Option<crate::diag::Location>,
) {
    for s in &m.slices {
        let loc = locate(&s.slice_id);
        let source = match m.source(&s.source_id) {
            Some(src) => src,
            None => {
                diags.push(
                    Diagnostic::error(
                        codes::UNRESOLVED_SOURCE,
                        format!(
                            "slice \"{}\" references undeclared source \"{}\"",
                            s.slice_id, s.source_id
                        ),
                    )
                    .at_opt(loc),
                );
                continue;
            }
        };

        let (w_px, h_px) = source.declared_pixel_size();
        for v in &s.mask {
            if v[0] < 0.0 || v[1] < 0.0 || v[0] > w_px || v[1] > h_px {
                diags.push(
                    Diagnostic::error(
                        codes::MASK_OUT_OF_BOUNDS,
                        format!(
                            "slice \"{}\": mask vertex ({}, {}) outside source \"{}\" ({:.0} x {:.0} px)",
                            s.slice_id, v[0], v[1], s.source_id, w_px, h_px
                        ),
                    )
                    .at_opt(loc.clone()),
                );
                break;
            }
        }

        if s.mask.len() >= 3 {
            if !polygon_is_simple(&s.mask) {
                diags.push(
                    Diagnostic::error(
                        codes::MASK_NOT_SIMPLE,
                        format!("slice \"{}\": mask polygon self-intersects", s.slice_id),
                    )
                    .at_opt(loc.clone()),
                );
            } else if polygon_signed_area(&s.mask).abs() == 0.0 {
                diags.push(
                    Diagnostic::error(
                        codes::MASK_DEGENERATE,
                        format!("slice \"{}\": mask polygon has zero area", s.slice_id),
                    )
                    .at_opt(loc.clone()),
                );
            }
        }

        match &s.transfer {
            TransferKind::ArchitectureRef { arch_id } => {
                if m.architecture(arch_id).is_none() {
                    diags.push(
                        Diagnostic::error(
                            codes::UNRESOLVED_SOURCE,
                            format!(
                                "slice \"{}\" transfers to undeclared architecture \"{arch_id}\"",
                                s.slice_id
                            ),
                        )
                        .at_opt(loc.clone()),
                    );
                }
            }
            TransferKind::SkyboxBand => {
                if !s.effects.is_empty() {
                    diags.push(
                        Diagnostic::error(
                            codes::EFFECTS_ON_SKYBAND,
                            format!(
                                "slice \"{}\": skybox band slices may not carry motion effects",
                                s.slice_id
                            ),
                        )
                        .at_opt(loc.clone()),
                    );
                }
            }
            _ => {}
        }
    }
}

fn check_architectures(
    m: &SceneManifest,
    diags: &mut Vec<Diagnostic>,
    locate: &dyn Fn(&str) -> Option<crate::diag::Location>,
) {
    for a in &m.architectures {
        let loc = locate(&a.arch_id);
        for (i, st) in a.storeys.iter().enumerate() {
            for (role, id) in [("wall", &st.wall_slice_id), ("roof", &st.roof.roof_slice_id)] {
                match m.slice(id) {
                    None => diags.push(
                        Diagnostic::error(
                            codes::UNRESOLVED_SOURCE,
                            format!(
                                "architecture \"{}\" storey {i}: {role} slice \"{id}\" is not declared",
                                a.arch_id
                            ),
                        )
                        .at_opt(loc.clone()),
                    ),
                    Some(s) => {
                        let ok = matches!(&s.transfer, TransferKind::ArchitectureRef { arch_id } if *arch_id == a.arch_id);
                        if !ok {
                            diags.push(
                                Diagnostic::error(
                                    codes::INVALID_VALUE,
                                    format!(
                                        "architecture \"{}\" storey {i}: {role} slice \"{id}\" must use an architecture_ref transfer to \"{}\"",
                                        a.arch_id, a.arch_id
                                    ),
                                )
                                .at_opt(loc.clone()),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn check_scene_kind(m: &SceneManifest, diags: &mut Vec<Diagnostic>) {
    match m.scene_kind {
        SceneKind::Panorama => {
            if m.panorama_image.is_none() {
                diags.push(Diagnostic::error(
                    codes::MISSING_PANORAMA,
                    "panorama scenes must name a panorama_image",
                ));
            }
            if m.skybox.is_some() {
                diags.push(Diagnostic::error(
                    codes::SKYBOX_ON_PANORAMA,
                    "panorama scenes use their captured image; remove the skybox recipe",
                ));
            }
        }
        SceneKind::Reconstructed => {
            if m.skybox.is_none() {
                diags.push(Diagnostic::error(
                    codes::MISSING_SKYBOX,
                    "reconstructed scenes must carry a skybox recipe",
                ));
            }
        }
    }
}

fn check_skybox(
    m: &SceneManifest,
    diags: &mut Vec<Diagnostic>,
    locate: &dyn Fn(&str) -> Option<crate::diag::Location>,
) {
    let Some(sky) = &m.skybox else { return };
    for id in &sky.horizon_slices {
        match m.slice(id) {
            None => diags.push(
                Diagnostic::error(
                    codes::UNRESOLVED_SOURCE,
                    format!("skybox horizon slice \"{id}\" is not declared"),
                )
                .at_opt(locate(id)),
            ),
            Some(s) => {
                if !matches!(s.transfer, TransferKind::SkyboxBand) {
                    diags.push(
                        Diagnostic::error(
                            codes::INVALID_VALUE,
                            format!("skybox horizon slice \"{id}\" must use the skybox_band transfer"),
                        )
                        .at_opt(locate(id)),
                    );
                }
            }
        }
    }
}

/// Narrative references into the scene: trigger targets, task targets, and
/// dialogue speakers must name declared slices or architectures.
fn check_narrative_bindings(
    m: &SceneManifest,
    diags: &mut Vec<Diagnostic>,
    locate: &dyn Fn(&str) -> Option<crate::diag::Location>,
) {
    let entities = m.entity_ids();

    for (i, e) in m.narrative.edges.iter().enumerate() {
        if let Some(target) = e.trigger.entity_target() {
            if !entities.contains_key(target) {
                diags.push(
                    Diagnostic::error(
                        codes::UNBOUND_TARGET,
                        format!("edge {i}: trigger targets \"{target}\", which is not in the scene"),
                    )
                    .at_opt(locate(&e.from_node)),
                );
            }
        }
    }

    for n in &m.narrative.nodes {
        match &n.kind {
            NodeKind::Dialogue { speaker_slice_id, .. } => {
                if m.slice(speaker_slice_id).is_none() {
                    diags.push(
                        Diagnostic::error(
                            codes::UNRESOLVED_SPEAKER,
                            format!(
                                "node \"{}\": speaker slice \"{speaker_slice_id}\" is not declared",
                                n.node_id
                            ),
                        )
                        .at_opt(locate(&n.node_id)),
                    );
                }
            }
            NodeKind::Task { target_ids, .. } => {
                for t in target_ids {
                    if !entities.contains_key(t.as_str()) {
                        diags.push(
                            Diagnostic::error(
                                codes::UNBOUND_TARGET,
                                format!("node \"{}\": task target \"{t}\" is not in the scene", n.node_id),
                            )
                            .at_opt(locate(&n.node_id)),
                        );
                    }
                }
            }
            _ => {}
        }
    }
}
