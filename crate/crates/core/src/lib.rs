//! mural2scene: a compiler from annotated 2D mural artwork to an
//! engine-neutral 3D scene package.
//!
//! The pipeline reads a scene manifest (a TOML DSL naming mural sources,
//! matted slices, transfer assignments, a skybox recipe, and a narrative
//! graph), validates it, cuts and packs texture clips, generates billboard,
//! cross, and architecture geometry, synthesizes a cubemap skybox, compiles
//! the narrative into a runtime file, and emits everything as glTF 2.0 plus
//! sidecar assets.

pub mod diag;
pub mod manifest;
pub mod narrative;
