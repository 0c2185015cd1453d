//! Manifest back end: [`SceneManifest`] to canonical TOML text.

use super::SceneManifest;

/// Serialize a manifest to its canonical document form.
///
/// Round-trip identity holds: `parse_manifest(serialize_manifest(m))`
/// yields a manifest structurally equal to `m` for every valid `m` (the
/// serializer writes every placement explicitly, and TOML floats round-trip
/// exactly through their shortest decimal form).
pub fn serialize_manifest(m: &SceneManifest) -> String {
    let mut doc = toml::to_string(m).expect("manifest serialization cannot fail");
    if !doc.ends_with('\n') {
        doc.push('\n');
    }
    doc
}
