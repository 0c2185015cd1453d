//! Simulation scripts: ordered trigger-event lists as TOML documents.

use serde::{Deserialize, Serialize};

use super::Trigger;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScriptFile {
    #[serde(default)]
    events: Vec<Trigger>,
}

/// Parse a script document of the form `[[events]] ...`.
pub fn parse_script(text: &str) -> Result<Vec<Trigger>, String> {
    toml::from_str::<ScriptFile>(text)
        .map(|s| s.events)
        .map_err(|e| e.message().to_string())
}

/// Serialize events into the script document form.
pub fn serialize_script(events: &[Trigger]) -> String {
    toml::to_string(&ScriptFile { events: events.to_vec() }).expect("script serializes")
}
