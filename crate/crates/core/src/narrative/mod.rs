//! The interactive-narrative state machine: a typed graph of dialogue, task,
//! media, and teleport nodes advanced by interaction triggers.
//!
//! # Simulation semantics
//!
//! The simulator holds a current node plus per-node transient state and
//! consumes script events in order. For each event at node `N`:
//!
//! 1. If the event matches the trigger of an outgoing edge of `N` and the
//!    edge is traversable, the edge fires: the target node is entered and its
//!    knowledge items are delivered. A `CleanComplete` edge is traversable
//!    only once the task's spot count has been reached.
//! 2. Otherwise, if the event is a valid *sub-event* of `N` it is accepted
//!    without a transition:
//!    * Task (clean): `Grab` on a not-yet-cleaned target id counts one spot.
//!      Reaching the spot count auto-fires an outgoing `CleanComplete` edge.
//!    * Dialogue: `RayClick` on the speaker starts or restarts the lines;
//!      `ResetDialogue` abandons them; `DialogueEnd` on the node marks the
//!      lines finished when no edge consumes it.
//!    * Media: `MediaEnd` on the node is accepted when no edge consumes it.
//! 3. Otherwise the event is recorded as rejected and skipped.
//!
//! Knowledge items are delivered when their node is entered; the start node
//! delivers on simulation start. The delivered set never shrinks.
//!
//! Event/trigger matching is exact on ids; a `GazeDwell` event matches when
//! its dwell time reaches the edge's, a `Proximity` event when its radius is
//! within the edge's.

mod compile;
mod enumerate;
mod simulate;
mod validate;

pub use compile::{compile_narrative, load_narrative, NarrativeCompileError, NARRATIVE_SCHEMA_VERSION};
pub use enumerate::{dfs_accepts, enumerate_completions, EnumerateError};
pub use simulate::{simulate, simulate_strict, SimMode, SimOutcome, SimStep, SimTrace, StepEffect};
pub use validate::validate_graph;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::manifest::Placement;

/// Typed FSM of narrative nodes joined by trigger-labeled edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrativeGraph {
    pub start_node: String,
    pub terminal_nodes: Vec<String>,
    #[serde(default)]
    pub nodes: Vec<NarrativeNode>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub knowledge_items: Vec<KnowledgeItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guidance: Option<GuidanceConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrativeNode {
    pub node_id: String,
    pub kind: NodeKind,
    /// Knowledge item ids delivered when this node is entered.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delivers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Dialogue {
        speaker_slice_id: String,
        lines: Vec<String>,
    },
    Task {
        task_kind: TaskKind,
        spot_count: u32,
        target_ids: Vec<String>,
    },
    Media {
        duration_s: f64,
    },
    Teleport {
        target_scene_id: String,
        spawn: Placement,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Clean,
}

/// Directed edge; the trigger names the interaction that fires it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from_node: String,
    pub to_node: String,
    pub trigger: Trigger,
}

/// An interaction event. Edges carry these as firing conditions; simulation
/// scripts carry them as the replayed event stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    GazeDwell { target_id: String, dwell_s: f64 },
    RayClick { target_id: String },
    Proximity { target_id: String, radius_m: f64 },
    Grab { target_id: String },
    CleanComplete { task_node_id: String },
    MediaEnd { media_node_id: String },
    DialogueEnd { dialogue_node_id: String },
    /// Script-only: the player walked away from the current dialogue and its
    /// lines restart. Never valid as an edge trigger.
    ResetDialogue,
}

impl Trigger {
    /// Entity id this trigger points at in the scene, if any.
    pub fn entity_target(&self) -> Option<&str> {
        match self {
            Trigger::GazeDwell { target_id, .. }
            | Trigger::RayClick { target_id }
            | Trigger::Proximity { target_id, .. }
            | Trigger::Grab { target_id } => Some(target_id),
            _ => None,
        }
    }

    /// Narrative node id this trigger points at, if any.
    pub fn node_target(&self) -> Option<&str> {
        match self {
            Trigger::CleanComplete { task_node_id } => Some(task_node_id),
            Trigger::MediaEnd { media_node_id } => Some(media_node_id),
            Trigger::DialogueEnd { dialogue_node_id } => Some(dialogue_node_id),
            _ => None,
        }
    }

    /// True if `self`, seen as a script event, satisfies `edge_trigger`.
    pub fn satisfies(&self, edge_trigger: &Trigger) -> bool {
        match (self, edge_trigger) {
            (
                Trigger::GazeDwell { target_id: t, dwell_s: d },
                Trigger::GazeDwell { target_id: et, dwell_s: ed },
            ) => t == et && d >= ed,
            (
                Trigger::Proximity { target_id: t, radius_m: r },
                Trigger::Proximity { target_id: et, radius_m: er },
            ) => t == et && r <= er,
            (a, b) => a == b,
        }
    }
}

/// A discrete unit of heritage knowledge the narrative must deliver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnowledgeItem {
    pub item_id: String,
    pub summary: String,
    pub source: KnowledgeSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnowledgeSource {
    DialogueLine,
    MediaNode,
}

/// Optional light-point navigation: per-node waypoint trajectories toward
/// the next required interaction, toggled by a controller button.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuidanceConfig {
    pub enabled_by: GuidanceToggle,
    /// node id -> waypoint polyline in world meters.
    #[serde(default)]
    pub waypoints: BTreeMap<String, Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuidanceToggle {
    ControllerButton,
}

impl NarrativeGraph {
    pub fn node(&self, id: &str) -> Option<&NarrativeNode> {
        self.nodes.iter().find(|n| n.node_id == id)
    }

    pub fn is_terminal(&self, id: &str) -> bool {
        self.terminal_nodes.iter().any(|t| t == id)
    }

    pub fn outgoing<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.from_node == id)
    }
}
