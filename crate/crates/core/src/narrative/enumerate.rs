//! Exhaustive enumeration of accepting event sequences.
//!
//! This is the brute-force counterpart to the simulator and is kept
//! deliberately independent of it: matching and state handling are
//! re-derived here recursively so the two can check each other.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{NarrativeGraph, NodeKind, Trigger};

/// Hard cap on DFS work before giving up.
const WALK_BUDGET: u64 = 1_000_000;
/// Longest sequence the enumerator will consider.
pub(crate) const MAX_ENUMERATION_LEN: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("BOUND_EXCEEDED: enumeration budget exhausted (max_len {max_len})")]
    BoundExceeded { max_len: usize },
}

/// Count the distinct accepting event sequences of length at most `max_len`.
///
/// An accepting sequence is a start-to-terminal walk written as its edge
/// triggers; a `CleanComplete` edge contributes its trigger as one event
/// (the grab sub-events that satisfy it are not part of the sequence).
/// Walks stop at the first terminal they reach.
pub fn enumerate_completions(
    g: &NarrativeGraph,
    max_len: usize,
) -> Result<u64, EnumerateError> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(EnumerateError::BoundExceeded { max_len });
    }
    let mut sequences: BTreeSet<String> = BTreeSet::new();
    let mut budget = WALK_BUDGET;
    let mut prefix: Vec<String> = Vec::new();
    walk(g, &g.start_node, max_len, &mut prefix, &mut sequences, &mut budget)
        .map_err(|_| EnumerateError::BoundExceeded { max_len })?;
    Ok(sequences.len() as u64)
}

fn walk(
    g: &NarrativeGraph,
    node: &str,
    remaining: usize,
    prefix: &mut Vec<String>,
    out: &mut BTreeSet<String>,
    budget: &mut u64,
) -> Result<(), ()> {
    if *budget == 0 {
        return Err(());
    }
    *budget -= 1;
    if g.is_terminal(node) {
        out.insert(prefix.join("\u{1f}"));
        return Ok(());
    }
    if remaining == 0 {
        return Ok(());
    }
    for edge in g.outgoing(node) {
        prefix.push(trigger_key(&edge.trigger));
        walk(g, &edge.to_node, remaining - 1, prefix, out, budget)?;
        prefix.pop();
    }
    Ok(())
}

fn trigger_key(t: &Trigger) -> String {
    match t {
        Trigger::GazeDwell { target_id, dwell_s } => format!("gaze:{target_id}:{dwell_s}"),
        Trigger::RayClick { target_id } => format!("click:{target_id}"),
        Trigger::Proximity { target_id, radius_m } => format!("near:{target_id}:{radius_m}"),
        Trigger::Grab { target_id } => format!("grab:{target_id}"),
        Trigger::CleanComplete { task_node_id } => format!("cleaned:{task_node_id}"),
        Trigger::MediaEnd { media_node_id } => format!("media:{media_node_id}"),
        Trigger::DialogueEnd { dialogue_node_id } => format!("spoke:{dialogue_node_id}"),
        Trigger::ResetDialogue => "reset".to_string(),
    }
}

/// Decide whether the simulator's strict mode would accept `script`:
/// a recursive re-derivation of the replay semantics used as the oracle
/// in property tests.
pub fn dfs_accepts(g: &NarrativeGraph, script: &[Trigger]) -> bool {
    accepts_from(g, &g.start_node, &BTreeSet::new(), script)
}

fn accepts_from(
    g: &NarrativeGraph,
    node: &str,
    cleaned: &BTreeSet<&str>,
    rest: &[Trigger],
) -> bool {
    if g.is_terminal(node) {
        return rest.is_empty();
    }
    let Some((event, tail)) = rest.split_first() else {
        return false;
    };

    // First matching outgoing edge, with clean-completion gating.
    let fired = g.outgoing(node).find(|e| {
        event_matches(event, &e.trigger)
            && match &e.trigger {
                Trigger::CleanComplete { .. } => clean_goal_met(g, node, cleaned),
                _ => true,
            }
    });
    if let Some(edge) = fired {
        return accepts_from(g, &edge.to_node, &BTreeSet::new(), tail);
    }

    // Sub-events.
    let Some(n) = g.node(node) else { return false };
    match (&n.kind, event) {
        (NodeKind::Task { target_ids, .. }, Trigger::Grab { target_id }) => {
            if !target_ids.contains(target_id) || cleaned.contains(target_id.as_str()) {
                return false;
            }
            let mut cleaned = cleaned.clone();
            cleaned.insert(target_id);
            if clean_goal_met(g, node, &cleaned) {
                let auto_edge = g.outgoing(node).find(|e| {
                    matches!(&e.trigger, Trigger::CleanComplete { task_node_id } if task_node_id == node)
                });
                if let Some(edge) = auto_edge {
                    return accepts_from(g, &edge.to_node, &BTreeSet::new(), tail);
                }
            }
            accepts_from(g, node, &cleaned, tail)
        }
        (NodeKind::Dialogue { speaker_slice_id, .. }, Trigger::RayClick { target_id }) => {
            target_id == speaker_slice_id && accepts_from(g, node, cleaned, tail)
        }
        (NodeKind::Dialogue { .. }, Trigger::ResetDialogue) => accepts_from(g, node, cleaned, tail),
        (NodeKind::Dialogue { .. }, Trigger::DialogueEnd { dialogue_node_id }) => {
            dialogue_node_id == node && accepts_from(g, node, cleaned, tail)
        }
        (NodeKind::Media { .. }, Trigger::MediaEnd { media_node_id }) => {
            media_node_id == node && accepts_from(g, node, cleaned, tail)
        }
        _ => false,
    }
}

fn clean_goal_met(g: &NarrativeGraph, node: &str, cleaned: &BTreeSet<&str>) -> bool {
    match g.node(node).map(|n| &n.kind) {
        Some(NodeKind::Task { spot_count, .. }) => cleaned.len() as u32 >= *spot_count,
        _ => false,
    }
}

fn event_matches(event: &Trigger, edge: &Trigger) -> bool {
    match (event, edge) {
        (
            Trigger::GazeDwell { target_id: a, dwell_s: da },
            Trigger::GazeDwell { target_id: b, dwell_s: db },
        ) => a == b && da >= db,
        (
            Trigger::Proximity { target_id: a, radius_m: ra },
            Trigger::Proximity { target_id: b, radius_m: rb },
        ) => a == b && ra <= rb,
        (Trigger::RayClick { target_id: a }, Trigger::RayClick { target_id: b }) => a == b,
        (Trigger::Grab { target_id: a }, Trigger::Grab { target_id: b }) => a == b,
        (
            Trigger::CleanComplete { task_node_id: a },
            Trigger::CleanComplete { task_node_id: b },
        ) => a == b,
        (Trigger::MediaEnd { media_node_id: a }, Trigger::MediaEnd { media_node_id: b }) => a == b,
        (
            Trigger::DialogueEnd { dialogue_node_id: a },
            Trigger::DialogueEnd { dialogue_node_id: b },
        ) => a == b,
        _ => false,
    }
}
