//! Well-formedness checks for narrative graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::diag::{codes, Diagnostic};

use super::{NarrativeGraph, NodeKind, Trigger};

/// Validate a narrative graph. Reports, among others: missing or dangling
/// start/terminal/edge ids, trigger/node kind mismatches, nodes unreachable
/// from the start, the absence of any start-to-terminal path, knowledge
/// items that no completing path can deliver, and guidance gaps.
pub fn validate_graph(g: &NarrativeGraph) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut ids = BTreeSet::new();
    for n in &g.nodes {
        if !ids.insert(n.node_id.as_str()) {
            diags.push(Diagnostic::error(
                codes::DUPLICATE_ID,
                format!("duplicate narrative node id \"{}\"", n.node_id),
            ));
        }
    }

    if !ids.contains(g.start_node.as_str()) {
        diags.push(Diagnostic::error(
            codes::MISSING_START,
            format!("start node \"{}\" is not declared", g.start_node),
        ));
    }
    if g.terminal_nodes.is_empty() {
        diags.push(Diagnostic::error(codes::MISSING_TERMINAL, "no terminal nodes declared"));
    }
    for t in &g.terminal_nodes {
        if !ids.contains(t.as_str()) {
            diags.push(Diagnostic::error(
                codes::MISSING_TERMINAL,
                format!("terminal node \"{t}\" is not declared"),
            ));
        }
    }

    for (i, e) in g.edges.iter().enumerate() {
        for endpoint in [&e.from_node, &e.to_node] {
            if !ids.contains(endpoint.as_str()) {
                diags.push(Diagnostic::error(
                    codes::DANGLING_EDGE_ENDPOINT,
                    format!("edge {i}: node \"{endpoint}\" is not declared"),
                ));
            }
        }
        check_trigger(g, i, e, &mut diags);
    }

    // Reachability over the edge relation.
    let adjacency: BTreeMap<&str, Vec<&str>> = {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &g.edges {
            adj.entry(e.from_node.as_str()).or_default().push(e.to_node.as_str());
        }
        adj
    };
    let reachable = flood(g.start_node.as_str(), &adjacency);
    for n in &g.nodes {
        if !reachable.contains(n.node_id.as_str()) {
            diags.push(Diagnostic::warning(
                codes::UNREACHABLE_NODE,
                format!("node \"{}\" is unreachable from the start node", n.node_id),
            ));
        }
    }

    // Reverse reachability from the terminals.
    let reverse: BTreeMap<&str, Vec<&str>> = {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &g.edges {
            adj.entry(e.to_node.as_str()).or_default().push(e.from_node.as_str());
        }
        adj
    };
    let mut reaches_terminal = BTreeSet::new();
    for t in &g.terminal_nodes {
        reaches_terminal.extend(flood(t.as_str(), &reverse));
    }
    if !reachable.iter().any(|n| reaches_terminal.contains(n)) {
        diags.push(Diagnostic::error(
            codes::NO_TERMINAL_PATH,
            format!("no path from \"{}\" to any terminal node", g.start_node),
        ));
    }

    // A knowledge item is deliverable iff some delivering node lies on a
    // start-to-terminal walk.
    let on_completing_walk: BTreeSet<&str> =
        reachable.intersection(&reaches_terminal).copied().collect();
    for item in &g.knowledge_items {
        let delivered = g
            .nodes
            .iter()
            .any(|n| n.delivers.iter().any(|d| d == &item.item_id) && on_completing_walk.contains(n.node_id.as_str()));
        if !delivered {
            diags.push(Diagnostic::error(
                codes::ITEM_NEVER_DELIVERED,
                format!(
                    "knowledge item \"{}\" is not delivered on any completing path",
                    item.item_id
                ),
            ));
        }
    }

    for n in &g.nodes {
        for d in &n.delivers {
            if !g.knowledge_items.iter().any(|k| &k.item_id == d) {
                diags.push(Diagnostic::error(
                    codes::DANGLING_TRIGGER_TARGET,
                    format!("node \"{}\" delivers undeclared knowledge item \"{d}\"", n.node_id),
                ));
            }
        }
    }

    if let Some(guidance) = &g.guidance {
        for n in &g.nodes {
            let has_required_exit = g.edges.iter().any(|e| e.from_node == n.node_id);
            if has_required_exit {
                let ok = guidance.waypoints.get(&n.node_id).is_some_and(|w| !w.is_empty());
                if !ok {
                    diags.push(Diagnostic::warning(
                        codes::GUIDANCE_GAP,
                        format!(
                            "node \"{}\" has outgoing interactions but no guidance waypoints",
                            n.node_id
                        ),
                    ));
                }
            }
        }
    }

    diags
}

fn check_trigger(g: &NarrativeGraph, i: usize, e: &super::Edge, diags: &mut Vec<Diagnostic>) {
    let expect_kind = |node_id: &str, want: &str, diags: &mut Vec<Diagnostic>| {
        match g.node(node_id) {
            None => diags.push(Diagnostic::error(
                codes::DANGLING_TRIGGER_TARGET,
                format!("edge {i}: trigger references undeclared node \"{node_id}\""),
            )),
            Some(n) => {
                let actual = match n.kind {
                    NodeKind::Dialogue { .. } => "dialogue",
                    NodeKind::Task { .. } => "task",
                    NodeKind::Media { .. } => "media",
                    NodeKind::Teleport { .. } => "teleport",
                };
                if actual != want {
                    diags.push(Diagnostic::error(
                        codes::TRIGGER_KIND_MISMATCH,
                        format!(
                            "edge {i}: trigger expects a {want} node but \"{node_id}\" is a {actual} node"
                        ),
                    ));
                } else if e.from_node != node_id {
                    diags.push(Diagnostic::error(
                        codes::TRIGGER_KIND_MISMATCH,
                        format!(
                            "edge {i}: completion trigger must reference its own from_node \"{}\"",
                            e.from_node
                        ),
                    ));
                }
            }
        }
    };

    match &e.trigger {
        Trigger::CleanComplete { task_node_id } => expect_kind(task_node_id, "task", diags),
        Trigger::MediaEnd { media_node_id } => expect_kind(media_node_id, "media", diags),
        Trigger::DialogueEnd { dialogue_node_id } => expect_kind(dialogue_node_id, "dialogue", diags),
        Trigger::ResetDialogue => diags.push(Diagnostic::error(
            codes::INVALID_EDGE_TRIGGER,
            format!("edge {i}: reset_dialogue is a script event, not an edge trigger"),
        )),
        _ => {}
    }
}

fn flood<'a>(start: &'a str, adjacency: &BTreeMap<&'a str, Vec<&'a str>>) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some(n) = queue.pop_front() {
        if let Some(nexts) = adjacency.get(n) {
            for &next in nexts {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}
