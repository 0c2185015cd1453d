//! Deterministic headless replay of scripted events against a graph.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{NarrativeGraph, NodeKind, Trigger};

/// How rejected events are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Rejected events are recorded and skipped (free exploration).
    Lenient,
    /// The first rejected event ends the run with `RejectedEvent`.
    Strict,
}

/// What an event did.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "effect")]
pub enum StepEffect {
    /// The event fired an edge; the named node was entered.
    Entered { node_id: String },
    /// The event was accepted as progress within the current node.
    SubEvent,
    /// The event matched nothing and was skipped.
    Rejected { reason: String },
}

/// One processed event. `synthesized` marks transitions the simulator fired
/// on its own (a clean task completing).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStep {
    pub event: Trigger,
    pub synthesized: bool,
    #[serde(flatten)]
    pub effect: StepEffect,
    pub items_delivered: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum SimOutcome {
    Completed,
    Stuck { at_node: String },
    RejectedEvent { index: usize, reason: String },
}

/// Full replay record: every step with the cumulative delivered-item set,
/// which never shrinks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimTrace {
    pub steps: Vec<SimStep>,
    pub outcome: SimOutcome,
    pub final_node: String,
    pub items_delivered: Vec<String>,
}

impl fmt::Display for SimTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut stage = 0usize;
        for step in &self.steps {
            match &step.effect {
                StepEffect::Entered { node_id } => {
                    stage += 1;
                    let auto = if step.synthesized { " (auto)" } else { "" };
                    writeln!(
                        f,
                        "STAGE {stage} enter {node_id} via {}{auto} [{} items]",
                        trigger_name(&step.event),
                        step.items_delivered.len()
                    )?;
                }
                StepEffect::SubEvent => {
                    writeln!(f, "      sub-event {}", trigger_name(&step.event))?;
                }
                StepEffect::Rejected { reason } => {
                    writeln!(f, "      rejected {}: {reason}", trigger_name(&step.event))?;
                }
            }
        }
        match &self.outcome {
            SimOutcome::Completed => writeln!(f, "COMPLETED at {} with {} items", self.final_node, self.items_delivered.len()),
            SimOutcome::Stuck { at_node } => writeln!(f, "STUCK at {at_node} with {} items", self.items_delivered.len()),
            SimOutcome::RejectedEvent { index, reason } => {
                writeln!(f, "REJECTED event {index}: {reason}")
            }
        }
    }
}

fn trigger_name(t: &Trigger) -> String {
    match t {
        Trigger::GazeDwell { target_id, dwell_s } => format!("gaze_dwell({target_id}, {dwell_s}s)"),
        Trigger::RayClick { target_id } => format!("ray_click({target_id})"),
        Trigger::Proximity { target_id, radius_m } => format!("proximity({target_id}, {radius_m}m)"),
        Trigger::Grab { target_id } => format!("grab({target_id})"),
        Trigger::CleanComplete { task_node_id } => format!("clean_complete({task_node_id})"),
        Trigger::MediaEnd { media_node_id } => format!("media_end({media_node_id})"),
        Trigger::DialogueEnd { dialogue_node_id } => format!("dialogue_end({dialogue_node_id})"),
        Trigger::ResetDialogue => "reset_dialogue".to_string(),
    }
}

struct SimState<'g> {
    graph: &'g NarrativeGraph,
    current: String,
    delivered: BTreeSet<String>,
    cleaned: BTreeSet<String>,
}

impl<'g> SimState<'g> {
    fn enter(&mut self, node_id: &str) {
        self.current = node_id.to_string();
        self.cleaned.clear();
        if let Some(node) = self.graph.node(node_id) {
            for item in &node.delivers {
                self.delivered.insert(item.clone());
            }
        }
    }

    fn spot_goal(&self) -> Option<(u32, &'g [String])> {
        match &self.graph.node(&self.current)?.kind {
            NodeKind::Task { spot_count, target_ids, .. } => Some((*spot_count, target_ids)),
            _ => None,
        }
    }

    fn task_complete(&self) -> bool {
        self.spot_goal()
            .map(|(count, _)| self.cleaned.len() as u32 >= count)
            .unwrap_or(false)
    }

    /// Find the outgoing edge this event fires, honoring clean gating.
    fn firing_edge(&self, event: &Trigger) -> Option<&super::Edge> {
        self.graph.outgoing(&self.current).find(|e| {
            if !event.satisfies(&e.trigger) {
                return false;
            }
            match &e.trigger {
                Trigger::CleanComplete { .. } => self.task_complete(),
                _ => true,
            }
        })
    }

    /// Classify an event that fired no edge.
    fn sub_event(&mut self, event: &Trigger) -> Result<(), String> {
        let node = match self.graph.node(&self.current) {
            Some(n) => n,
            None => return Err("current node is undeclared".to_string()),
        };
        match (&node.kind, event) {
            (NodeKind::Task { target_ids, .. }, Trigger::Grab { target_id }) => {
                if !target_ids.contains(target_id) {
                    Err(format!("\"{target_id}\" is not a target of task \"{}\"", node.node_id))
                } else if !self.cleaned.insert(target_id.clone()) {
                    Err(format!("target \"{target_id}\" already cleaned"))
                } else {
                    Ok(())
                }
            }
            (NodeKind::Dialogue { speaker_slice_id, .. }, Trigger::RayClick { target_id }) => {
                if target_id == speaker_slice_id {
                    Ok(())
                } else {
                    Err(format!("\"{target_id}\" is not the speaker of \"{}\"", node.node_id))
                }
            }
            (NodeKind::Dialogue { .. }, Trigger::ResetDialogue) => Ok(()),
            (NodeKind::Dialogue { .. }, Trigger::DialogueEnd { dialogue_node_id })
                if dialogue_node_id == &node.node_id =>
            {
                Ok(())
            }
            (NodeKind::Media { .. }, Trigger::MediaEnd { media_node_id })
                if media_node_id == &node.node_id =>
            {
                Ok(())
            }
            _ => Err(format!("no matching interaction at node \"{}\"", node.node_id)),
        }
    }
}

/// Replay `script` against `g`, skipping rejected events.
pub fn simulate(g: &NarrativeGraph, script: &[Trigger]) -> SimTrace {
    run(g, script, SimMode::Lenient)
}

/// Replay `script` against `g`; the first rejected event is fatal.
pub fn simulate_strict(g: &NarrativeGraph, script: &[Trigger]) -> SimTrace {
    run(g, script, SimMode::Strict)
}

fn run(g: &NarrativeGraph, script: &[Trigger], mode: SimMode) -> SimTrace {
    let mut state = SimState {
        graph: g,
        current: String::new(),
        delivered: BTreeSet::new(),
        cleaned: BTreeSet::new(),
    };
    let start = g.start_node.clone();
    state.enter(&start);

    let mut steps = Vec::new();
    let delivered_vec = |s: &SimState| s.delivered.iter().cloned().collect::<Vec<_>>();

    for (index, event) in script.iter().enumerate() {
        if g.is_terminal(&state.current) {
            // Terminal reached; trailing events are rejected.
            let reason = "already at a terminal node".to_string();
            if mode == SimMode::Strict {
                return SimTrace {
                    steps,
                    outcome: SimOutcome::RejectedEvent { index, reason },
                    final_node: state.current.clone(),
                    items_delivered: delivered_vec(&state),
                };
            }
            steps.push(SimStep {
                event: event.clone(),
                synthesized: false,
                effect: StepEffect::Rejected { reason },
                items_delivered: delivered_vec(&state),
            });
            continue;
        }

        if let Some(edge) = state.firing_edge(event) {
            let to = edge.to_node.clone();
            state.enter(&to);
            steps.push(SimStep {
                event: event.clone(),
                synthesized: false,
                effect: StepEffect::Entered { node_id: to },
                items_delivered: delivered_vec(&state),
            });
            continue;
        }

        match state.sub_event(event) {
            Ok(()) => {
                steps.push(SimStep {
                    event: event.clone(),
                    synthesized: false,
                    effect: StepEffect::SubEvent,
                    items_delivered: delivered_vec(&state),
                });
                // A completed clean task advances on its own.
                if state.task_complete() {
                    let auto = Trigger::CleanComplete { task_node_id: state.current.clone() };
                    if let Some(edge) = state.firing_edge(&auto) {
                        let to = edge.to_node.clone();
                        state.enter(&to);
                        steps.push(SimStep {
                            event: auto,
                            synthesized: true,
                            effect: StepEffect::Entered { node_id: to },
                            items_delivered: delivered_vec(&state),
                        });
                    }
                }
            }
            Err(reason) => {
                if mode == SimMode::Strict {
                    return SimTrace {
                        steps,
                        outcome: SimOutcome::RejectedEvent { index, reason },
                        final_node: state.current.clone(),
                        items_delivered: delivered_vec(&state),
                    };
                }
                steps.push(SimStep {
                    event: event.clone(),
                    synthesized: false,
                    effect: StepEffect::Rejected { reason },
                    items_delivered: delivered_vec(&state),
                });
            }
        }
    }

    let outcome = if g.is_terminal(&state.current) {
        SimOutcome::Completed
    } else {
        SimOutcome::Stuck { at_node: state.current.clone() }
    };
    SimTrace {
        steps,
        outcome,
        final_node: state.current.clone(),
        items_delivered: delivered_vec(&state),
    }
}
