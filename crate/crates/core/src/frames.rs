//! Frames: the computation forest sliced by how much input has been read.
//!
//! Frame `n` shows every computation that has consumed exactly `n` symbols,
//! including nodes reached by ε-moves at that level. Edges are colored by
//! whether they lie on the tracked accepting computation, on some other
//! accepting computation, or on neither.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{ComputationForest, NodeId, NodeStatus, Verdict};
use crate::invariant::InvariantSet;
use crate::json::canonical;
use crate::machine::{Machine, StateName, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HighlightColor {
    /// Used by some computation that does not accept.
    Violet,
    /// Used by some accepting computation.
    Green,
    /// Used by the tracked accepting computation.
    DarkGreen,
}

impl HighlightColor {
    pub fn as_str(self) -> &'static str {
        match self {
            HighlightColor::Violet => "VIOLET",
            HighlightColor::Green => "GREEN",
            HighlightColor::DarkGreen => "DARK_GREEN",
        }
    }
}

impl fmt::Display for HighlightColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum NodeColor {
    #[default]
    #[serde(rename = "NONE")]
    None,
    /// Some computation in this state was cut off.
    #[serde(rename = "GOLD")]
    Gold,
    #[serde(rename = "INV_GREEN")]
    InvGreen,
    #[serde(rename = "INV_RED")]
    InvRed,
    /// The invariant holds for some accepting computations here and fails
    /// for others.
    #[serde(rename = "INV_BICOLOR")]
    InvBicolor,
}

impl NodeColor {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeColor::None => "NONE",
            NodeColor::Gold => "GOLD",
            NodeColor::InvGreen => "INV_GREEN",
            NodeColor::InvRed => "INV_RED",
            NodeColor::InvBicolor => "INV_BICOLOR",
        }
    }

    pub fn is_invariant(self) -> bool {
        matches!(
            self,
            NodeColor::InvGreen | NodeColor::InvRed | NodeColor::InvBicolor
        )
    }

    /// Red or bicolor: somewhere the invariant fails.
    pub fn is_failure(self) -> bool {
        matches!(self, NodeColor::InvRed | NodeColor::InvBicolor)
    }
}

impl fmt::Display for NodeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Highlight {
    pub rule: usize,
    pub color: HighlightColor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    /// Number of consumed input symbols.
    pub index: usize,
    pub displayed_nodes: Vec<NodeId>,
    /// Sorted by rule index; one entry per rule.
    pub highlighted_edges: Vec<Highlight>,
    /// Every state of the machine, `NONE` when undecorated.
    pub node_decorations: BTreeMap<StateName, NodeColor>,
    pub computation_count: usize,
    pub cutoff_count: usize,
    pub consumed: Vec<Symbol>,
    pub unconsumed: Vec<Symbol>,
    pub tracked_stack: Option<Vec<Symbol>>,
    pub verdict_banner: Option<Verdict>,
}

impl Frame {
    pub fn highlight(&self, rule: usize) -> Option<HighlightColor> {
        self.highlighted_edges
            .iter()
            .find(|h| h.rule == rule)
            .map(|h| h.color)
    }

    pub fn decoration(&self, state: &StateName) -> NodeColor {
        self.node_decorations.get(state).copied().unwrap_or_default()
    }

    pub fn has_invariant_failure(&self) -> bool {
        self.node_decorations.values().any(|c| c.is_failure())
    }

    pub fn to_json(&self) -> String {
        canonical(self)
    }
}

/// One frame per prefix length of the word, with highlights and cutoff
/// decorations. Invariant colors are added by [`decorate_invariants`].
pub fn build_frames(forest: &ComputationForest, machine: &Machine) -> Vec<Frame> {
    let word = forest.word();
    let last = word.len();
    let mut frames: Vec<Frame> = (0..=last)
        .map(|n| Frame {
            index: n,
            displayed_nodes: Vec::new(),
            highlighted_edges: Vec::new(),
            node_decorations: machine
                .states()
                .iter()
                .map(|s| (s.clone(), NodeColor::None))
                .collect(),
            computation_count: 0,
            cutoff_count: forest.cutoff_count(),
            consumed: word[..n].to_vec(),
            unconsumed: word[n..].to_vec(),
            tracked_stack: None,
            verdict_banner: (n == last).then(|| forest.verdict()),
        })
        .collect();

    let mut colors: Vec<BTreeMap<usize, HighlightColor>> = vec![BTreeMap::new(); last + 1];
    let track_stacks = forest.verdict() == Verdict::Accept && forest.kind().has_stack();

    for node in forest.nodes() {
        let id = node.id();
        let n = node.consumed_count();
        if node.status() != NodeStatus::Pruned {
            frames[n].displayed_nodes.push(id);
        }
        if node.status() == NodeStatus::Cutoff {
            frames[n]
                .node_decorations
                .insert(forest.state_name(id).clone(), NodeColor::Gold);
        }
        if let Some(rule) = node.via_rule() {
            let color = if forest.on_tracked_path(id) {
                HighlightColor::DarkGreen
            } else if forest.on_accepting_path(id) {
                HighlightColor::Green
            } else {
                HighlightColor::Violet
            };
            let slot = colors[n].entry(rule).or_insert(color);
            *slot = (*slot).max(color);
        }
        // Nodes come in breadth-first order, so the last tracked node seen
        // at a level is the deepest one.
        if track_stacks && forest.on_tracked_path(id) {
            frames[n].tracked_stack = forest.stack(id);
        }
    }

    for (frame, edges) in frames.iter_mut().zip(colors) {
        frame.computation_count = frame.displayed_nodes.len();
        frame.highlighted_edges = edges
            .into_iter()
            .map(|(rule, color)| Highlight { rule, color })
            .collect();
    }
    frames
}

/// Colors states whose invariant was checked by an accepting computation
/// at each frame: green if it held every time, red if it never held,
/// bicolor if both. Does nothing when no computation accepts.
pub fn decorate_invariants(
    frames: &mut [Frame],
    forest: &ComputationForest,
    programs: &InvariantSet,
) {
    if forest.accepting_leaves().is_empty() || programs.is_empty() {
        return;
    }
    for frame in frames.iter_mut() {
        // (held somewhere, failed somewhere)
        let mut outcomes: BTreeMap<&StateName, (bool, bool)> = BTreeMap::new();
        for &id in &frame.displayed_nodes {
            if !forest.on_accepting_path(id) {
                continue;
            }
            let state = forest.state_name(id);
            let Some(program) = programs.get(state) else {
                continue;
            };
            let stack = forest.stack(id);
            let holds = program.eval(forest.consumed(id), stack.as_deref());
            let entry = outcomes.entry(state).or_default();
            if holds {
                entry.0 = true;
            } else {
                entry.1 = true;
            }
        }
        for (state, outcome) in outcomes {
            let color = match outcome {
                (true, false) => NodeColor::InvGreen,
                (false, true) => NodeColor::InvRed,
                _ => NodeColor::InvBicolor,
            };
            frame.node_decorations.insert(state.clone(), color);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Next,
    Prev,
    Begin,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Next,
    Prev,
}

/// Clamped frame navigation. `frame_count` must be positive.
pub fn navigate(frame_count: usize, current: usize, command: Command) -> usize {
    let last = frame_count.saturating_sub(1);
    let current = current.min(last);
    match command {
        Command::Next => (current + 1).min(last),
        Command::Prev => current.saturating_sub(1),
        Command::Begin => 0,
        Command::End => last,
    }
}

/// Nearest frame strictly after (or before) `from` where some invariant
/// fails for an accepting computation.
pub fn jump_to_invariant_failure(frames: &[Frame], from: usize, direction: Direction) -> Option<usize> {
    match direction {
        Direction::Next => frames
            .iter()
            .skip(from.saturating_add(1))
            .find(|f| f.has_invariant_failure())
            .map(|f| f.index),
        Direction::Prev => frames[..from.min(frames.len())]
            .iter()
            .rev()
            .find(|f| f.has_invariant_failure())
            .map(|f| f.index),
    }
}

/// Canonical JSON array of frames.
pub fn frames_to_json(frames: &[Frame]) -> String {
    canonical(frames)
}
