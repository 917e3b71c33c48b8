use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Configuration, ExploreOptions, Verdict};
use crate::json::canonical;
use crate::machine::{Machine, MachineKind, StateName, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeStatus {
    /// Expanded, has children, not accepting.
    #[serde(rename = "LIVE")]
    Live,
    /// No rule applies and the configuration does not accept.
    #[serde(rename = "STUCK")]
    Stuck,
    /// Accepting configuration. May still have children.
    #[serde(rename = "ACCEPT-LEAF")]
    AcceptLeaf,
    /// Configuration seen earlier in the forest; not expanded.
    #[serde(rename = "PRUNED")]
    Pruned,
    /// Reached the step bound with rules still applicable.
    #[serde(rename = "CUTOFF")]
    Cutoff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationNode {
    pub(crate) id: NodeId,
    pub(crate) parent: Option<NodeId>,
    pub(crate) via_rule: Option<usize>,
    pub(crate) depth: u32,
    pub(crate) consumed: u32,
    pub(crate) state: u32,
    /// Bottom first.
    pub(crate) stack: Arc<[u32]>,
    pub(crate) status: NodeStatus,
    pub(crate) duplicate_of: Option<NodeId>,
}

impl ComputationNode {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn via_rule(&self) -> Option<usize> {
        self.via_rule
    }

    /// Transitions from the root.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of input symbols consumed so far.
    pub fn consumed_count(&self) -> usize {
        self.consumed as usize
    }

    pub fn status(&self) -> NodeStatus {
        self.status
    }

    /// For a pruned node, the node that first reached the same configuration.
    pub fn duplicate_of(&self) -> Option<NodeId> {
        self.duplicate_of
    }

    pub fn stack_depth(&self) -> usize {
        self.stack.len()
    }
}

/// Every computation of a machine on one word, without repeated
/// configurations. Node ids follow breadth-first order.
#[derive(Debug, Clone)]
pub struct ComputationForest {
    kind: MachineKind,
    state_names: Vec<StateName>,
    gamma: Vec<Symbol>,
    word: Vec<Symbol>,
    options: ExploreOptions,
    nodes: Vec<ComputationNode>,
    accepting: Vec<NodeId>,
    /// Node is an ancestor-or-self of an accepting leaf, where a pruned node
    /// continues through the node it duplicates.
    on_accepting_path: Vec<bool>,
    on_tracked_path: Vec<bool>,
}

impl ComputationForest {
    pub(crate) fn new(
        machine: &Machine,
        word: Vec<Symbol>,
        options: ExploreOptions,
        nodes: Vec<ComputationNode>,
    ) -> Self {
        let accepting: Vec<NodeId> = nodes
            .iter()
            .filter(|n| n.status == NodeStatus::AcceptLeaf)
            .map(|n| n.id)
            .collect();

        let mut aliases: Vec<Vec<NodeId>> = vec![Vec::new(); nodes.len()];
        for n in &nodes {
            if let Some(first) = n.duplicate_of {
                aliases[first.index()].push(n.id);
            }
        }
        let mut on_accepting_path = vec![false; nodes.len()];
        let mut work = accepting.clone();
        while let Some(id) = work.pop() {
            if std::mem::replace(&mut on_accepting_path[id.index()], true) {
                continue;
            }
            if let Some(p) = nodes[id.index()].parent {
                work.push(p);
            }
            work.extend(aliases[id.index()].iter().copied());
        }

        let mut on_tracked_path = vec![false; nodes.len()];
        let mut cur = accepting.first().copied();
        while let Some(id) = cur {
            on_tracked_path[id.index()] = true;
            cur = nodes[id.index()].parent;
        }

        ComputationForest {
            kind: machine.kind(),
            state_names: machine.states().to_vec(),
            gamma: machine.gamma().to_vec(),
            word,
            options,
            nodes,
            accepting,
            on_accepting_path,
            on_tracked_path,
        }
    }

    pub fn kind(&self) -> MachineKind {
        self.kind
    }

    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    pub fn options(&self) -> &ExploreOptions {
        &self.options
    }

    pub fn nodes(&self) -> &[ComputationNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &ComputationNode {
        &self.nodes[id.index()]
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn accepting_leaves(&self) -> &[NodeId] {
        &self.accepting
    }

    /// The breadth-first first accepting leaf: shallowest, then lowest rule
    /// indices along the path.
    pub fn tracked(&self) -> Option<NodeId> {
        self.accepting.first().copied()
    }

    pub fn cutoff_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.status == NodeStatus::Cutoff)
            .count()
    }

    pub fn verdict(&self) -> Verdict {
        if !self.accepting.is_empty() {
            Verdict::Accept
        } else if self.nodes.iter().any(|n| n.status == NodeStatus::Cutoff) {
            Verdict::CutoffLimit
        } else {
            Verdict::Reject
        }
    }

    pub fn on_accepting_path(&self, id: NodeId) -> bool {
        self.on_accepting_path[id.index()]
    }

    pub fn on_tracked_path(&self, id: NodeId) -> bool {
        self.on_tracked_path[id.index()]
    }

    pub fn state_name(&self, id: NodeId) -> &StateName {
        &self.state_names[self.node(id).state as usize]
    }

    /// Stack of `id`, top first. `None` for NFA forests.
    pub fn stack(&self, id: NodeId) -> Option<Vec<Symbol>> {
        match self.kind {
            MachineKind::Nfa => None,
            MachineKind::Pda => Some(
                self.node(id)
                    .stack
                    .iter()
                    .rev()
                    .map(|&g| self.gamma[g as usize].clone())
                    .collect(),
            ),
        }
    }

    pub fn consumed(&self, id: NodeId) -> &[Symbol] {
        &self.word[..self.node(id).consumed_count()]
    }

    pub fn config(&self, id: NodeId) -> Configuration {
        Configuration {
            state: self.state_name(id).clone(),
            unconsumed: self.word[self.node(id).consumed_count()..].to_vec(),
            stack: self.stack(id),
        }
    }

    /// Node ids from the root down to `id`.
    pub fn path_to(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = self.node(id).parent;
        while let Some(p) = cur {
            path.push(p);
            cur = self.node(p).parent;
        }
        path.reverse();
        path
    }

    pub fn children(&self, id: NodeId) -> impl Iterator<Item = &ComputationNode> + '_ {
        // Parents are non-decreasing across nodes[1..], so children are contiguous.
        let rest = &self.nodes[1.min(self.nodes.len())..];
        let start = rest.partition_point(|n| n.parent.is_some_and(|p| p < id));
        rest[start..].iter().take_while(move |n| n.parent == Some(id))
    }

    /// Canonical JSON dump of the forest, for debugging.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct NodeOut {
            id: NodeId,
            parent: Option<NodeId>,
            rule: Option<usize>,
            depth: u32,
            consumed: u32,
            config: Configuration,
            status: NodeStatus,
            duplicate_of: Option<NodeId>,
        }
        #[derive(Serialize)]
        struct ForestOut<'a> {
            kind: MachineKind,
            word: &'a [Symbol],
            options: &'a ExploreOptions,
            verdict: Verdict,
            tracked: Option<NodeId>,
            accepting_leaves: &'a [NodeId],
            nodes: Vec<NodeOut>,
        }
        let out = ForestOut {
            kind: self.kind,
            word: &self.word,
            options: &self.options,
            verdict: self.verdict(),
            tracked: self.tracked(),
            accepting_leaves: &self.accepting,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeOut {
                    id: n.id,
                    parent: n.parent,
                    rule: n.via_rule,
                    depth: n.depth,
                    consumed: n.consumed,
                    config: self.config(n.id),
                    status: n.status,
                    duplicate_of: n.duplicate_of,
                })
                .collect(),
        };
        canonical(&out)
    }
}
