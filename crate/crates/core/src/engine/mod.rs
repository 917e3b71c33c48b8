//! Breadth-first exploration of every computation of a machine on a word.
//!
//! The result is a [`ComputationForest`]: a tree of configurations rooted at
//! the start configuration. A configuration already generated anywhere in the
//! forest is recorded as a `PRUNED` node and never expanded, so each subtree
//! appears once. Pushdown computations are also bounded by
//! [`ExploreOptions::max_steps`] transitions; nodes that hit the bound with
//! moves left are `CUTOFF`.

mod compiled;
mod forest;
mod trace;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::{validate, Machine, MachineKind, StateName, Symbol, ValidationReport};
use compiled::Compiled;

pub use forest::{ComputationForest, ComputationNode, NodeId, NodeStatus};
pub use trace::{trace, Trace};

pub const DEFAULT_MAX_STEPS: u32 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct ExploreOptions {
    /// Transition bound per pushdown computation. Ignored for NFAs unless
    /// pruning is off.
    pub max_steps: u32,
    /// Explore the dead-state augmented machine. The caller augments; see
    /// [`crate::pipeline`].
    pub add_dead: bool,
    /// Skip configurations already seen. Turning this off is only meant for
    /// cross-checking.
    pub prune: bool,
    /// Abort once the forest grows past this many nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_limit: Option<usize>,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_steps: DEFAULT_MAX_STEPS,
            add_dead: false,
            prune: true,
            node_limit: None,
        }
    }
}

impl ExploreOptions {
    pub fn with_max_steps(max_steps: u32) -> Self {
        ExploreOptions {
            max_steps,
            ..Default::default()
        }
    }

    pub fn with_add_dead(mut self, add_dead: bool) -> Self {
        self.add_dead = add_dead;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("invalid machine:\n{0}")]
    InvalidMachine(ValidationReport),
    #[error("word symbol '{symbol}' at position {position} is not in the input alphabet")]
    UnknownSymbol { symbol: Symbol, position: usize },
    #[error("max_steps must be at least 1")]
    ZeroMaxSteps,
    #[error("add_dead requested but the machine has no dead state")]
    NotAugmented,
    #[error("computation forest exceeds {limit} nodes")]
    NodeLimit { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "ACCEPT")]
    Accept,
    #[serde(rename = "REJECT")]
    Reject,
    /// No accepting computation within the step bound, but some computation
    /// was cut off, so rejection cannot be certified.
    #[serde(rename = "CUTOFF-LIMIT")]
    CutoffLimit,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::CutoffLimit => "cutoff-limit",
        })
    }
}

/// An instantaneous description: state, unconsumed input and, for a PDA,
/// the stack (top first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub state: StateName,
    pub unconsumed: Vec<Symbol>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stack: Option<Vec<Symbol>>,
}

impl Configuration {
    pub fn nfa(state: &str, unconsumed: &[Symbol]) -> Self {
        Configuration {
            state: state.into(),
            unconsumed: unconsumed.to_vec(),
            stack: None,
        }
    }

    pub fn pda(state: &str, unconsumed: &[Symbol], stack: &[Symbol]) -> Self {
        Configuration {
            state: state.into(),
            unconsumed: unconsumed.to_vec(),
            stack: Some(stack.to_vec()),
        }
    }
}

fn fmt_list(f: &mut fmt::Formatter<'_>, items: &[Symbol]) -> fmt::Result {
    f.write_str("(")?;
    for (i, s) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str(")")
}

/// `((a b) S)` for an NFA, `((a b) S (b))` for a PDA.
impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_list(f, &self.unconsumed)?;
        write!(f, " {}", self.state)?;
        if let Some(stack) = &self.stack {
            f.write_str(" ")?;
            fmt_list(f, stack)?;
        }
        f.write_str(")")
    }
}

struct Indexed {
    state: u32,
    unconsumed: Vec<u32>,
    stack: Vec<u32>,
}

fn index_config(c: &Compiled, machine: &Machine, config: &Configuration) -> Option<Indexed> {
    let state = machine.state_index(&config.state)? as u32;
    let unconsumed = config
        .unconsumed
        .iter()
        .map(|s| c.sigma.get(s).copied())
        .collect::<Option<Vec<_>>>()?;
    let mut stack = config
        .stack
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .map(|s| c.gamma.get(s).copied())
        .collect::<Option<Vec<_>>>()?;
    stack.reverse();
    Some(Indexed {
        state,
        unconsumed,
        stack,
    })
}

/// Indices of the rules that apply to `config`, in rule order. Empty when
/// nothing applies or the configuration mentions unknown names.
pub fn applicable_rules(machine: &Machine, config: &Configuration) -> Vec<usize> {
    let c = Compiled::new(machine);
    match index_config(&c, machine, config) {
        Some(ix) => c.applicable(ix.state, ix.unconsumed.first().copied(), &ix.stack),
        None => Vec::new(),
    }
}

/// Applies rule `rule_index` to `config`. `None` if the rule does not apply.
pub fn step(machine: &Machine, config: &Configuration, rule_index: usize) -> Option<Configuration> {
    let c = Compiled::new(machine);
    let ix = index_config(&c, machine, config)?;
    let rule = c.rules.get(rule_index)?;
    if rule.src != ix.state || !c.applies(rule, ix.unconsumed.first().copied(), &ix.stack) {
        return None;
    }
    let consumed = usize::from(rule.read.is_some());
    let stack = match machine.kind() {
        MachineKind::Nfa => None,
        MachineKind::Pda => {
            let mut s = c.next_stack(rule, &ix.stack);
            s.reverse();
            Some(s.into_iter().map(|g| machine.gamma()[g as usize].clone()).collect())
        }
    };
    Some(Configuration {
        state: machine.states()[rule.dst as usize].clone(),
        unconsumed: config.unconsumed[consumed..].to_vec(),
        stack,
    })
}

/// Builds the pruned computation forest of `machine` on `word`.
pub fn explore(
    machine: &Machine,
    word: &[Symbol],
    options: &ExploreOptions,
) -> Result<ComputationForest, ExploreError> {
    let report = validate(machine);
    if !report.is_ok() {
        return Err(ExploreError::InvalidMachine(report));
    }
    if options.max_steps == 0 {
        return Err(ExploreError::ZeroMaxSteps);
    }
    if options.add_dead && !machine.is_augmented() {
        return Err(ExploreError::NotAugmented);
    }
    let c = Compiled::new(machine);
    let input: Vec<u32> = word
        .iter()
        .enumerate()
        .map(|(position, s)| {
            c.sigma.get(s).copied().ok_or_else(|| ExploreError::UnknownSymbol {
                symbol: s.clone(),
                position,
            })
        })
        .collect::<Result<_, _>>()?;

    let bounded = machine.kind() == MachineKind::Pda || !options.prune;
    let mut nodes: Vec<ComputationNode> = Vec::new();
    let mut visited: HashMap<(u32, u32, Arc<[u32]>), NodeId> = HashMap::new();

    let root_stack: Arc<[u32]> = Arc::from(Vec::new());
    visited.insert((c.start, 0, root_stack.clone()), NodeId(0));
    nodes.push(ComputationNode {
        id: NodeId(0),
        parent: None,
        via_rule: None,
        depth: 0,
        consumed: 0,
        state: c.start,
        stack: root_stack,
        status: NodeStatus::Live,
        duplicate_of: None,
    });

    let mut cursor = 0;
    while cursor < nodes.len() {
        let id = NodeId(cursor as u32);
        cursor += 1;
        let node = &nodes[id.index()];
        if node.status == NodeStatus::Pruned {
            continue;
        }
        let (state, pos, depth) = (node.state, node.consumed as usize, node.depth);
        let stack = node.stack.clone();
        let accepting = c.is_accepting(state, pos == input.len(), &stack);
        let applicable = c.applicable(state, input.get(pos).copied(), &stack);

        if bounded && depth >= options.max_steps {
            nodes[id.index()].status = if accepting {
                NodeStatus::AcceptLeaf
            } else if applicable.is_empty() {
                NodeStatus::Stuck
            } else {
                NodeStatus::Cutoff
            };
            continue;
        }
        nodes[id.index()].status = if accepting {
            NodeStatus::AcceptLeaf
        } else if applicable.is_empty() {
            NodeStatus::Stuck
        } else {
            NodeStatus::Live
        };

        for rule_index in applicable {
            let rule = &c.rules[rule_index];
            let child_pos = pos + usize::from(rule.read.is_some());
            let child_stack: Arc<[u32]> = if rule.pop.is_empty() && rule.push.is_empty() {
                stack.clone()
            } else {
                Arc::from(c.next_stack(rule, &stack))
            };
            let child_id = NodeId(nodes.len() as u32);
            let key = (rule.dst, child_pos as u32, child_stack.clone());
            let duplicate_of = if options.prune {
                match visited.get(&key) {
                    Some(&first) => Some(first),
                    None => {
                        visited.insert(key, child_id);
                        None
                    }
                }
            } else {
                None
            };
            nodes.push(ComputationNode {
                id: child_id,
                parent: Some(id),
                via_rule: Some(rule_index),
                depth: depth + 1,
                consumed: child_pos as u32,
                state: rule.dst,
                stack: child_stack,
                status: if duplicate_of.is_some() {
                    NodeStatus::Pruned
                } else {
                    NodeStatus::Live
                },
                duplicate_of,
            });
        }
        if let Some(limit) = options.node_limit {
            if nodes.len() > limit {
                return Err(ExploreError::NodeLimit { limit });
            }
        }
    }

    Ok(ComputationForest::new(machine, word.to_vec(), options.clone(), nodes))
}

/// `ACCEPT` if some computation accepts, `CUTOFF-LIMIT` if none does but
/// some was cut off, `REJECT` otherwise.
pub fn apply(
    machine: &Machine,
    word: &[Symbol],
    options: &ExploreOptions,
) -> Result<Verdict, ExploreError> {
    explore(machine, word, options).map(|f| f.verdict())
}
