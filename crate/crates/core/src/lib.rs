//! Step-by-step visualization of nondeterministic finite and pushdown
//! automata: computation forests, frames, state invariants and diagrams.

pub mod diagram;
pub mod engine;
pub mod frames;
pub mod invariant;
pub mod json;
pub mod machine;
pub mod pipeline;
pub mod samples;

pub use engine::{
    apply, explore, trace, ComputationForest, ComputationNode, Configuration, ExploreError,
    ExploreOptions, NodeId, NodeStatus, Trace, Verdict,
};

pub use frames::{Frame, HighlightColor, NodeColor};
pub use invariant::{InvariantError, InvariantProgram, InvariantSet};
pub use pipeline::{PipelineError, Visualization};
pub use machine::{add_dead_state, validate, word, Machine, MachineKind, Rule, StateName, Symbol};

