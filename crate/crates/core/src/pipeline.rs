//! Machine + word + options to frames and diagrams in one call.

use thiserror::Error;

use crate::diagram::{emit_dot, render_svg, DiagramError, DiagramSpec, RenderError};
use crate::engine::{explore, ComputationForest, ExploreError, ExploreOptions, Verdict};
use crate::frames::{
    build_frames, decorate_invariants, frames_to_json, jump_to_invariant_failure, Direction, Frame,
};
use crate::invariant::{InvariantError, InvariantSet};
use crate::machine::{add_dead_state, Machine, StateName, Symbol};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error("invariant of state {state}: {error}")]
    Invariant {
        state: StateName,
        error: InvariantError,
    },
    #[error("frame {index} out of range (word has {count} frames)")]
    FrameOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

/// Everything needed to step through one run.
#[derive(Debug, Clone)]
pub struct Visualization {
    machine: Machine,
    forest: ComputationForest,
    frames: Vec<Frame>,
}

impl Visualization {
    /// With `options.add_dead` the machine is first completed with a dead
    /// state; a machine that is already complete is explored as is.
    pub fn build(
        machine: &Machine,
        word: &[Symbol],
        options: &ExploreOptions,
    ) -> Result<Visualization, PipelineError> {
        let machine = if options.add_dead {
            add_dead_state(machine)
        } else {
            machine.clone()
        };
        let options = options.clone().with_add_dead(machine.is_augmented());
        let forest = explore(&machine, word, &options)?;
        let programs = InvariantSet::from_machine(&machine)
            .map_err(|(state, error)| PipelineError::Invariant { state, error })?;
        let mut frames = build_frames(&forest, &machine);
        decorate_invariants(&mut frames, &forest, &programs);
        Ok(Visualization {
            machine,
            forest,
            frames,
        })
    }

    /// The explored machine, including any dead state.
    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn forest(&self) -> &ComputationForest {
        &self.forest
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn verdict(&self) -> Verdict {
        self.forest.verdict()
    }

    pub fn frame(&self, index: usize) -> Result<&Frame, PipelineError> {
        self.frames.get(index).ok_or(PipelineError::FrameOutOfRange {
            index,
            count: self.frames.len(),
        })
    }

    pub fn frames_json(&self) -> String {
        frames_to_json(&self.frames)
    }

    /// DOT for frame `index`, or the undecorated machine for `None`.
    pub fn dot(&self, index: Option<usize>) -> Result<String, PipelineError> {
        let spec = match index {
            Some(i) => DiagramSpec::with_frame(&self.machine, self.frame(i)?),
            None => DiagramSpec::new(&self.machine),
        };
        Ok(emit_dot(spec)?)
    }

    pub fn svg(&self, index: Option<usize>) -> Result<String, PipelineError> {
        Ok(render_svg(&self.dot(index)?)?)
    }

    pub fn jump(&self, from: usize, direction: Direction) -> Option<usize> {
        jump_to_invariant_failure(&self.frames, from, direction)
    }
}
