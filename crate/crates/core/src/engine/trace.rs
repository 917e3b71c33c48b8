use std::fmt;

use super::{explore, Configuration, ExploreError, ExploreOptions, Verdict};
use crate::machine::{Machine, Symbol};

/// The tracked accepting computation, or a report of why there is none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub verdict: Verdict,
    /// Root-to-leaf configurations of the tracked computation; empty unless
    /// the verdict is accept.
    pub configurations: Vec<Configuration>,
    pub accepting_leaves: usize,
    pub explored: usize,
    pub cutoff: usize,
    pub max_steps: u32,
}

/// Accepting runs print as `(((a b) S) ((b) A) (() C) accept)`.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Accept => {
                f.write_str("(")?;
                for c in &self.configurations {
                    write!(f, "{c} ")?;
                }
                f.write_str("accept)")
            }
            Verdict::Reject => write!(
                f,
                "reject: no accepting computation ({} configurations explored)",
                self.explored
            ),
            Verdict::CutoffLimit => write!(
                f,
                "cutoff-limit: no accepting computation within {} steps; {} computations cut off ({} configurations explored)",
                self.max_steps,
                self.cutoff,
                self.explored
            ),
        }
    }
}

pub fn trace(
    machine: &Machine,
    word: &[Symbol],
    options: &ExploreOptions,
) -> Result<Trace, ExploreError> {
    let forest = explore(machine, word, options)?;
    let configurations = forest
        .tracked()
        .map(|leaf| forest.path_to(leaf).into_iter().map(|id| forest.config(id)).collect())
        .unwrap_or_default();
    Ok(Trace {
        verdict: forest.verdict(),
        configurations,
        accepting_leaves: forest.accepting_leaves().len(),
        explored: forest.len(),
        cutoff: forest.cutoff_count(),
        max_steps: options.max_steps,
    })
}
